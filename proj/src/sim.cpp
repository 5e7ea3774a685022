/*******************************************************************************
 * Copyright 2026 wcetlab contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#include "wcetlab/sim.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace wcetlab {

namespace {

// resolve the events of one step to concrete (event, address-offset) pairs
std::vector<std::pair<AccessEvent, std::uint32_t>> resolve_events(const Program &p,
                                                                  const TraceStep &step) {
    const auto &b = p.block(step.block);
    if (step.offsets.size() != b.data_accesses.size())
        throw trace_error("step for block '" + step.block + "' resolves " +
                          std::to_string(step.offsets.size()) + " accesses, block has " +
                          std::to_string(b.data_accesses.size()));
    std::vector<std::pair<AccessEvent, std::uint32_t>> out;
    std::size_t data_idx = 0;
    for (const auto &ev : enumerate_access_events(p, b)) {
        if (ev.is_fetch) {
            out.push_back({ev, ev.lo});
        } else {
            std::uint32_t off = step.offsets[data_idx++];
            if (off < ev.lo || off > ev.hi)
                throw trace_error("resolved offset " + std::to_string(off) + " in block '" +
                                  step.block + "' is outside [" + std::to_string(ev.lo) + "," +
                                  std::to_string(ev.hi) + "]");
            if ((off - ev.lo) % (ev.width / 8) != 0)
                throw trace_error("resolved offset " + std::to_string(off) + " in block '" +
                                  step.block + "' is not " + std::to_string(ev.width / 8) +
                                  "-byte aligned within its range");
            out.push_back({ev, off});
        }
    }
    return out;
}

} // namespace

void validate_trace(const Program &p, const Trace &t) {
    if (t.steps.empty())
        throw trace_error("trace must start at entry");
    if (t.steps.front().block != p.flow.entry)
        throw trace_error("trace must start at entry");
    if (!p.flow.exits.count(t.steps.back().block))
        throw trace_error("trace must end at an exit block");

    auto back_edges = find_back_edges(p);
    std::map<std::pair<std::string, std::string>, std::uint32_t> taken;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto &step = t.steps[i];
        if (!p.has_block(step.block))
            throw trace_error("trace visits unknown block '" + step.block + "'");
        resolve_events(p, step);  // offset validation
        if (i + 1 < t.steps.size()) {
            const auto &next = t.steps[i + 1].block;
            const auto &succs = p.block(step.block).successors;
            if (std::find(succs.begin(), succs.end(), next) == succs.end())
                throw trace_error("trace edge " + step.block + "->" + next + " is not a CFG edge");
            std::pair<std::string, std::string> edge{step.block, next};
            if (back_edges.count(edge)) {
                std::uint32_t bound = p.flow.loop_bounds.at(edge);
                if (++taken[edge] > bound)
                    throw trace_error("trace exceeds loop bound on " + step.block + "->" + next);
            } else {
                // entering `next` from outside resets its loops
                for (const auto &be : back_edges)
                    if (be.second == next)
                        taken[be] = 0;
            }
        }
    }
}

SimResult simulate_flat(const Program &p, const MemoryLayout &layout, const Trace &t) {
    validate_trace(p, t);
    SimResult res;
    for (const auto &step : t.steps) {
        std::uint64_t block_cycles = 0;
        for (const auto &[ev, off] : resolve_events(p, step))
            block_cycles += access_cost(layout, ev);
        res.cycles += block_cycles;
        res.per_block_cycles[step.block] += block_cycles;
    }
    return res;
}

SimResult simulate_cached(const Program &p, const MemoryLayout &layout, const CacheConfig &cache,
                          const Trace &t) {
    cache.validate();
    validate_trace(p, t);
    std::vector<std::optional<std::uint64_t>> sets(cache.n_sets());
    SimResult res;
    for (const auto &step : t.steps) {
        std::uint64_t block_cycles = 0;
        for (const auto &[ev, off] : resolve_events(p, step)) {
            std::uint64_t addr = layout.address_of(ev.object, off);
            std::uint64_t line = cache.line_of(addr);
            std::uint32_t set = cache.set_of(addr);
            if (sets[set] && *sets[set] == line) {
                block_cycles += cache.hit_cycles;
                ++res.hits;
            } else {
                block_cycles += cache.miss_cycles;
                ++res.misses;
                sets[set] = line;
            }
        }
        res.cycles += block_cycles;
        res.per_block_cycles[step.block] += block_cycles;
    }
    return res;
}

namespace {

// layout-independent cost used to pick the "expensive" branch in worst mode
std::uint64_t static_block_weight(const Program &p, const std::string &id) {
    const auto main_mem = default_timing(RegionKind::Main);
    std::uint64_t w = 0;
    for (const auto &ev : enumerate_access_events(p, p.block(id)))
        w += main_mem.at(ev.width);
    return w;
}

} // namespace

Trace generate_trace(const Program &p, TracePolicy policy, std::uint64_t seed) {
    auto back_edges = find_back_edges(p);
    std::map<std::pair<std::string, std::string>, std::uint32_t> taken;
    std::map<std::pair<std::string, std::size_t>, std::uint64_t> sweep;  // (block, access) counter
    std::map<std::string, std::map<std::string, double>> credit;
    std::mt19937_64 rng(seed);

    Trace t;
    std::string cur = p.flow.entry;
    const std::size_t step_limit = 2'000'000;
    for (;;) {
        if (t.steps.size() >= step_limit)
            throw trace_error("trace generation exceeded the step limit");
        const auto &b = p.block(cur);

        TraceStep step;
        step.block = cur;
        for (std::size_t i = 0; i < b.data_accesses.size(); ++i) {
            const auto &a = b.data_accesses[i];
            std::uint32_t stride = static_cast<std::uint32_t>(a.width / 8);
            std::uint32_t elements = (a.hi - a.lo) / stride + 1;
            std::uint64_t k;
            if (policy == TracePolicy::Random)
                k = std::uniform_int_distribution<std::uint64_t>(0, elements - 1)(rng);
            else
                k = sweep[{cur, i}]++ % elements;
            step.offsets.push_back(a.lo + static_cast<std::uint32_t>(k) * stride);
        }
        t.steps.push_back(std::move(step));

        if (b.successors.empty())
            break;

        // admissible successors under the remaining loop budget
        std::vector<std::string> allowed;
        for (const auto &s : b.successors) {
            std::pair<std::string, std::string> edge{cur, s};
            if (back_edges.count(edge) && taken[edge] >= p.flow.loop_bounds.at(edge))
                continue;
            allowed.push_back(s);
        }
        if (allowed.empty())
            throw trace_error("trace generation stuck at block '" + cur + "' (loop budget spent)");

        std::string next;
        if (allowed.size() == 1) {
            next = allowed.front();
        } else if (policy == TracePolicy::Random) {
            next = allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
        } else {
            // loop decision first: a back-edge successor is taken while its
            // per-entry budget (typical count or bound) is unspent
            std::string loop_choice;
            for (const auto &s : allowed) {
                std::pair<std::string, std::string> edge{cur, s};
                if (!back_edges.count(edge))
                    continue;
                std::uint32_t budget = p.flow.loop_bounds.at(edge);
                if (policy == TracePolicy::Typical) {
                    auto it = p.flow.typical_counts.find(edge);
                    if (it != p.flow.typical_counts.end())
                        budget = it->second;
                }
                if (taken[edge] < budget)
                    loop_choice = s;
            }
            if (!loop_choice.empty()) {
                next = loop_choice;
            } else if (std::any_of(allowed.begin(), allowed.end(), [&](const std::string &s) {
                           return back_edges.count({cur, s}) != 0;
                       }) &&
                       policy == TracePolicy::Typical) {
                // typical budget spent: leave the loop
                for (const auto &s : allowed)
                    if (!back_edges.count({cur, s}))
                        next = s;
                if (next.empty())
                    next = allowed.front();
            } else if (policy == TracePolicy::WorstCaseHint) {
                auto hint = p.flow.worst_succ.find(cur);
                if (hint != p.flow.worst_succ.end() &&
                    std::find(allowed.begin(), allowed.end(), hint->second) != allowed.end()) {
                    next = hint->second;
                } else {
                    next = *std::max_element(allowed.begin(), allowed.end(),
                                             [&](const std::string &x, const std::string &y) {
                                                 return static_block_weight(p, x) <
                                                        static_block_weight(p, y);
                                             });
                }
            } else {
                // typical branch: deterministic proportional pick by weights
                auto probs_it = p.flow.branch_probs.find(cur);
                double total = 0;
                for (const auto &s : allowed) {
                    double w = 1.0;
                    if (probs_it != p.flow.branch_probs.end()) {
                        auto wit = probs_it->second.find(s);
                        w = wit == probs_it->second.end() ? 0.0 : wit->second;
                    }
                    credit[cur][s] += w;
                    total += w;
                }
                if (total == 0) {
                    next = allowed.front();
                } else {
                    next = *std::max_element(allowed.begin(), allowed.end(),
                                             [&](const std::string &x, const std::string &y) {
                                                 return credit[cur][x] < credit[cur][y];
                                             });
                    credit[cur][next] -= total;
                }
            }
        }

        std::pair<std::string, std::string> edge{cur, next};
        if (back_edges.count(edge)) {
            ++taken[edge];
        } else {
            for (const auto &be : back_edges)
                if (be.second == next)
                    taken[be] = 0;
        }
        cur = next;
    }
    validate_trace(p, t);
    return t;
}

std::string serialize_trace(const Trace &t) {
    std::ostringstream out;
    for (const auto &step : t.steps) {
        out << step.block;
        for (std::size_t i = 0; i < step.offsets.size(); ++i)
            out << (i == 0 ? " " : ",") << step.offsets[i];
        out << '\n';
    }
    return out.str();
}

Trace parse_trace(const std::string &text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string block, offsets;
        if (!(ss >> block))
            continue;
        if (block[0] == '#')
            continue;
        TraceStep step;
        step.block = block;
        if (ss >> offsets) {
            std::istringstream os(offsets);
            std::string tok;
            while (std::getline(os, tok, ',')) {
                try {
                    step.offsets.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
                } catch (const std::exception &) {
                    throw parse_error(lineno, "bad offset '" + tok + "' in trace");
                }
            }
        }
        t.steps.push_back(std::move(step));
    }
    return t;
}

} // namespace wcetlab
