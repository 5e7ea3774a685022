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

#include "wcetlab/cache.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace wcetlab {

void CacheConfig::validate() const {
    if (line_size == 0 || capacity == 0 || capacity % line_size != 0)
        throw std::invalid_argument("cache capacity must be a positive multiple of the line size");
    if ((capacity & (capacity - 1)) != 0)
        throw std::invalid_argument("cache capacity must be a power of two");
}

AbstractCacheState abstract_update(const AbstractCacheState &s, const AbstractAccess &acc,
                                   const CacheConfig &cfg) {
    AbstractCacheState out = s;
    if (acc.precise) {
        out.lines[cfg.set_of(acc.line)] = cfg.line_of(acc.line);
        return out;
    }
    // unknown address: every set the range may touch loses its MUST fact
    std::uint64_t first_line = acc.lo_addr / cfg.line_size;
    std::uint64_t last_line = acc.hi_addr / cfg.line_size;
    if (last_line - first_line + 1 >= cfg.n_sets()) {
        for (auto &l : out.lines)
            l.reset();
    } else {
        for (std::uint64_t ln = first_line; ln <= last_line; ++ln)
            out.lines[static_cast<std::uint32_t>(ln % cfg.n_sets())].reset();
    }
    return out;
}

AbstractCacheState abstract_join(const AbstractCacheState &a, const AbstractCacheState &b) {
    if (a.lines.size() != b.lines.size())
        throw std::invalid_argument("joining abstract states of different cache configs");
    AbstractCacheState out;
    out.lines.resize(a.lines.size());
    for (std::size_t i = 0; i < a.lines.size(); ++i)
        if (a.lines[i] && b.lines[i] && *a.lines[i] == *b.lines[i])
            out.lines[i] = a.lines[i];
    return out;
}

AbstractAccess abstract_access_of(const MemoryLayout &layout, const AccessEvent &event,
                                  const CacheConfig &cfg) {
    std::uint64_t lo = layout.address_of(event.object, event.lo);
    std::uint64_t hi = layout.address_of(event.object, event.hi);
    AbstractAccess acc;
    if (cfg.line_of(lo) == cfg.line_of(hi)) {
        acc.precise = true;
        acc.line = cfg.line_of(lo);
    } else {
        acc.precise = false;
        acc.lo_addr = lo;
        acc.hi_addr = hi;
    }
    return acc;
}

namespace {

AbstractCacheState transfer_block(const Program &p, const MemoryLayout &layout,
                                  const CacheConfig &cfg, const BasicBlock &b,
                                  AbstractCacheState state,
                                  std::vector<Classification> *cls_out) {
    for (const auto &ev : enumerate_access_events(p, b)) {
        auto acc = abstract_access_of(layout, ev, cfg);
        if (cls_out) {
            bool hit = acc.precise && state.lines[cfg.set_of(acc.line)] &&
                       *state.lines[cfg.set_of(acc.line)] == cfg.line_of(acc.line);
            cls_out->push_back(hit ? Classification::AlwaysHit : Classification::NotClassified);
        }
        state = abstract_update(state, acc, cfg);
    }
    return state;
}

} // namespace

std::map<std::string, AbstractCacheState>
fixpoint_must(const Program &p, const MemoryLayout &layout, const CacheConfig &cfg) {
    cfg.validate();
    std::map<std::string, AbstractCacheState> in_state;
    std::map<std::string, AbstractCacheState> out_state;
    for (const auto &b : p.blocks)
        in_state[b.id] = AbstractCacheState::bottom(cfg);

    std::deque<std::string> work;
    std::map<std::string, bool> queued;
    work.push_back(p.flow.entry);
    queued[p.flow.entry] = true;

    while (!work.empty()) {
        auto id = work.front();
        work.pop_front();
        queued[id] = false;
        const auto &b = p.block(id);

        AbstractCacheState in = AbstractCacheState::bottom(cfg);
        bool first = true;
        if (id != p.flow.entry) {
            for (const auto &pred : p.predecessors(id)) {
                auto it = out_state.find(pred);
                if (it == out_state.end())
                    continue;  // pred not yet visited: no constraint yet
                if (first) {
                    in = it->second;
                    first = false;
                } else {
                    in = abstract_join(in, it->second);
                }
            }
        }
        // entry keeps the all-unknown initial state (cold cache)

        auto out = transfer_block(p, layout, cfg, b, in, nullptr);
        auto prev = out_state.find(id);
        bool changed = prev == out_state.end() || !(prev->second == out);
        in_state[id] = std::move(in);
        if (changed) {
            out_state[id] = std::move(out);
            for (const auto &s : b.successors)
                if (!queued[s]) {
                    queued[s] = true;
                    work.push_back(s);
                }
        }
    }
    return in_state;
}

AccessClassification classify_accesses(const Program &p, const MemoryLayout &layout,
                                       const CacheConfig &cfg,
                                       const std::map<std::string, AbstractCacheState> &fixpoint) {
    AccessClassification cls;
    for (const auto &b : p.blocks) {
        auto it = fixpoint.find(b.id);
        if (it == fixpoint.end())
            throw std::invalid_argument("no fixpoint state for block '" + b.id + "'");
        std::vector<Classification> events;
        transfer_block(p, layout, cfg, b, it->second, &events);
        cls.per_block[b.id] = std::move(events);
    }
    return cls;
}

int wcet_event_cost(Classification c, const CacheConfig &cfg) {
    return c == Classification::AlwaysHit ? cfg.hit_cycles : cfg.miss_cycles;
}

std::string dump_classification(const AccessClassification &cls) {
    std::ostringstream out;
    for (const auto &[block, events] : cls.per_block)
        for (std::size_t i = 0; i < events.size(); ++i)
            out << block << ' ' << i << ' '
                << (events[i] == Classification::AlwaysHit ? "always-hit" : "not-classified")
                << '\n';
    return out.str();
}

} // namespace wcetlab
