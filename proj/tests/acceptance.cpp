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

// End-to-end acceptance checks. One line of output per criterion; the process
// exits nonzero when any criterion fails.

#include <cstdio>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wcetlab/allocator.hpp"
#include "wcetlab/experiment.hpp"
#include "wcetlab/ipet.hpp"
#include "wcetlab/sim.hpp"

using namespace wcetlab;

namespace {

int failures = 0;

void verdict(int criterion, bool ok, const std::string &what) {
    std::printf("criterion %d: %s  %s\n", criterion, ok ? "pass" : "FAIL", what.c_str());
    if (!ok)
        ++failures;
}

Program bench(const char *name) {
    return load_program(
        oracles::read_file(std::string(WCETLAB_BENCHMARK_DIR) + "/" + name + ".prog"));
}

// 1. No simulated trace ever exceeds the analyzed WCET, under both the flat
//    scratchpad/main model and the cache model.
void criterion_wcet_is_an_upper_bound() {
    std::mt19937_64 rng(0x5afe);
    int checked = 0;
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 400 && ok; ++seed) {
        oracles::ProgramGen gen(seed, 10, 4);
        Program p = gen.generate();

        // random scratchpad selection under a random capacity
        std::set<std::string> sel;
        std::uint64_t need = 0;
        for (const auto &o : p.objects)
            if (rng() % 2) {
                sel.insert(o.id);
                need += o.size;
            }
        LayoutConfig cfg;
        cfg.spm_capacity = need;
        auto layout = assign_layout(p, sel, cfg);
        auto flat_wcet = analyze_wcet(p, layout, FlatScenario{}).wcet;

        auto cache_layout = assign_layout(p, {}, LayoutConfig{});
        CacheConfig cache;
        cache.capacity = 64u << (rng() % 8);
        auto cls = classify_accesses(p, cache_layout, cache,
                                     fixpoint_must(p, cache_layout, cache));
        auto cache_wcet = analyze_wcet(p, cache_layout, CacheScenario{cache, &cls}).wcet;

        for (int t = 0; t < 3 && ok; ++t) {
            Trace tr = generate_trace(p, t == 0 ? TracePolicy::WorstCaseHint : TracePolicy::Random,
                                      rng());
            auto flat = simulate_flat(p, layout, tr);
            auto cached = simulate_cached(p, cache_layout, cache, tr);
            ++checked;
            if (flat.cycles > flat_wcet || cached.cycles > cache_wcet) {
                ok = false;
                detail = "violated at seed " + std::to_string(seed);
            }
        }
    }
    std::ostringstream what;
    what << "simulated cycles never exceed the WCET bound (" << checked
         << " program/layout/trace combinations, flat and cached)";
    if (!ok)
        what << ": " << detail;
    verdict(1, ok && checked >= 1000, what.str());
}

// 2. On the single-path-per-iteration sort kernel the bound is exact: the
//    worst-case-hint trace reproduces the analyzed cycle count.
void criterion_exact_on_insertion_sort() {
    Program p = bench("insertion_sort");
    auto layout = assign_layout(p, {}, LayoutConfig{});
    auto wcet = analyze_wcet(p, layout, FlatScenario{}).wcet;
    auto sim = simulate_flat(p, layout, generate_trace(p, TracePolicy::WorstCaseHint)).cycles;
    std::ostringstream what;
    what << "insertion_sort flat WCET " << wcet << " equals the worst-hint simulation " << sim;
    verdict(2, wcet == sim, what.str());
}

// 3. Scratchpad ratios stay flat across the capacity sweep (max/min <= 1.10
//    per benchmark).
void criterion_spm_ratio_constant() {
    bool ok = true;
    std::ostringstream what;
    what << "scratchpad WCET/sim ratio stays within 10% across 64 B..8 KiB:";
    for (const char *name : {"insertion_sort", "multi_sort_like", "codec_like"}) {
        auto rows = run_sweep(name, bench(name), Hierarchy::Scratchpad, standard_sizes());
        double lo = 1e300, hi = 0;
        for (const auto &r : rows) {
            lo = std::min(lo, r.ratio());
            hi = std::max(hi, r.ratio());
        }
        ok = ok && hi / lo <= 1.10;
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s %.3f", name, hi / lo);
        what << buf;
    }
    verdict(3, ok, what.str());
}

// 4. Cache: the bound barely moves with capacity while the exact simulation
//    improves, so the overestimation grows with cache size.
void criterion_cache_overestimation_grows() {
    Program p = bench("multi_sort_like");
    auto spm_rows = run_sweep("multi_sort_like", p, Hierarchy::Scratchpad, standard_sizes());
    auto rows = run_sweep("multi_sort_like", p, Hierarchy::Cache, standard_sizes());

    std::uint64_t wcet_lo = UINT64_MAX, wcet_hi = 0;
    std::uint64_t sim_1k = 0, sim_8k = 0;
    for (const auto &r : rows) {
        if (r.size >= 1024) {
            wcet_lo = std::min(wcet_lo, r.wcet_cycles);
            wcet_hi = std::max(wcet_hi, r.wcet_cycles);
        }
        if (r.size == 1024)
            sim_1k = r.sim_cycles;
        if (r.size == 8192)
            sim_8k = r.sim_cycles;
    }
    bool wcet_flat = static_cast<double>(wcet_hi) / static_cast<double>(wcet_lo) < 1.05;
    bool sim_drops = static_cast<double>(sim_8k) <= 0.80 * static_cast<double>(sim_1k);

    auto all = spm_rows;
    all.insert(all.end(), rows.begin(), rows.end());
    auto claims = check_claims(all);

    std::ostringstream what;
    what << "multi_sort_like cache WCET varies " << wcet_lo << ".." << wcet_hi
         << " over 1..8 KiB while the simulation drops " << sim_1k << " -> " << sim_8k
         << "; ratio at 8 KiB >= 1.5x the minimum: " << (claims.cache_ratio_grows ? "yes" : "no");
    verdict(4, wcet_flat && sim_drops && claims.cache_ratio_grows, what.str());
}

// 5. The allocator is exactly optimal against subset enumeration.
void criterion_allocator_optimal() {
    std::mt19937_64 rng(0xa110c);
    bool ok = true;
    int n_trials = 500;
    for (int trial = 0; trial < n_trials && ok; ++trial) {
        AllocationProblem prob;
        std::size_t n = 1 + trial % 20;  // cycles through every item count up to 20
        for (std::size_t i = 0; i < n; ++i)
            prob.items.push_back({"o" + std::to_string(i), 1 + rng() % 4096, rng() % 10000});
        prob.capacity = rng() % 8192;
        auto res = solve_knapsack(prob);
        ok = res.total_benefit == oracles::knapsack_oracle(prob) &&
             res.total_size <= prob.capacity;
    }
    verdict(5, ok,
            "knapsack allocation matches subset enumeration on " + std::to_string(n_trials) +
                " random instances up to 20 objects");
}

// 6. MUST classification is sound: an always-hit access never misses in the
//    exact cache simulation, on any feasible trace.
void criterion_must_soundness() {
    std::mt19937_64 rng(0xcac4e);
    bool ok = true;
    int traces = 0;
    long long hits_checked = 0;
    for (std::uint64_t seed = 0; seed < 250 && ok; ++seed) {
        oracles::ProgramGen gen(seed ^ 0x6a61, 14, 6);
        Program p = gen.generate();
        auto layout = assign_layout(p, {}, LayoutConfig{});
        CacheConfig cache;
        cache.capacity = 64u << (rng() % 8);
        auto cls = classify_accesses(p, layout, cache, fixpoint_must(p, layout, cache));

        for (int t = 0; t < 5 && ok; ++t) {
            Trace tr = generate_trace(p, TracePolicy::Random, rng());
            ++traces;
            std::vector<std::optional<std::uint64_t>> sets(cache.n_sets());
            for (const auto &step : tr.steps) {
                auto events = enumerate_access_events(p, p.block(step.block));
                std::size_t data_idx = 0, ev_idx = 0;
                for (const auto &ev : events) {
                    std::uint32_t off = ev.is_fetch ? ev.lo : step.offsets[data_idx++];
                    std::uint64_t addr = layout.address_of(ev.object, off);
                    std::uint64_t line = cache.line_of(addr);
                    std::uint32_t set = cache.set_of(addr);
                    bool hit = sets[set] && *sets[set] == line;
                    if (cls.per_block.at(step.block)[ev_idx] == Classification::AlwaysHit) {
                        ++hits_checked;
                        if (!hit)
                            ok = false;
                    }
                    sets[set] = line;
                    ++ev_idx;
                }
            }
        }
    }
    std::ostringstream what;
    what << "no always-hit access missed in " << traces << " random traces (" << hits_checked
         << " classified hits replayed)";
    verdict(6, ok && traces >= 1000 && hits_checked > 0, what.str());
}

// 7. The flow-based bound is exact where exhaustive oracles exist.
void criterion_ipet_matches_oracles() {
    bool ok = true;
    int dags = 0, loopy = 0;
    for (std::uint64_t seed = 0; seed < 200 && ok; ++seed) {
        oracles::ProgramGen gen(seed ^ 0xda6, 14, 4, /*allow_loops=*/false);
        Program p = gen.generate();
        auto layout = assign_layout(p, {}, LayoutConfig{});
        auto costs = build_block_costs(p, layout, FlatScenario{});
        ok = solve_ipet(build_ipet(p, costs)).wcet == oracles::dag_longest_path_oracle(p, costs);
        ++dags;
    }
    for (std::uint64_t seed = 0; seed < 300 && ok && loopy < 200; ++seed) {
        oracles::ProgramGen gen(seed ^ 0x100b, 9, 3);
        Program p = gen.generate();
        auto layout = assign_layout(p, {}, LayoutConfig{});
        auto costs = build_block_costs(p, layout, FlatScenario{});
        auto oracle = oracles::longest_path_oracle(p, costs, 400000);
        if (!oracle)
            continue;
        ok = solve_ipet(build_ipet(p, costs)).wcet == *oracle;
        ++loopy;
    }
    std::ostringstream what;
    what << "flow bound equals exhaustive longest path on " << dags << " DAGs and " << loopy
         << " loopy CFGs";
    verdict(7, ok && dags >= 200 && loopy >= 150, what.str());
}

// 8. The timing model is wired up with the intended constants.
void criterion_timing_model() {
    auto main_mem = default_timing(RegionKind::Main);
    auto spm = default_timing(RegionKind::Scratchpad);
    CacheConfig cache;
    bool ok = main_mem.at(8) == 2 && main_mem.at(16) == 2 && main_mem.at(32) == 4 &&
              spm.at(8) == 1 && spm.at(16) == 1 && spm.at(32) == 1 && cache.hit_cycles == 1 &&
              cache.miss_cycles == 16 && cache.line_size == 16;
    verdict(8, ok,
            "timing constants: main 2/2/4 cycles by width, scratchpad 1, cache hit 1 / miss 16, "
            "16-byte lines");
}

// 9. The annotation interchange format round-trips, including the historical
//    spelling variants of the access-mode column.
void criterion_annotation_format() {
    const char *board = R"(# scratchpad
MEMORY_AREA: 0x400eb0 0x400fbb 1:1 1 READONLY CODE&DATA
MEMORY_AREA: 0x400fbc 0x401063 1:1 2 READ-ONLY CODE-ONLY
MEMORY_AREA: 0x401064 0x40106f 1:1 4 READ-ONLY DATA-ONLY
MEMORY_AREA: 0x401070 0x402083 1:1 4 READWRITE DATA-ONLY
MEMORY_AREA: 0x402084 0x402092 1:1 2 READ&WRITE DATA-ONLY
)";
    bool ok = true;
    try {
        auto areas = parse_annotation(board);
        ok = areas.size() == 5 && areas[0].cycles == 1 && areas[1].cycles == 2 &&
             areas[2].cycles == 4 && areas[3].cycles == 4 && areas[4].cycles == 2;
        ok = ok && parse_annotation(render_annotation(areas)) == areas;

        // emitted annotations for a real layout round trip as well
        Program p = bench("insertion_sort");
        auto alloc = solve_knapsack(build_problem(p, 128));
        LayoutConfig cfg;
        cfg.spm_capacity = 128;
        auto layout = assign_layout(p, alloc.selected, cfg);
        auto emitted = annotation_areas(p, layout);
        ok = ok && parse_annotation(render_annotation(emitted)) == emitted;
    } catch (const std::exception &) {
        ok = false;
    }
    verdict(9, ok, "memory annotation text parses, re-renders and round trips");
}

} // namespace

int main() {
    criterion_wcet_is_an_upper_bound();
    criterion_exact_on_insertion_sort();
    criterion_spm_ratio_constant();
    criterion_cache_overestimation_grows();
    criterion_allocator_optimal();
    criterion_must_soundness();
    criterion_ipet_matches_oracles();
    criterion_timing_model();
    criterion_annotation_format();
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
