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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wcetlab/cache.hpp"
#include "wcetlab/sim.hpp"

using namespace wcetlab;

namespace {

CacheConfig small_cache() {
    CacheConfig cfg;
    cfg.capacity = 64;  // 4 sets
    return cfg;
}

AbstractAccess precise_line(const CacheConfig &cfg, std::uint64_t line_index) {
    AbstractAccess a;
    a.precise = true;
    a.line = line_index * cfg.line_size;
    return a;
}

} // namespace

TEST_CASE("cache config sanity") {
    CacheConfig cfg;
    cfg.capacity = 1024;
    CHECK(cfg.n_sets() == 64);
    CHECK(cfg.hit_cycles == 1);
    CHECK(cfg.miss_cycles == 16);  // four word fills, 4 cycles each
    CacheConfig bad;
    bad.capacity = 100;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("update: first access installs its line") {
    auto cfg = small_cache();
    auto s = AbstractCacheState::bottom(cfg);
    auto s2 = abstract_update(s, precise_line(cfg, 2), cfg);
    CHECK(s2.lines[2] == 2 * cfg.line_size);
    CHECK_FALSE(s2.lines[0].has_value());
}

TEST_CASE("update: direct-mapped replacement is deterministic") {
    auto cfg = small_cache();
    auto s = AbstractCacheState::bottom(cfg);
    s = abstract_update(s, precise_line(cfg, 0), cfg);   // line 0 -> set 0
    s = abstract_update(s, precise_line(cfg, 4), cfg);   // line 4 -> set 0 too
    CHECK(s.lines[0] == 4 * cfg.line_size);
}

TEST_CASE("update: unknown range conservatively clears the spanned sets") {
    auto cfg = small_cache();
    auto s = AbstractCacheState::bottom(cfg);
    s = abstract_update(s, precise_line(cfg, 0), cfg);
    s = abstract_update(s, precise_line(cfg, 1), cfg);
    s = abstract_update(s, precise_line(cfg, 2), cfg);
    AbstractAccess unknown;
    unknown.precise = false;
    unknown.lo_addr = 0;
    unknown.hi_addr = 31;  // lines 0..1, sets {0,1}
    auto s2 = abstract_update(s, unknown, cfg);
    CHECK_FALSE(s2.lines[0].has_value());
    CHECK_FALSE(s2.lines[1].has_value());
    CHECK(s2.lines[2].has_value());

    // oracle: the update must be at least as pessimistic as every concrete
    // address the range allows
    for (std::uint64_t addr = unknown.lo_addr; addr <= unknown.hi_addr; ++addr) {
        auto concrete = abstract_update(s, precise_line(cfg, addr / cfg.line_size), cfg);
        for (std::uint32_t set = 0; set < cfg.n_sets(); ++set)
            if (s2.lines[set])
                CHECK(concrete.lines[set] == s2.lines[set]);
    }
}

TEST_CASE("join laws: idempotent, commutative, associative, pointwise") {
    auto cfg = small_cache();
    std::mt19937_64 rng(3);
    auto random_state = [&] {
        auto s = AbstractCacheState::bottom(cfg);
        for (std::uint32_t set = 0; set < cfg.n_sets(); ++set)
            if (rng() % 2)
                s.lines[set] = (set + cfg.n_sets() * (rng() % 3)) * cfg.line_size;
        return s;
    };
    for (int i = 0; i < 200; ++i) {
        auto a = random_state(), b = random_state(), c = random_state();
        CHECK(abstract_join(a, a) == a);
        CHECK(abstract_join(a, b) == abstract_join(b, a));
        CHECK(abstract_join(abstract_join(a, b), c) == abstract_join(a, abstract_join(b, c)));
        auto j = abstract_join(a, b);
        for (std::uint32_t set = 0; set < cfg.n_sets(); ++set) {
            if (a.lines[set] && b.lines[set] && a.lines[set] == b.lines[set])
                CHECK(j.lines[set] == a.lines[set]);
            else
                CHECK_FALSE(j.lines[set].has_value());
        }
    }
}

TEST_CASE("join: disagreement clears, agreement survives") {
    auto cfg = small_cache();
    auto a = AbstractCacheState::bottom(cfg);
    auto b = AbstractCacheState::bottom(cfg);
    a.lines[0] = 0;
    b.lines[0] = 4 * cfg.line_size;
    CHECK_FALSE(abstract_join(a, b).lines[0].has_value());
    a.lines[1] = cfg.line_size;
    b.lines[1] = cfg.line_size;
    CHECK(abstract_join(a, b).lines[1] == cfg.line_size);
}

namespace {

struct Analyzed {
    Program p;
    MemoryLayout layout;
    CacheConfig cache;
    AccessClassification cls;
};

Analyzed analyze(const std::string &text, std::uint32_t capacity) {
    Analyzed a{load_program(text), {}, {}, {}};
    a.layout = assign_layout(a.p, {}, LayoutConfig{});
    a.cache.capacity = capacity;
    a.cls = classify_accesses(a.p, a.layout, a.cache,
                              fixpoint_must(a.p, a.layout, a.cache));
    return a;
}

} // namespace

TEST_CASE("straight line: the second block inherits the first block's line") {
    // 4 + 4 halfwords share one 16-byte line
    auto a = analyze(R"(
OBJECT f function size=16 width=16 accesses=0
BLOCK b0 owner=f instrs=4 succ=b1
BLOCK b1 owner=f instrs=4
ENTRY b0
EXIT b1
)",
                     64);
    auto fix = fixpoint_must(a.p, a.layout, a.cache);
    CHECK(fix.at("b1").lines[a.cache.set_of(a.layout.address_of("f", 0))] ==
          a.cache.line_of(a.layout.address_of("f", 0)));
    // and every b1 fetch is a guaranteed hit
    for (auto c : a.cls.per_block.at("b1"))
        CHECK(c == Classification::AlwaysHit);
}

TEST_CASE("loop body lines are not guaranteed at the header (no persistence)") {
    // b0 (line 0) -> loop body b1 (line 1) self-looping: at b1's entry the
    // join of the entry edge (line 1 absent) and the back edge (line 1
    // present) discards line 1, so its first fetch stays unclassified.
    auto a = analyze(R"(
OBJECT f function size=34 width=16 accesses=0
BLOCK b0 owner=f instrs=8 succ=b1
BLOCK b1 owner=f instrs=8 succ=b1,b2
BLOCK b2 owner=f instrs=1
ENTRY b0
EXIT b2
LOOPBOUND b1->b1 10
)",
                     64);
    auto fix = fixpoint_must(a.p, a.layout, a.cache);
    auto line_b1 = a.cache.line_of(a.layout.address_of("f", 16));
    CHECK_FALSE(fix.at("b1").lines[a.cache.set_of(line_b1)] == line_b1);
    const auto &cls = a.cls.per_block.at("b1");
    CHECK(cls[0] == Classification::NotClassified);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(cls[i] == Classification::AlwaysHit);
}

TEST_CASE("diamond: a line loaded on both branches survives the join") {
    auto a = analyze(R"(
OBJECT f function size=48 width=16 accesses=0
OBJECT g data size=64 width=32 accesses=0
BLOCK b0 owner=f instrs=8 succ=b1,b2
BLOCK b1 owner=f instrs=4 succ=b3
ACCESS b1 pos=4 obj=g lo=0 hi=0 width=32
BLOCK b2 owner=f instrs=4 succ=b3
ACCESS b2 pos=4 obj=g lo=0 hi=0 width=32
BLOCK b3 owner=f instrs=1
ENTRY b0
EXIT b3
)",
                     256);
    auto fix = fixpoint_must(a.p, a.layout, a.cache);
    auto line_g = a.cache.line_of(a.layout.address_of("g", 0));
    CHECK(fix.at("b3").lines[a.cache.set_of(line_g)] == line_g);
}

TEST_CASE("cold line: first fetch misses, the next seven hit") {
    auto a = analyze(R"(
OBJECT f function size=16 width=16 accesses=0
BLOCK b0 owner=f instrs=8
ENTRY b0
EXIT b0
)",
                     64);
    const auto &cls = a.cls.per_block.at("b0");
    REQUIRE(cls.size() == 8);
    CHECK(cls[0] == Classification::NotClassified);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(cls[i] == Classification::AlwaysHit);
}

TEST_CASE("wide data range: unclassified and kills the spanned sets") {
    auto a = analyze(R"(
OBJECT f function size=18 width=16 accesses=0
OBJECT g data size=64 width=32 accesses=0
BLOCK b0 owner=f instrs=8 succ=b1
ACCESS b0 pos=8 obj=g lo=0 hi=60 width=32
BLOCK b1 owner=f instrs=1
ENTRY b0
EXIT b1
)",
                     64);
    const auto &cls = a.cls.per_block.at("b0");
    CHECK(cls.back() == Classification::NotClassified);
    // g spans all four sets of the 64-byte cache: everything is gone after it
    auto fix = fixpoint_must(a.p, a.layout, a.cache);
    for (const auto &l : fix.at("b1").lines)
        CHECK_FALSE(l.has_value());
}

TEST_CASE("event costs") {
    CacheConfig cfg;
    CHECK(wcet_event_cost(Classification::AlwaysHit, cfg) == 1);
    CHECK(wcet_event_cost(Classification::NotClassified, cfg) == 16);
    int total = wcet_event_cost(Classification::NotClassified, cfg) +
                wcet_event_cost(Classification::AlwaysHit, cfg) +
                wcet_event_cost(Classification::AlwaysHit, cfg);
    CHECK(total == 18);
}

TEST_CASE("classification dump format") {
    auto a = analyze(R"(
OBJECT f function size=4 width=16 accesses=0
BLOCK b0 owner=f instrs=2
ENTRY b0
EXIT b0
)",
                     64);
    CHECK(dump_classification(a.cls) == "b0 0 not-classified\nb0 1 always-hit\n");
}

TEST_CASE("soundness: always-hit never misses in the exact simulation") {
    std::mt19937_64 rng(99);
    int checked_events = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        oracles::ProgramGen gen(seed ^ 0xcafe, 15, 6);
        Program p = gen.generate();
        auto layout = assign_layout(p, {}, LayoutConfig{});
        CacheConfig cache;
        cache.capacity = 64u << (rng() % 8);
        auto cls = classify_accesses(p, layout, cache, fixpoint_must(p, layout, cache));

        for (int t = 0; t < 5; ++t) {
            Trace trace = generate_trace(p, TracePolicy::Random, rng());
            // replay the concrete cache alongside the per-event classification
            std::vector<std::optional<std::uint64_t>> sets(cache.n_sets());
            for (const auto &step : trace.steps) {
                const auto &b = p.block(step.block);
                auto events = enumerate_access_events(p, b);
                std::size_t data_idx = 0, ev_idx = 0;
                for (const auto &ev : events) {
                    std::uint32_t off = ev.is_fetch ? ev.lo : step.offsets[data_idx++];
                    std::uint64_t addr = layout.address_of(ev.object, off);
                    std::uint64_t line = cache.line_of(addr);
                    std::uint32_t set = cache.set_of(addr);
                    bool hit = sets[set] && *sets[set] == line;
                    if (cls.per_block.at(step.block)[ev_idx] == Classification::AlwaysHit) {
                        CHECK(hit);
                        ++checked_events;
                    }
                    sets[set] = line;
                    ++ev_idx;
                }
            }
        }
    }
    CHECK(checked_events > 1000);  // the property must actually bite
}

TEST_CASE("classification is deterministic") {
    oracles::ProgramGen gen(42, 12, 4);
    Program p = gen.generate();
    auto layout = assign_layout(p, {}, LayoutConfig{});
    CacheConfig cache;
    cache.capacity = 512;
    auto c1 = classify_accesses(p, layout, cache, fixpoint_must(p, layout, cache));
    auto c2 = classify_accesses(p, layout, cache, fixpoint_must(p, layout, cache));
    CHECK(c1.per_block == c2.per_block);
}
