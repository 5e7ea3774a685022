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

#ifndef WCETLAB_CACHE_HPP
#define WCETLAB_CACHE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wcetlab/layout.hpp"
#include "wcetlab/program.hpp"

namespace wcetlab {

/// Direct-mapped unified cache, 16-byte lines (four 32 bit words). A miss
/// refills the whole line with four word accesses from main memory, 4 cycles
/// each; a hit delivers the word in one cycle.
struct CacheConfig {
    std::uint32_t capacity = 1024;   // bytes, power of two
    std::uint32_t line_size = 16;
    int hit_cycles = 1;
    int miss_cycles = 16;

    std::uint32_t n_sets() const { return capacity / line_size; }
    std::uint32_t set_of(std::uint64_t addr) const {
        return static_cast<std::uint32_t>((addr / line_size) % n_sets());
    }
    std::uint64_t line_of(std::uint64_t addr) const { return addr / line_size * line_size; }
    void validate() const;
};

/// MUST abstraction for a direct-mapped cache: per set, either the one line
/// guaranteed present on every path, or nothing.
struct AbstractCacheState {
    std::vector<std::optional<std::uint64_t>> lines;  // per set, aligned line address

    static AbstractCacheState bottom(const CacheConfig &cfg) {
        return {std::vector<std::optional<std::uint64_t>>(cfg.n_sets())};
    }
    bool operator==(const AbstractCacheState &) const = default;
};

/// Access to a known line, or to an unknown address within [lo_addr, hi_addr].
struct AbstractAccess {
    bool precise = true;
    std::uint64_t line = 0;          // when precise
    std::uint64_t lo_addr = 0, hi_addr = 0;  // when imprecise
};

AbstractCacheState abstract_update(const AbstractCacheState &s, const AbstractAccess &acc,
                                   const CacheConfig &cfg);

/// MUST join: pointwise intersection (agreeing lines survive).
AbstractCacheState abstract_join(const AbstractCacheState &a, const AbstractCacheState &b);

enum class Classification { AlwaysHit, NotClassified };

/// Turn one symbolic event into its abstract access under a layout. An access
/// touches the line of its first byte; an imprecise offset range widens to the
/// range of possible first bytes.
AbstractAccess abstract_access_of(const MemoryLayout &layout, const AccessEvent &event,
                                  const CacheConfig &cfg);

/// Incoming MUST state per block (least fixpoint, entry state all-unknown).
std::map<std::string, AbstractCacheState>
fixpoint_must(const Program &p, const MemoryLayout &layout, const CacheConfig &cfg);

/// Classification per (block, event index).
struct AccessClassification {
    std::map<std::string, std::vector<Classification>> per_block;
};

AccessClassification classify_accesses(const Program &p, const MemoryLayout &layout,
                                       const CacheConfig &cfg,
                                       const std::map<std::string, AbstractCacheState> &fixpoint);

int wcet_event_cost(Classification c, const CacheConfig &cfg);

/// Diagnostic dump: `<block> <event-index> <always-hit|not-classified>` lines.
std::string dump_classification(const AccessClassification &cls);

} // namespace wcetlab

#endif
