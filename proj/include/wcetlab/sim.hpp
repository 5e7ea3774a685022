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

#ifndef WCETLAB_SIM_HPP
#define WCETLAB_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wcetlab/cache.hpp"
#include "wcetlab/layout.hpp"
#include "wcetlab/program.hpp"

namespace wcetlab {

struct trace_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One executed block with every offset range of its data accesses resolved to
/// a concrete byte offset.
struct TraceStep {
    std::string block;
    std::vector<std::uint32_t> offsets;  // one per data access, declaration order
};

struct Trace {
    std::vector<TraceStep> steps;
};

struct SimResult {
    std::uint64_t cycles = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::map<std::string, std::uint64_t> per_block_cycles;
};

/// Check CFG adjacency, entry/exit, relative loop bounds and offset ranges.
void validate_trace(const Program &p, const Trace &t);

/// Pure region timing (scratchpad scenario).
SimResult simulate_flat(const Program &p, const MemoryLayout &layout, const Trace &t);

/// Exact direct-mapped cache, cold start; hit 1 cycle, miss 16 + line install.
SimResult simulate_cached(const Program &p, const MemoryLayout &layout, const CacheConfig &cache,
                          const Trace &t);

enum class TracePolicy { Typical, WorstCaseHint, Random };

/// Bounded CFG walk. Typical follows declared branch weights and typical loop
/// counts; worst-case-hint drives every loop to its bound and follows WORST
/// hints (falling back to the costlier immediate successor); random is a
/// seed-reproducible uniform bounded walk.
Trace generate_trace(const Program &p, TracePolicy policy, std::uint64_t seed = 0);

std::string serialize_trace(const Trace &t);
Trace parse_trace(const std::string &text);

} // namespace wcetlab

#endif
