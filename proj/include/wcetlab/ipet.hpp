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

#ifndef WCETLAB_IPET_HPP
#define WCETLAB_IPET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "wcetlab/cache.hpp"
#include "wcetlab/layout.hpp"
#include "wcetlab/lp.hpp"
#include "wcetlab/program.hpp"

namespace wcetlab {

struct ipet_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-block cycle cost under one memory scenario.
using BlockCost = std::map<std::string, std::uint64_t>;

/// scratchpad/main region timing
struct FlatScenario {};
/// direct-mapped cache with a MUST classification
struct CacheScenario {
    CacheConfig cache;
    const AccessClassification *classification = nullptr;
};
using Scenario = std::variant<FlatScenario, CacheScenario>;

BlockCost build_block_costs(const Program &p, const MemoryLayout &layout, const Scenario &scenario);

/// The flow model: execution-count variables per block and per edge (plus a
/// virtual entry edge and one virtual exit edge per exit block), flow
/// conservation, entry count 1, and one relative bound per back edge.
struct IpetModel {
    struct Edge {
        std::string src, dst;  // "" src = virtual entry, "" dst = virtual exit
    };
    std::vector<std::string> block_order;
    std::vector<Edge> edges;
    std::map<std::string, int> block_var;  // block id -> LP variable index
    std::map<std::pair<std::string, std::string>, int> edge_var;
    int entry_var = -1;
    LinearProgram lp;
};

IpetModel build_ipet(const Program &p, const BlockCost &costs);

struct WcetResult {
    std::uint64_t wcet = 0;
    std::map<std::string, std::uint64_t> witness;  // block id -> execution count
};

WcetResult solve_ipet(const IpetModel &m);

WcetResult analyze_wcet(const Program &p, const MemoryLayout &layout, const Scenario &scenario);

/// CPLEX-style LP text dump (diagnostic).
std::string dump_lp(const IpetModel &m);

} // namespace wcetlab

#endif
