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

#ifndef WCETLAB_ALLOCATOR_HPP
#define WCETLAB_ALLOCATOR_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "wcetlab/layout.hpp"
#include "wcetlab/program.hpp"

namespace wcetlab {

struct KnapsackItem {
    std::string id;
    std::uint64_t size = 0;      // bytes
    std::uint64_t benefit = 0;   // cycles saved if allocated to scratchpad
};

struct AllocationProblem {
    std::vector<KnapsackItem> items;
    std::uint64_t capacity = 0;  // bytes
};

struct AllocationResult {
    std::set<std::string> selected;
    std::uint64_t total_benefit = 0;
    std::uint64_t total_size = 0;
};

/// Cycles saved by moving one object to scratchpad: profile access count times
/// the main-vs-scratchpad cost difference at the object's access width.
std::uint64_t compute_benefit(const MemoryObject &o);

AllocationProblem build_problem(const Program &p, std::uint64_t capacity);

/// Exact 0/1 knapsack (DP over capacity). Ties broken towards smaller total
/// size, then the lexicographically smallest id set.
AllocationResult solve_knapsack(const AllocationProblem &prob);

std::vector<std::pair<std::uint64_t, AllocationResult>>
sweep_capacities(const Program &p, const std::vector<std::uint64_t> &capacities);

} // namespace wcetlab

#endif
