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

#include "wcetlab/allocator.hpp"

#include <algorithm>
#include <numeric>

namespace wcetlab {

std::uint64_t compute_benefit(const MemoryObject &o) {
    const auto main_mem = default_timing(RegionKind::Main);
    const auto spm = default_timing(RegionKind::Scratchpad);
    int width = o.kind == ObjectKind::FunctionCode ? 16
                : o.kind == ObjectKind::LiteralPool ? 32
                                                    : o.element_width;
    return o.access_count * static_cast<std::uint64_t>(main_mem.at(width) - spm.at(width));
}

AllocationProblem build_problem(const Program &p, std::uint64_t capacity) {
    AllocationProblem prob;
    prob.capacity = capacity;
    for (const auto &o : p.objects)
        prob.items.push_back({o.id, o.size, compute_benefit(o)});
    return prob;
}

namespace {

struct DpCell {
    std::uint64_t benefit = 0;
    std::uint64_t size = 0;
    std::vector<std::uint8_t> member;  // per sorted-item index
};

std::vector<std::string> selected_ids(const std::vector<KnapsackItem> &items,
                                      const std::vector<std::uint8_t> &member) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (member[i])
            ids.push_back(items[i].id);
    return ids;  // items are sorted by id, so this is sorted too
}

// true if a is strictly preferable: larger benefit, then smaller size, then
// lexicographically smaller id set
bool better(const DpCell &a, const DpCell &b, const std::vector<KnapsackItem> &items) {
    if (a.benefit != b.benefit)
        return a.benefit > b.benefit;
    if (a.size != b.size)
        return a.size < b.size;
    return selected_ids(items, a.member) < selected_ids(items, b.member);
}

} // namespace

AllocationResult solve_knapsack(const AllocationProblem &prob) {
    std::vector<KnapsackItem> items = prob.items;
    std::sort(items.begin(), items.end(),
              [](const KnapsackItem &a, const KnapsackItem &b) { return a.id < b.id; });
    for (const auto &it : items)
        if (it.size == 0)
            throw std::invalid_argument("knapsack item '" + it.id + "' has size 0");

    std::uint64_t total = std::accumulate(items.begin(), items.end(), std::uint64_t{0},
                                          [](std::uint64_t s, const KnapsackItem &i) { return s + i.size; });
    // capacity beyond the total footprint is equivalent to the total footprint
    const std::uint64_t cap = std::min(prob.capacity, total);

    std::vector<DpCell> dp(cap + 1);
    for (auto &cell : dp)
        cell.member.assign(items.size(), 0);

    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto &it = items[i];
        if (it.size > cap)
            continue;
        for (std::uint64_t c = cap; c + 1 > it.size; --c) {
            DpCell cand = dp[c - it.size];
            cand.benefit += it.benefit;
            cand.size += it.size;
            cand.member[i] = 1;
            if (better(cand, dp[c], items))
                dp[c] = std::move(cand);
        }
    }

    const DpCell &best = dp[cap];
    AllocationResult res;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (best.member[i])
            res.selected.insert(items[i].id);
    res.total_benefit = best.benefit;
    res.total_size = best.size;
    return res;
}

std::vector<std::pair<std::uint64_t, AllocationResult>>
sweep_capacities(const Program &p, const std::vector<std::uint64_t> &capacities) {
    std::vector<std::pair<std::uint64_t, AllocationResult>> out;
    for (auto cap : capacities)
        out.emplace_back(cap, solve_knapsack(build_problem(p, cap)));
    return out;
}

} // namespace wcetlab
