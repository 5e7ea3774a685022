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

#include "wcetlab/experiment.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

#include "wcetlab/allocator.hpp"
#include "wcetlab/cache.hpp"
#include "wcetlab/ipet.hpp"

namespace wcetlab {

std::vector<std::uint64_t> standard_sizes() {
    return {64, 128, 256, 512, 1024, 2048, 4096, 8192};
}

std::vector<ExperimentRow> run_sweep(const std::string &benchmark_name, const Program &p,
                                     Hierarchy hierarchy,
                                     const std::vector<std::uint64_t> &sizes,
                                     TracePolicy trace_policy, std::uint64_t seed) {
    std::vector<ExperimentRow> rows;
    Trace trace = generate_trace(p, trace_policy, seed);

    if (hierarchy == Hierarchy::Scratchpad) {
        for (auto size : sizes) {
            auto alloc = solve_knapsack(build_problem(p, size));
            LayoutConfig cfg;
            cfg.spm_capacity = size;
            auto layout = assign_layout(p, alloc.selected, cfg);
            auto sim = simulate_flat(p, layout, trace);
            auto wcet = analyze_wcet(p, layout, FlatScenario{});
            rows.push_back({benchmark_name, hierarchy, size, sim.cycles, wcet.wcet});
        }
    } else {
        LayoutConfig cfg;  // no scratchpad: the cache fronts main memory
        auto layout = assign_layout(p, {}, cfg);
        for (auto size : sizes) {
            CacheConfig cache;
            cache.capacity = static_cast<std::uint32_t>(size);
            auto sim = simulate_cached(p, layout, cache, trace);
            auto cls = classify_accesses(p, layout, cache, fixpoint_must(p, layout, cache));
            auto wcet = analyze_wcet(p, layout, CacheScenario{cache, &cls});
            rows.push_back({benchmark_name, hierarchy, size, sim.cycles, wcet.wcet});
        }
    }
    return rows;
}

namespace {

const char *hierarchy_name(Hierarchy h) {
    return h == Hierarchy::Scratchpad ? "scratchpad" : "cache";
}

std::string format_ratio(double r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << r;
    return out.str();
}

} // namespace

std::string report(const std::vector<ExperimentRow> &rows, ReportFormat format) {
    std::vector<ExperimentRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ExperimentRow &a, const ExperimentRow &b) {
                         if (a.benchmark != b.benchmark)
                             return a.benchmark < b.benchmark;
                         if (a.hierarchy != b.hierarchy)
                             return a.hierarchy == Hierarchy::Cache;
                         return a.size < b.size;
                     });
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "benchmark,hierarchy,size,sim_cycles,wcet_cycles,ratio\n";
        for (const auto &r : sorted)
            out << r.benchmark << ',' << hierarchy_name(r.hierarchy) << ',' << r.size << ','
                << r.sim_cycles << ',' << r.wcet_cycles << ',' << format_ratio(r.ratio()) << '\n';
    } else {
        // normalized view: simulated cycles pinned at 1.000 per row
        out << std::left << std::setw(16) << "benchmark" << std::setw(12) << "hierarchy"
            << std::right << std::setw(8) << "size" << std::setw(12) << "sim" << std::setw(12)
            << "wcet" << std::setw(10) << "ratio" << '\n';
        for (const auto &r : sorted)
            out << std::left << std::setw(16) << r.benchmark << std::setw(12)
                << hierarchy_name(r.hierarchy) << std::right << std::setw(8) << r.size
                << std::setw(12) << "1.000" << std::setw(12) << format_ratio(r.ratio())
                << std::setw(10) << format_ratio(r.ratio()) << '\n';
    }
    return out.str();
}

std::vector<ExperimentRow> parse_csv_report(const std::string &text) {
    std::vector<ExperimentRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 6)
            throw parse_error(lineno, "CSV row must have 6 fields");
        ExperimentRow r;
        r.benchmark = fields[0];
        if (fields[1] == "scratchpad")
            r.hierarchy = Hierarchy::Scratchpad;
        else if (fields[1] == "cache")
            r.hierarchy = Hierarchy::Cache;
        else
            throw parse_error(lineno, "unknown hierarchy '" + fields[1] + "'");
        r.size = std::stoull(fields[2]);
        r.sim_cycles = std::stoull(fields[3]);
        r.wcet_cycles = std::stoull(fields[4]);
        rows.push_back(r);
    }
    return rows;
}

ClaimReport check_claims(const std::vector<ExperimentRow> &rows) {
    std::vector<const ExperimentRow *> spm, cache;
    for (const auto &r : rows)
        (r.hierarchy == Hierarchy::Scratchpad ? spm : cache).push_back(&r);
    if (spm.empty())
        throw std::invalid_argument("incomplete: missing scratchpad leg");
    if (cache.empty())
        throw std::invalid_argument("incomplete: missing cache leg");

    ClaimReport rep;
    std::ostringstream det;

    double spm_min = std::numeric_limits<double>::max(), spm_max = 0;
    for (const auto *r : spm) {
        spm_min = std::min(spm_min, r->ratio());
        spm_max = std::max(spm_max, r->ratio());
    }
    rep.spm_ratio_constant = spm_max / spm_min <= 1.10;
    det << "C1 scratchpad ratio max/min = " << format_ratio(spm_max / spm_min)
        << (rep.spm_ratio_constant ? " (pass, <= 1.10)" : " (FAIL, > 1.10)") << '\n';

    double cache_min = std::numeric_limits<double>::max(), cache_at_8k = 0;
    bool have_8k = false;
    for (const auto *r : cache) {
        if (r->size >= 256)
            cache_min = std::min(cache_min, r->ratio());
        if (r->size == 8192) {
            cache_at_8k = r->ratio();
            have_8k = true;
        }
    }
    if (!have_8k || cache_min == std::numeric_limits<double>::max())
        throw std::invalid_argument("incomplete: cache leg must cover sizes 256 B to 8 KiB");
    rep.cache_ratio_grows = cache_at_8k >= 1.5 * cache_min;
    det << "C2 cache ratio at 8 KiB = " << format_ratio(cache_at_8k) << ", min (>=256 B) = "
        << format_ratio(cache_min)
        << (rep.cache_ratio_grows ? " (pass, >= 1.5x)" : " (FAIL, < 1.5x)") << '\n';

    rep.all_ratios_safe = true;
    for (const auto &r : rows)
        if (r.wcet_cycles < r.sim_cycles) {
            rep.all_ratios_safe = false;
            det << "C3 UNSAFE: " << r.benchmark << ' ' << hierarchy_name(r.hierarchy) << ' '
                << r.size << " has wcet " << r.wcet_cycles << " < sim " << r.sim_cycles << '\n';
        }
    if (rep.all_ratios_safe)
        det << "C3 every ratio >= 1.0 (pass)\n";

    rep.details = det.str();
    return rep;
}

} // namespace wcetlab
