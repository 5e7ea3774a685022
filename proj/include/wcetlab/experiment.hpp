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

#ifndef WCETLAB_EXPERIMENT_HPP
#define WCETLAB_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wcetlab/program.hpp"
#include "wcetlab/sim.hpp"

namespace wcetlab {

enum class Hierarchy { Scratchpad, Cache };

struct ExperimentRow {
    std::string benchmark;
    Hierarchy hierarchy = Hierarchy::Scratchpad;
    std::uint64_t size = 0;  // bytes
    std::uint64_t sim_cycles = 0;
    std::uint64_t wcet_cycles = 0;
    double ratio() const {
        return sim_cycles == 0 ? 0.0
                               : static_cast<double>(wcet_cycles) / static_cast<double>(sim_cycles);
    }
};

/// Standard size range of the sweep: 64 B to 8 KiB in powers of two.
std::vector<std::uint64_t> standard_sizes();

/// Scratchpad leg: per size, allocate + lay out + simulate + analyze.
/// Cache leg: one all-main layout; per size, exact simulation + MUST
/// classification + analysis.
std::vector<ExperimentRow> run_sweep(const std::string &benchmark_name, const Program &p,
                                     Hierarchy hierarchy,
                                     const std::vector<std::uint64_t> &sizes,
                                     TracePolicy trace_policy = TracePolicy::Typical,
                                     std::uint64_t seed = 0);

enum class ReportFormat { Csv, Table };

std::string report(const std::vector<ExperimentRow> &rows, ReportFormat format);
std::vector<ExperimentRow> parse_csv_report(const std::string &text);

struct ClaimReport {
    bool spm_ratio_constant = false;       // max/min spm ratio <= 1.10
    bool cache_ratio_grows = false;        // ratio at 8 KiB >= 1.5x min (sizes >= 256)
    bool all_ratios_safe = false;          // every ratio >= 1.0
    std::string details;
    bool all_pass() const { return spm_ratio_constant && cache_ratio_grows && all_ratios_safe; }
};

/// Evaluate the qualitative claims over a full two-hierarchy sweep.
ClaimReport check_claims(const std::vector<ExperimentRow> &rows);

} // namespace wcetlab

#endif
