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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wcetlab/allocator.hpp"
#include "wcetlab/cache.hpp"
#include "wcetlab/experiment.hpp"
#include "wcetlab/ipet.hpp"
#include "wcetlab/layout.hpp"
#include "wcetlab/program.hpp"
#include "wcetlab/sim.hpp"

namespace {

using namespace wcetlab;

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

TracePolicy parse_policy(const std::string &s, std::uint64_t &seed) {
    if (s == "typical")
        return TracePolicy::Typical;
    if (s == "worst")
        return TracePolicy::WorstCaseHint;
    if (s.rfind("random:", 0) == 0) {
        seed = std::stoull(s.substr(7));
        return TracePolicy::Random;
    }
    if (s == "random")
        return TracePolicy::Random;
    throw CLI::ValidationError("--trace-policy", "expected typical, worst or random:<seed>");
}

std::vector<std::uint64_t> parse_sizes(const std::string &s) {
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = std::stoull(s.substr(0, dots));
        std::uint64_t hi = std::stoull(s.substr(dots + 2));
        std::vector<std::uint64_t> sizes;
        for (std::uint64_t v = lo; v <= hi; v *= 2)
            sizes.push_back(v);
        return sizes;
    }
    std::vector<std::uint64_t> sizes;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        sizes.push_back(std::stoull(tok));
    return sizes;
}

std::string benchmark_name(const std::string &path) {
    return std::filesystem::path(path).stem().string();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"scratchpad-vs-cache WCET analysis workbench"};
    app.require_subcommand(1);

    std::string program_path, hierarchy = "spm", out_path, format = "csv";
    std::string sizes_arg = "64..8192", policy_arg = "typical", trace_path;
    std::uint64_t size = 1024;

    auto *analyze = app.add_subcommand("analyze", "analyze one configuration");
    analyze->add_option("--program", program_path, "program file")->required();
    analyze->add_option("--hierarchy", hierarchy, "spm|cache")
        ->check(CLI::IsMember({"spm", "cache"}));
    analyze->add_option("--size", size, "scratchpad capacity or cache size in bytes");
    analyze->add_option("--out", out_path, "output file (default stdout)");

    auto *sweep = app.add_subcommand("sweep", "sweep a size range");
    sweep->add_option("--program", program_path, "program file")->required();
    sweep->add_option("--hierarchy", hierarchy, "spm|cache|both")
        ->check(CLI::IsMember({"spm", "cache", "both"}));
    sweep->add_option("--sizes", sizes_arg, "range like 64..8192 or a comma list");
    sweep->add_option("--trace-policy", policy_arg, "typical|worst|random:<seed>");
    sweep->add_option("--out", out_path, "output file (default stdout)");
    sweep->add_option("--format", format, "csv|table")
        ->check(CLI::IsMember({"csv", "table"}));

    auto *simulate = app.add_subcommand("simulate", "replay a trace file");
    simulate->add_option("--program", program_path, "program file")->required();
    simulate->add_option("--trace", trace_path, "trace file (generated if omitted)");
    simulate->add_option("--hierarchy", hierarchy, "spm|cache")
        ->check(CLI::IsMember({"spm", "cache"}));
    simulate->add_option("--size", size, "scratchpad capacity or cache size in bytes");
    simulate->add_option("--trace-policy", policy_arg, "typical|worst|random:<seed>");
    simulate->add_option("--out", out_path, "output file (default stdout)");

    auto *claims = app.add_subcommand("claims", "run the full sweep and evaluate the claims");
    claims->add_option("--program", program_path, "program file")->required();
    claims->add_option("--trace-policy", policy_arg, "typical|worst|random:<seed>");
    claims->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        Program p = load_program(read_file(program_path));
        std::uint64_t seed = 0;
        TracePolicy policy = parse_policy(policy_arg, seed);
        const std::string name = benchmark_name(program_path);

        if (app.got_subcommand(analyze)) {
            Hierarchy h = hierarchy == "cache" ? Hierarchy::Cache : Hierarchy::Scratchpad;
            auto rows = run_sweep(name, p, h, {size}, policy, seed);
            write_output(out_path, report(rows, ReportFormat::Csv));
        } else if (app.got_subcommand(sweep)) {
            auto sizes = parse_sizes(sizes_arg);
            std::vector<ExperimentRow> rows;
            if (hierarchy == "spm" || hierarchy == "both") {
                auto r = run_sweep(name, p, Hierarchy::Scratchpad, sizes, policy, seed);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            if (hierarchy == "cache" || hierarchy == "both") {
                auto r = run_sweep(name, p, Hierarchy::Cache, sizes, policy, seed);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            write_output(out_path,
                         report(rows, format == "table" ? ReportFormat::Table : ReportFormat::Csv));
        } else if (app.got_subcommand(simulate)) {
            Trace t = trace_path.empty() ? generate_trace(p, policy, seed)
                                         : parse_trace(read_file(trace_path));
            std::ostringstream out;
            if (hierarchy == "cache") {
                LayoutConfig cfg;
                auto layout = assign_layout(p, {}, cfg);
                CacheConfig cache;
                cache.capacity = static_cast<std::uint32_t>(size);
                auto res = simulate_cached(p, layout, cache, t);
                out << "cycles," << res.cycles << "\nhits," << res.hits << "\nmisses,"
                    << res.misses << '\n';
            } else {
                auto alloc = solve_knapsack(build_problem(p, size));
                LayoutConfig cfg;
                cfg.spm_capacity = size;
                auto layout = assign_layout(p, alloc.selected, cfg);
                auto res = simulate_flat(p, layout, t);
                out << "cycles," << res.cycles << '\n';
            }
            write_output(out_path, out.str());
        } else if (app.got_subcommand(claims)) {
            auto sizes = standard_sizes();
            auto rows = run_sweep(name, p, Hierarchy::Scratchpad, sizes, policy, seed);
            auto cache_rows = run_sweep(name, p, Hierarchy::Cache, sizes, policy, seed);
            rows.insert(rows.end(), cache_rows.begin(), cache_rows.end());
            auto rep = check_claims(rows);
            write_output(out_path, rep.details);
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
