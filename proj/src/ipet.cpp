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

#include "wcetlab/ipet.hpp"

#include <sstream>

namespace wcetlab {

BlockCost build_block_costs(const Program &p, const MemoryLayout &layout,
                            const Scenario &scenario) {
    BlockCost costs;
    for (const auto &b : p.blocks) {
        std::uint64_t sum = 0;
        auto events = enumerate_access_events(p, b);
        if (const auto *cs = std::get_if<CacheScenario>(&scenario)) {
            if (!cs->classification)
                throw ipet_error("cache scenario without a classification");
            auto it = cs->classification->per_block.find(b.id);
            if (it == cs->classification->per_block.end() || it->second.size() != events.size())
                throw ipet_error("missing classification for block '" + b.id + "'");
            for (std::size_t i = 0; i < events.size(); ++i)
                sum += wcet_event_cost(it->second[i], cs->cache);
        } else {
            for (const auto &ev : events)
                sum += access_cost(layout, ev);
        }
        costs[b.id] = sum;
    }
    return costs;
}

IpetModel build_ipet(const Program &p, const BlockCost &costs) {
    IpetModel m;
    int var = 0;
    for (const auto &b : p.blocks) {
        m.block_order.push_back(b.id);
        m.block_var[b.id] = var++;
    }
    auto back_edges = find_back_edges(p);
    for (const auto &b : p.blocks)
        for (const auto &s : b.successors) {
            m.edges.push_back({b.id, s});
            m.edge_var[{b.id, s}] = var++;
        }
    m.entry_var = var++;
    m.edges.push_back({"", p.flow.entry});
    std::map<std::string, int> exit_var;
    for (const auto &e : p.flow.exits) {
        exit_var[e] = var++;
        m.edges.push_back({e, ""});
    }

    m.lp.num_vars = var;
    m.lp.objective.assign(var, 0);
    for (const auto &[id, c] : costs) {
        auto it = m.block_var.find(id);
        if (it == m.block_var.end())
            throw ipet_error("cost for unknown block '" + id + "'");
        m.lp.objective[it->second] = Rational(c);
    }
    for (const auto &id : m.block_order)
        if (!costs.count(id))
            throw ipet_error("missing cost for block '" + id + "'");

    // entry edge taken exactly once
    m.lp.rows.push_back({{{m.entry_var, 1}}, Relation::Equal, 1});

    // flow conservation: incoming = block count = outgoing
    for (const auto &b : p.blocks) {
        LpRow in_row;
        in_row.rel = Relation::Equal;
        in_row.rhs = 0;
        for (const auto &pred : p.predecessors(b.id))
            in_row.coeffs.push_back({m.edge_var.at({pred, b.id}), 1});
        if (b.id == p.flow.entry)
            in_row.coeffs.push_back({m.entry_var, 1});
        in_row.coeffs.push_back({m.block_var.at(b.id), -1});
        m.lp.rows.push_back(in_row);

        LpRow out_row;
        out_row.rel = Relation::Equal;
        out_row.rhs = 0;
        for (const auto &s : b.successors)
            out_row.coeffs.push_back({m.edge_var.at({b.id, s}), 1});
        if (p.flow.exits.count(b.id))
            out_row.coeffs.push_back({exit_var.at(b.id), 1});
        out_row.coeffs.push_back({m.block_var.at(b.id), -1});
        m.lp.rows.push_back(out_row);
    }

    // relative loop bounds: back edge count <= bound * (entries into the loop)
    for (const auto &be : back_edges) {
        auto bound_it = p.flow.loop_bounds.find(be);
        if (bound_it == p.flow.loop_bounds.end())
            throw ipet_error("unbounded back edge " + be.first + "->" + be.second);
        const Rational n(bound_it->second);
        LpRow row;
        row.rel = Relation::LessEq;
        row.rhs = 0;
        row.coeffs.push_back({m.edge_var.at(be), 1});
        const std::string &header = be.second;
        for (const auto &pred : p.predecessors(header))
            if (!back_edges.count({pred, header}))
                row.coeffs.push_back({m.edge_var.at({pred, header}), -n});
        if (header == p.flow.entry)
            row.coeffs.push_back({m.entry_var, -n});
        m.lp.rows.push_back(row);
    }
    return m;
}

WcetResult solve_ipet(const IpetModel &m) {
    auto sol = solve_ilp(m.lp);
    if (sol.status == LpStatus::Infeasible)
        throw ipet_error("IPET model is infeasible (no path from entry to an exit?)");
    if (sol.status == LpStatus::Unbounded)
        throw ipet_error("IPET objective is unbounded (modeling error)");

    WcetResult res;
    for (const auto &[id, v] : m.block_var) {
        const Rational &x = sol.values[v];
        if (boost::multiprecision::denominator(x) != 1 || x < 0)
            throw ipet_error("non-integral execution count in ILP solution");
        res.witness[id] = static_cast<std::uint64_t>(boost::multiprecision::numerator(x));
    }
    // re-verify the witness against every constraint and the objective
    Rational obj = 0;
    for (int j = 0; j < m.lp.num_vars; ++j)
        obj += m.lp.objective[j] * sol.values[j];
    if (obj != sol.objective)
        throw ipet_error("objective mismatch in ILP solution");
    for (const auto &row : m.lp.rows) {
        Rational lhs = 0;
        for (const auto &[j, c] : row.coeffs)
            lhs += c * sol.values[j];
        bool ok = row.rel == Relation::Equal     ? lhs == row.rhs
                  : row.rel == Relation::LessEq  ? lhs <= row.rhs
                                                 : lhs >= row.rhs;
        if (!ok)
            throw ipet_error("ILP witness violates a model constraint");
    }
    if (obj < 0 || boost::multiprecision::denominator(obj) != 1)
        throw ipet_error("non-integral WCET objective");
    res.wcet = static_cast<std::uint64_t>(boost::multiprecision::numerator(obj));
    return res;
}

WcetResult analyze_wcet(const Program &p, const MemoryLayout &layout, const Scenario &scenario) {
    return solve_ipet(build_ipet(p, build_block_costs(p, layout, scenario)));
}

namespace {

std::string var_name(const IpetModel &m, int j) {
    for (const auto &[id, v] : m.block_var)
        if (v == j)
            return "b_" + id;
    for (const auto &[e, v] : m.edge_var)
        if (v == j)
            return "e_" + e.first + "_" + e.second;
    if (j == m.entry_var)
        return "e_entry";
    return "x" + std::to_string(j);
}

void append_terms(std::ostream &out, const IpetModel &m,
                  const std::vector<std::pair<int, Rational>> &coeffs) {
    bool first = true;
    for (const auto &[j, c] : coeffs) {
        if (c == 0)
            continue;
        if (!first)
            out << (c > 0 ? " + " : " - ");
        else if (c < 0)
            out << "- ";
        Rational a = c > 0 ? c : Rational(-c);
        if (a != 1)
            out << a.str() << ' ';
        out << var_name(m, j);
        first = false;
    }
    if (first)
        out << "0 " << var_name(m, 0);
}

} // namespace

std::string dump_lp(const IpetModel &m) {
    std::ostringstream out;
    out << "Maximize\n obj: ";
    std::vector<std::pair<int, Rational>> obj;
    for (int j = 0; j < m.lp.num_vars; ++j)
        if (m.lp.objective[j] != 0)
            obj.push_back({j, m.lp.objective[j]});
    append_terms(out, m, obj);
    out << "\nSubject To\n";
    int i = 0;
    for (const auto &row : m.lp.rows) {
        out << " c" << i++ << ": ";
        append_terms(out, m, row.coeffs);
        out << (row.rel == Relation::Equal ? " = " : row.rel == Relation::LessEq ? " <= " : " >= ")
            << row.rhs.str() << '\n';
    }
    out << "General\n";
    for (int j = 0; j < m.lp.num_vars; ++j)
        out << ' ' << var_name(m, j) << '\n';
    out << "End\n";
    return out.str();
}

} // namespace wcetlab
