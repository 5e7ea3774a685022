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

#include "wcetlab/lp.hpp"

#include <stdexcept>

namespace wcetlab {

namespace {

using boost::multiprecision::cpp_int;

// Dense simplex tableau. Rows 0..m-1 are constraints, row m is the objective
// in reduced-cost form. Column layout: structural vars, slack/surplus vars,
// artificial vars, rhs last.
struct Tableau {
    int m = 0;                 // constraint rows
    int n = 0;                 // total columns excluding rhs
    std::vector<std::vector<Rational>> a;  // (m+1) x (n+1)
    std::vector<int> basis;    // basic variable per row

    Rational &at(int r, int c) { return a[r][c]; }
    Rational &rhs(int r) { return a[r][n]; }

    void pivot(int pr, int pc) {
        Rational piv = a[pr][pc];
        for (int c = 0; c <= n; ++c)
            a[pr][c] /= piv;
        for (int r = 0; r <= m; ++r) {
            if (r == pr)
                continue;
            Rational f = a[r][pc];
            if (f == 0)
                continue;
            for (int c = 0; c <= n; ++c)
                a[r][c] -= f * a[pr][c];
        }
        basis[pr] = pc;
    }

    // Bland's rule: entering = lowest-index column with positive reduced cost
    // (maximization), leaving = min ratio, ties by lowest basic index.
    // Columns >= col_limit may not enter. Returns Optimal when no entering
    // column, Unbounded when no ratio.
    LpStatus run(int col_limit) {
        for (;;) {
            int pc = -1;
            for (int c = 0; c < col_limit; ++c)
                if (a[m][c] > 0) {
                    pc = c;
                    break;
                }
            if (pc < 0)
                return LpStatus::Optimal;
            int pr = -1;
            Rational best;
            for (int r = 0; r < m; ++r) {
                if (a[r][pc] <= 0)
                    continue;
                Rational ratio = a[r][n] / a[r][pc];
                if (pr < 0 || ratio < best || (ratio == best && basis[r] < basis[pr])) {
                    pr = r;
                    best = ratio;
                }
            }
            if (pr < 0)
                return LpStatus::Unbounded;
            pivot(pr, pc);
        }
    }
};

} // namespace

LpSolution solve_lp(const LinearProgram &lp) {
    const int n0 = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());

    // count slack/surplus columns
    int n_slack = 0;
    for (const auto &row : lp.rows)
        if (row.rel != Relation::Equal)
            ++n_slack;

    Tableau t;
    t.m = m;
    t.n = n0 + n_slack + m;  // one artificial per row (unused ones stay zero)
    t.a.assign(m + 1, std::vector<Rational>(t.n + 1, 0));
    t.basis.assign(m, -1);

    int slack_col = n0;
    const int art_base = n0 + n_slack;
    for (int r = 0; r < m; ++r) {
        const auto &row = lp.rows[r];
        for (const auto &[j, v] : row.coeffs) {
            if (j < 0 || j >= n0)
                throw std::invalid_argument("LP coefficient references an unknown variable");
            t.at(r, j) += v;
        }
        t.rhs(r) = row.rhs;
        if (row.rel == Relation::LessEq)
            t.at(r, slack_col++) = 1;
        else if (row.rel == Relation::GreaterEq)
            t.at(r, slack_col++) = -1;
        if (t.rhs(r) < 0)
            for (int c = 0; c <= t.n; ++c)
                t.at(r, c) = -t.at(r, c);
        t.at(r, art_base + r) = 1;
        t.basis[r] = art_base + r;
    }

    // Phase 1: maximize -sum(artificials); objective row holds reduced costs,
    // so start from sum of constraint rows (artificials are basic).
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= t.n; ++c)
            if (c < art_base || c >= art_base + m)
                t.a[m][c] += t.a[r][c];
    if (t.run(t.n) == LpStatus::Unbounded)
        throw std::logic_error("phase-1 objective cannot be unbounded");
    if (t.rhs(m) != 0)
        return {LpStatus::Infeasible, 0, {}};

    // drive remaining artificials out of the basis (degenerate rows)
    for (int r = 0; r < m; ++r) {
        if (t.basis[r] < art_base)
            continue;
        int pc = -1;
        for (int c = 0; c < art_base; ++c)
            if (t.a[r][c] != 0) {
                pc = c;
                break;
            }
        if (pc >= 0)
            t.pivot(r, pc);
        // else the row is all-zero (redundant constraint); artificial stays at 0
    }

    // Phase 2 objective: reduced costs of the real objective
    for (int c = 0; c <= t.n; ++c)
        t.a[m][c] = 0;
    for (int j = 0; j < n0; ++j)
        t.a[m][j] = lp.objective.size() > static_cast<std::size_t>(j) ? lp.objective[j] : 0;
    for (int r = 0; r < m; ++r) {
        Rational cb = t.basis[r] < n0 && static_cast<std::size_t>(t.basis[r]) < lp.objective.size()
                          ? lp.objective[t.basis[r]]
                          : 0;
        if (cb == 0)
            continue;
        for (int c = 0; c <= t.n; ++c)
            t.a[m][c] -= cb * t.a[r][c];
    }
    // artificials may not re-enter in phase 2
    auto status = t.run(art_base);
    if (status == LpStatus::Unbounded)
        return {LpStatus::Unbounded, 0, {}};

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.values.assign(n0, 0);
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < n0)
            sol.values[t.basis[r]] = t.rhs(r);
    sol.objective = 0;
    for (int j = 0; j < n0 && static_cast<std::size_t>(j) < lp.objective.size(); ++j)
        sol.objective += lp.objective[j] * sol.values[j];
    return sol;
}

namespace {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

Rational rational_floor(const Rational &v) {
    cpp_int q = numerator(v) / denominator(v);
    if (v < 0 && q * denominator(v) != numerator(v))
        --q;
    return Rational(q);
}

void branch_and_bound(const LinearProgram &lp, LpSolution &best, bool &found, int depth) {
    if (depth > 200)
        throw std::runtime_error("branch-and-bound depth limit exceeded");
    auto relax = solve_lp(lp);
    if (relax.status != LpStatus::Optimal)
        return;
    // all-integer objective: can prune on the floor of the relaxation bound
    if (found && rational_floor(relax.objective) <= best.objective)
        return;
    int frac = -1;
    for (int j = 0; j < lp.num_vars; ++j)
        if (denominator(relax.values[j]) != 1) {
            frac = j;
            break;
        }
    if (frac < 0) {
        if (!found || relax.objective > best.objective) {
            best = relax;
            found = true;
        }
        return;
    }
    Rational fl = rational_floor(relax.values[frac]);
    {
        LinearProgram down = lp;
        down.rows.push_back({{{frac, 1}}, Relation::LessEq, fl});
        branch_and_bound(down, best, found, depth + 1);
    }
    {
        LinearProgram up = lp;
        up.rows.push_back({{{frac, 1}}, Relation::GreaterEq, fl + 1});
        branch_and_bound(up, best, found, depth + 1);
    }
}

} // namespace

LpSolution solve_ilp(const LinearProgram &lp) {
    auto relax = solve_lp(lp);
    if (relax.status != LpStatus::Optimal)
        return relax;
    LpSolution best;
    bool found = false;
    branch_and_bound(lp, best, found, 0);
    if (!found)
        return {LpStatus::Infeasible, 0, {}};
    return best;
}

} // namespace wcetlab
