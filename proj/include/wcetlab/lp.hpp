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

#ifndef WCETLAB_LP_HPP
#define WCETLAB_LP_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace wcetlab {

using Rational = boost::multiprecision::cpp_rational;

enum class Relation { LessEq, GreaterEq, Equal };

struct LpRow {
    std::vector<std::pair<int, Rational>> coeffs;  // (variable index, coefficient)
    Relation rel = Relation::LessEq;
    Rational rhs = 0;
};

/// maximize objective . x  subject to rows, x >= 0
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rational> objective;
    std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational objective = 0;
    std::vector<Rational> values;
};

/// Exact two-phase simplex (Bland's rule) over rationals.
LpSolution solve_lp(const LinearProgram &lp);

/// Exact integer optimum via branch and bound on the LP relaxation.
/// All variables are required to be integral.
LpSolution solve_ilp(const LinearProgram &lp);

} // namespace wcetlab

#endif
