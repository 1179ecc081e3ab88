// Copyright 2026 The uavpe Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "uavpe/program.hpp"

using namespace uavpe::opt;

namespace {

ConvexProgram sample_program() {
  ConvexProgram p("sample");
  const VarId x = p.add_variable("x", -1.0, 2.5, 0.1);
  const VarId y = p.add_variable("y", 0.0, kInfinity, 1.0 / 3.0);
  const VarId t = p.add_variable("t");
  p.set_objective(LinearExpr::var(x, 0.7) + LinearExpr::var(y, -2.0) + 1e-17, ObjectiveSense::kMaximize);
  p.add_equality(LinearExpr::var(x) + LinearExpr::var(y), 1.0, "sum");
  p.add_less_equal(LinearExpr::var(t), LinearExpr::var(y, 3.0) + 0.125, "cap");
  p.add_cone({LinearExpr::var(x), LinearExpr::var(y) - 0.5}, LinearExpr::var(t) + 2.0, "norm");
  p.add_convex({Atom{AtomKind::kSquare, 1.5, LinearExpr::var(x)},
                Atom{AtomKind::kNegativeLog, 1.0 / std::log(2.0), LinearExpr::var(y) + 1.0}},
               LinearExpr::var(t, -1.0) + 0.3, "smooth");
  p.add_cube_epigraph(y, t, "cube");
  p.add_reciprocal_square(y, 9.0, "recip");
  return p;
}

}  // namespace

TEST_CASE("program counts and lookup") {
  const ConvexProgram p = sample_program();
  CHECK(p.variable_count() == 3);
  CHECK(p.constraint_count() == 6);
  CHECK(p.count(ConstraintKind::kEquality) == 1);
  CHECK(p.count(ConstraintKind::kLessEqual) == 1);
  CHECK(p.count(ConstraintKind::kCone) == 1);
  CHECK(p.count(ConstraintKind::kSmoothConvex) == 3);
  CHECK(p.find("y") == 1);
  CHECK(p.find("nope") == -1);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("constraint violation signs") {
  const ConvexProgram p = sample_program();
  const std::vector<double> x{0.5, 0.5, 1.0};
  CHECK(p.constraints()[0].violation(x) == doctest::Approx(0.0));
  // t - 3y - 0.125 = -0.625
  CHECK(p.constraints()[1].violation(x) == doctest::Approx(-0.625));
  // ||(0.5, 0)|| - 3
  CHECK(p.constraints()[2].violation(x) == doctest::Approx(-2.5));
  const std::vector<double> out_of_domain{0.5, -2.0, 1.0};
  CHECK(std::isinf(p.constraints()[3].violation(out_of_domain)));
}

TEST_CASE("text dump round trip is exact") {
  const ConvexProgram p = sample_program();
  std::ostringstream first;
  write_program(first, p);
  std::istringstream in(first.str());
  const ConvexProgram q = read_program(in);
  std::ostringstream second;
  write_program(second, q);
  CHECK(first.str() == second.str());
  CHECK(q.name() == "sample");
  CHECK(q.variable(1).start == 1.0 / 3.0);
  CHECK(q.objective().constant == 1e-17);
  CHECK(q.sense() == ObjectiveSense::kMaximize);
  REQUIRE(q.constraints().size() == p.constraints().size());
  CHECK(q.constraints()[3].atoms[1].weight == 1.0 / std::log(2.0));
  CHECK(std::isinf(q.variable(2).upper));
}

TEST_CASE("malformed dumps are rejected") {
  std::istringstream garbage("this is not a program\n");
  CHECK_THROWS_AS(read_program(garbage), std::runtime_error);
  ConvexProgram bad("bad");
  bad.add_variable("x", 1.0, 0.0);
  CHECK_THROWS_AS(bad.validate(), std::logic_error);
  ConvexProgram dangling("dangling");
  dangling.add_variable("x");
  dangling.add_less_equal(LinearExpr::var(4), 1.0, "ref");
  CHECK_THROWS_AS(dangling.validate(), std::logic_error);
}
