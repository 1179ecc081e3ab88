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

// Solver-agnostic description of a convex program:
//
//   maximize / minimize  c'x + c0
//   subject to           affine(x) == 0
//                        affine(x) <= 0
//                        ||A x + b|| <= affine(x)                 (second-order cone)
//                        affine(x) + sum_k atom_k(x) <= 0         (smooth convex)
//                        lower <= x <= upper
//
// where every atom is a nonnegatively weighted convex function of one affine
// argument: w*a^2, w*max(a,0)^3, w/a^2 (a > 0) or -w*ln(a) (a > 0).

#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace uavpe::opt {

using VarId = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LinearTerm {
  VarId var = 0;
  double coef = 0.0;
};

/// Sparse affine expression sum_i coef_i x_{var_i} + constant.
struct LinearExpr {
  std::vector<LinearTerm> terms;
  double constant = 0.0;

  LinearExpr() = default;
  LinearExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)

  static LinearExpr var(VarId v, double coef = 1.0) {
    LinearExpr e;
    e.terms.push_back({v, coef});
    return e;
  }

  LinearExpr& add(VarId v, double coef) {
    terms.push_back({v, coef});
    return *this;
  }

  double evaluate(std::span<const double> x) const;

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(double scale);
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(double scale, LinearExpr e);

enum class AtomKind {
  kSquare,         // w * a^2
  kPositiveCube,   // w * max(a, 0)^3
  kInverseSquare,  // w / a^2, domain a > 0
  kNegativeLog,    // -w * ln(a), domain a > 0
};

struct Atom {
  AtomKind kind = AtomKind::kSquare;
  double weight = 1.0;
  LinearExpr arg;

  /// Atom value; +inf outside its domain.
  double value(std::span<const double> x) const;
  bool in_domain(std::span<const double> x) const;
};

enum class ConstraintKind {
  kEquality,      // affine == 0
  kLessEqual,     // affine <= 0
  kCone,          // ||cone_args|| <= affine
  kSmoothConvex,  // affine + sum(atoms) <= 0
};

struct Constraint {
  ConstraintKind kind = ConstraintKind::kLessEqual;
  std::string label;
  LinearExpr affine;
  std::vector<LinearExpr> cone_args;
  std::vector<Atom> atoms;

  /// Signed violation: positive when violated, zero or negative otherwise.
  /// Equalities return |affine|.
  double violation(std::span<const double> x) const;
};

struct Variable {
  std::string name;
  double lower = -kInfinity;
  double upper = kInfinity;
  double start = 0.0;
};

enum class ObjectiveSense { kMinimize, kMaximize };

class ConvexProgram {
 public:
  ConvexProgram() = default;
  explicit ConvexProgram(std::string name) : name_(std::move(name)) {}

  VarId add_variable(std::string name, double lower = -kInfinity, double upper = kInfinity,
                     double start = 0.0);

  void set_objective(LinearExpr objective, ObjectiveSense sense);

  /// lhs == rhs
  void add_equality(const LinearExpr& lhs, const LinearExpr& rhs, std::string label);
  /// lhs <= rhs
  void add_less_equal(const LinearExpr& lhs, const LinearExpr& rhs, std::string label);
  /// ||args|| <= bound
  void add_cone(std::vector<LinearExpr> args, LinearExpr bound, std::string label);
  /// affine + sum(atoms) <= 0
  void add_convex(std::vector<Atom> atoms, LinearExpr affine, std::string label);

  /// epigraph >= max(base, 0)^3.
  void add_cube_epigraph(VarId base, VarId epigraph, std::string label);
  /// 1 / var^2 <= bound, with var > 0.
  void add_reciprocal_square(VarId var, const LinearExpr& bound, std::string label);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<Variable>& mutable_variables() { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }
  ObjectiveSense sense() const { return sense_; }

  /// Finds a variable by name; -1 when absent.
  VarId find(const std::string& name) const;
  int count(ConstraintKind kind) const;

  std::vector<double> start_point() const;
  double objective_value(std::span<const double> x) const;

  /// Throws std::logic_error when an expression references an undeclared
  /// variable, an atom weight is negative, or bounds are inverted.
  void validate() const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
};

/// Line-oriented text dump of a program. Round-trips exactly through
/// read_program (numbers are written with 17 significant digits).
void write_program(std::ostream& out, const ConvexProgram& p);
/// Throws std::runtime_error on malformed input.
ConvexProgram read_program(std::istream& in);

}  // namespace uavpe::opt
