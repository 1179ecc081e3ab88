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

#include "uavpe/program.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavpe::opt {

double LinearExpr::evaluate(std::span<const double> x) const {
  double v = constant;
  for (const LinearTerm& t : terms) v += t.coef * x[t.var];
  return v;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  constant += other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const LinearTerm& t : other.terms) terms.push_back({t.var, -t.coef});
  constant -= other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double scale) {
  for (LinearTerm& t : terms) t.coef *= scale;
  constant *= scale;
  return *this;
}

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
LinearExpr operator*(double scale, LinearExpr e) { return e *= scale; }

bool Atom::in_domain(std::span<const double> x) const {
  switch (kind) {
    case AtomKind::kInverseSquare:
    case AtomKind::kNegativeLog:
      return arg.evaluate(x) > 0.0;
    default:
      return true;
  }
}

double Atom::value(std::span<const double> x) const {
  const double a = arg.evaluate(x);
  switch (kind) {
    case AtomKind::kSquare:
      return weight * a * a;
    case AtomKind::kPositiveCube: {
      const double p = std::max(a, 0.0);
      return weight * p * p * p;
    }
    case AtomKind::kInverseSquare:
      return a > 0.0 ? weight / (a * a) : kInfinity;
    case AtomKind::kNegativeLog:
      return a > 0.0 ? -weight * std::log(a) : kInfinity;
  }
  return kInfinity;
}

double Constraint::violation(std::span<const double> x) const {
  switch (kind) {
    case ConstraintKind::kEquality:
      return std::abs(affine.evaluate(x));
    case ConstraintKind::kLessEqual:
      return affine.evaluate(x);
    case ConstraintKind::kCone: {
      double sq = 0.0;
      for (const LinearExpr& e : cone_args) {
        const double v = e.evaluate(x);
        sq += v * v;
      }
      return std::sqrt(sq) - affine.evaluate(x);
    }
    case ConstraintKind::kSmoothConvex: {
      double g = affine.evaluate(x);
      for (const Atom& a : atoms) g += a.value(x);
      return g;
    }
  }
  return kInfinity;
}

VarId ConvexProgram::add_variable(std::string name, double lower, double upper, double start) {
  variables_.push_back({std::move(name), lower, upper, start});
  return static_cast<VarId>(variables_.size()) - 1;
}

void ConvexProgram::set_objective(LinearExpr objective, ObjectiveSense sense) {
  objective_ = std::move(objective);
  sense_ = sense;
}

void ConvexProgram::add_equality(const LinearExpr& lhs, const LinearExpr& rhs, std::string label) {
  Constraint c;
  c.kind = ConstraintKind::kEquality;
  c.label = std::move(label);
  c.affine = lhs - rhs;
  constraints_.push_back(std::move(c));
}

void ConvexProgram::add_less_equal(const LinearExpr& lhs, const LinearExpr& rhs, std::string label) {
  Constraint c;
  c.kind = ConstraintKind::kLessEqual;
  c.label = std::move(label);
  c.affine = lhs - rhs;
  constraints_.push_back(std::move(c));
}

void ConvexProgram::add_cone(std::vector<LinearExpr> args, LinearExpr bound, std::string label) {
  Constraint c;
  c.kind = ConstraintKind::kCone;
  c.label = std::move(label);
  c.affine = std::move(bound);
  c.cone_args = std::move(args);
  constraints_.push_back(std::move(c));
}

void ConvexProgram::add_convex(std::vector<Atom> atoms, LinearExpr affine, std::string label) {
  Constraint c;
  c.kind = ConstraintKind::kSmoothConvex;
  c.label = std::move(label);
  c.affine = std::move(affine);
  c.atoms = std::move(atoms);
  constraints_.push_back(std::move(c));
}

void ConvexProgram::add_cube_epigraph(VarId base, VarId epigraph, std::string label) {
  add_convex({Atom{AtomKind::kPositiveCube, 1.0, LinearExpr::var(base)}}, LinearExpr::var(epigraph, -1.0),
             std::move(label));
}

void ConvexProgram::add_reciprocal_square(VarId var, const LinearExpr& bound, std::string label) {
  add_convex({Atom{AtomKind::kInverseSquare, 1.0, LinearExpr::var(var)}}, -1.0 * bound, std::move(label));
}

VarId ConvexProgram::find(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return static_cast<VarId>(i);
  return -1;
}

int ConvexProgram::count(ConstraintKind kind) const {
  return static_cast<int>(std::count_if(constraints_.begin(), constraints_.end(),
                                        [&](const Constraint& c) { return c.kind == kind; }));
}

std::vector<double> ConvexProgram::start_point() const {
  std::vector<double> x(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) x[i] = variables_[i].start;
  return x;
}

double ConvexProgram::objective_value(std::span<const double> x) const { return objective_.evaluate(x); }

void ConvexProgram::validate() const {
  const int n = variable_count();
  auto check_expr = [&](const LinearExpr& e, const std::string& where) {
    for (const LinearTerm& t : e.terms) {
      if (t.var < 0 || t.var >= n)
        throw std::logic_error(name_ + ": " + where + " references undeclared variable " +
                               std::to_string(t.var));
      if (!std::isfinite(t.coef)) throw std::logic_error(name_ + ": " + where + " has a non-finite coefficient");
    }
    if (!std::isfinite(e.constant)) throw std::logic_error(name_ + ": " + where + " has a non-finite constant");
  };
  for (const Variable& v : variables_)
    if (v.lower > v.upper) throw std::logic_error(name_ + ": variable " + v.name + " has inverted bounds");
  check_expr(objective_, "objective");
  for (const Constraint& c : constraints_) {
    check_expr(c.affine, c.label);
    for (const LinearExpr& e : c.cone_args) check_expr(e, c.label);
    for (const Atom& a : c.atoms) {
      check_expr(a.arg, c.label);
      if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
        throw std::logic_error(name_ + ": " + c.label + " has a negative atom weight");
    }
    if (c.kind == ConstraintKind::kCone && c.cone_args.empty())
      throw std::logic_error(name_ + ": cone " + c.label + " has no arguments");
  }
}

// ---------------------------------------------------------------------------
// Text dump

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string token_safe(const std::string& s) {
  std::string out = s.empty() ? "_" : s;
  std::replace_if(out.begin(), out.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }, '_');
  return out;
}

void write_expr(std::ostream& out, const LinearExpr& e) {
  out << ' ' << num(e.constant) << ' ' << e.terms.size();
  for (const LinearTerm& t : e.terms) out << ' ' << t.var << ' ' << num(t.coef);
}

const char* atom_name(AtomKind k) {
  switch (k) {
    case AtomKind::kSquare: return "sq";
    case AtomKind::kPositiveCube: return "cube";
    case AtomKind::kInverseSquare: return "invsq";
    case AtomKind::kNegativeLog: return "neglog";
  }
  return "?";
}

class Tokens {
 public:
  explicit Tokens(const std::string& line) : in_(line) {}
  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw std::runtime_error("read_program: unexpected end of line");
    return w;
  }
  double number() {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end == w.c_str() || *end != '\0') throw std::runtime_error("read_program: bad number '" + w + "'");
    return v;
  }
  long integer() {
    const double v = number();
    if (v != std::floor(v)) throw std::runtime_error("read_program: expected an integer");
    return static_cast<long>(v);
  }
  LinearExpr expr() {
    LinearExpr e;
    e.constant = number();
    const long n = integer();
    for (long i = 0; i < n; ++i) {
      const auto var = static_cast<VarId>(integer());
      e.terms.push_back({var, number()});
    }
    return e;
  }

 private:
  std::istringstream in_;
};

AtomKind parse_atom(const std::string& w) {
  if (w == "sq") return AtomKind::kSquare;
  if (w == "cube") return AtomKind::kPositiveCube;
  if (w == "invsq") return AtomKind::kInverseSquare;
  if (w == "neglog") return AtomKind::kNegativeLog;
  throw std::runtime_error("read_program: unknown atom '" + w + "'");
}

}  // namespace

void write_program(std::ostream& out, const ConvexProgram& p) {
  out << "uavpe-program 1\n";
  out << "name " << token_safe(p.name()) << '\n';
  out << "variables " << p.variable_count() << '\n';
  for (const Variable& v : p.variables())
    out << "var " << token_safe(v.name) << ' ' << num(v.lower) << ' ' << num(v.upper) << ' ' << num(v.start)
        << '\n';
  out << "objective " << (p.sense() == ObjectiveSense::kMaximize ? "max" : "min");
  write_expr(out, p.objective());
  out << '\n';
  out << "constraints " << p.constraint_count() << '\n';
  for (const Constraint& c : p.constraints()) {
    switch (c.kind) {
      case ConstraintKind::kEquality:
        out << "eq " << token_safe(c.label);
        write_expr(out, c.affine);
        break;
      case ConstraintKind::kLessEqual:
        out << "le " << token_safe(c.label);
        write_expr(out, c.affine);
        break;
      case ConstraintKind::kCone:
        out << "soc " << token_safe(c.label) << ' ' << c.cone_args.size();
        for (const LinearExpr& e : c.cone_args) write_expr(out, e);
        write_expr(out, c.affine);
        break;
      case ConstraintKind::kSmoothConvex:
        out << "cvx " << token_safe(c.label) << ' ' << c.atoms.size();
        for (const Atom& a : c.atoms) {
          out << ' ' << atom_name(a.kind) << ' ' << num(a.weight);
          write_expr(out, a.arg);
        }
        write_expr(out, c.affine);
        break;
    }
    out << '\n';
  }
}

ConvexProgram read_program(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') return line;
    }
    throw std::runtime_error("read_program: unexpected end of input");
  };

  {
    Tokens t(next_line());
    if (t.word() != "uavpe-program") throw std::runtime_error("read_program: missing header");
  }
  ConvexProgram p;
  {
    Tokens t(next_line());
    if (t.word() != "name") throw std::runtime_error("read_program: expected 'name'");
    p.set_name(t.word());
  }
  long n_vars = 0;
  {
    Tokens t(next_line());
    if (t.word() != "variables") throw std::runtime_error("read_program: expected 'variables'");
    n_vars = t.integer();
  }
  for (long i = 0; i < n_vars; ++i) {
    Tokens t(next_line());
    if (t.word() != "var") throw std::runtime_error("read_program: expected 'var'");
    std::string name = t.word();
    const double lo = t.number();
    const double hi = t.number();
    p.add_variable(std::move(name), lo, hi, t.number());
  }
  {
    Tokens t(next_line());
    if (t.word() != "objective") throw std::runtime_error("read_program: expected 'objective'");
    const std::string sense = t.word();
    if (sense != "max" && sense != "min") throw std::runtime_error("read_program: bad objective sense");
    p.set_objective(t.expr(), sense == "max" ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize);
  }
  long n_cons = 0;
  {
    Tokens t(next_line());
    if (t.word() != "constraints") throw std::runtime_error("read_program: expected 'constraints'");
    n_cons = t.integer();
  }
  for (long i = 0; i < n_cons; ++i) {
    Tokens t(next_line());
    const std::string kind = t.word();
    std::string label = t.word();
    if (kind == "eq") {
      p.add_equality(t.expr(), 0.0, std::move(label));
    } else if (kind == "le") {
      p.add_less_equal(t.expr(), 0.0, std::move(label));
    } else if (kind == "soc") {
      const long n = t.integer();
      std::vector<LinearExpr> args;
      for (long k = 0; k < n; ++k) args.push_back(t.expr());
      p.add_cone(std::move(args), t.expr(), std::move(label));
    } else if (kind == "cvx") {
      const long n = t.integer();
      std::vector<Atom> atoms;
      for (long k = 0; k < n; ++k) {
        Atom a;
        a.kind = parse_atom(t.word());
        a.weight = t.number();
        a.arg = t.expr();
        atoms.push_back(std::move(a));
      }
      p.add_convex(std::move(atoms), t.expr(), std::move(label));
    } else {
      throw std::runtime_error("read_program: unknown constraint kind '" + kind + "'");
    }
  }
  p.validate();
  return p;
}

}  // namespace uavpe::opt
