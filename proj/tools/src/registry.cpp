#include "ritzcli/registry.hpp"

#include <cmath>

namespace ritzcli {

using ritz::BoundaryKind;
using ritz::Domain;
using ritz::ExactSolution;
using ritz::ProblemSpec;
using ritz::ScalarField;
using ritz::Vector;

namespace {

constexpr double kPi = 3.14159265358979323846;

BoundaryKind parse_bc(const std::string& bc) {
  if (bc == "robin") return BoundaryKind::Robin;
  if (bc == "neumann") return BoundaryKind::Neumann;
  if (bc == "dirichlet") return BoundaryKind::Dirichlet;
  throw ConfigError("unknown boundary condition id '" + bc + "'");
}

Domain parse_domain(const std::string& id, int d) {
  if (id == "hypercube") return Domain::hypercube(d);
  if (id == "ball") return Domain::ball(d);
  throw ConfigError("unknown domain id '" + id + "'");
}

ExactSolution sinpi_solution(int d) {
  ExactSolution u;
  u.value = [d](const Vector& x) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= std::sin(kPi * x(i));
    return v;
  };
  u.gradient = [d](const Vector& x) {
    Vector g(d);
    for (int i = 0; i < d; ++i) {
      double v = kPi * std::cos(kPi * x(i));
      for (int k = 0; k < d; ++k)
        if (k != i) v *= std::sin(kPi * x(k));
      g(i) = v;
    }
    return g;
  };
  const ScalarField value = u.value;
  u.laplacian = [d, value](const Vector& x) { return -d * kPi * kPi * value(x); };
  return u;
}

ExactSolution quadratic1d_solution() {
  ExactSolution u;
  u.value = [](const Vector& x) { return x(0) * x(0); };
  u.gradient = [](const Vector& x) {
    Vector g(1);
    g(0) = 2.0 * x(0);
    return g;
  };
  u.laplacian = [](const Vector&) { return 2.0; };
  return u;
}

ExactSolution constant_solution(double c) {
  ExactSolution u;
  u.value = [c](const Vector&) { return c; };
  u.gradient = [](const Vector& x) { return Vector::Zero(x.size()).eval(); };
  u.laplacian = [](const Vector&) { return 0.0; };
  return u;
}

}  // namespace

ScalarField resolve_field(const std::string& id) {
  if (id == "zero") return [](const Vector&) { return 0.0; };
  if (id == "one") return [](const Vector&) { return 1.0; };
  if (id.rfind("const:", 0) == 0) {
    const double c = std::stod(id.substr(6));
    return [c](const Vector&) { return c; };
  }
  throw ConfigError("unknown field id '" + id + "' (use zero, one, or const:<value>)");
}

double constant_of(const std::string& id) {
  if (id == "zero") return 0.0;
  if (id == "one") return 1.0;
  if (id.rfind("const:", 0) == 0) return std::stod(id.substr(6));
  throw ConfigError("field id '" + id + "' is not a constant");
}

ProblemSpec resolve_problem(const RunConfig& cfg) {
  const BoundaryKind bc = parse_bc(cfg.problem.bc);
  const Domain domain = parse_domain(cfg.problem.domain, cfg.problem.d);
  const double beta = cfg.problem.beta;
  const std::string& id = cfg.problem.solution;

  if (id == "robin1d_const") {
    if (cfg.problem.d != 1 || cfg.problem.domain != "hypercube") {
      throw ConfigError("solution robin1d_const needs d = 1 on the hypercube");
    }
    if (bc == BoundaryKind::Neumann) {
      throw ConfigError("solution robin1d_const covers robin/dirichlet only");
    }
    const double fconst = constant_of(cfg.problem.f);
    const double wconst = constant_of(cfg.problem.w);
    if (constant_of(cfg.problem.g) != 0.0) {
      throw ConfigError("solution robin1d_const needs g = zero");
    }
    const ritz::Solution1d sol = bc == BoundaryKind::Dirichlet
                                     ? ritz::exact_dirichlet_1d(fconst, wconst)
                                     : ritz::exact_robin_1d(fconst, wconst, beta);
    ProblemSpec prob;
    prob.bc = bc;
    prob.beta = beta;
    prob.domain = domain;
    prob.w = resolve_field(cfg.problem.w);
    prob.f = resolve_field(cfg.problem.f);
    prob.g = resolve_field(cfg.problem.g);
    prob.exact = sol.as_exact();
    return prob;
  }

  if (id == "sinpi") {
    return ritz::manufacture(domain, sinpi_solution(cfg.problem.d),
                             resolve_field(cfg.problem.w), bc, beta);
  }
  if (id == "quadratic1d") {
    if (cfg.problem.d != 1) throw ConfigError("solution quadratic1d needs d = 1");
    return ritz::manufacture(domain, quadratic1d_solution(),
                             resolve_field(cfg.problem.w), bc, beta);
  }
  if (id == "one") {
    return ritz::manufacture(domain, constant_solution(1.0),
                             resolve_field(cfg.problem.w), bc, beta);
  }
  if (id == "none") {
    ProblemSpec prob;
    prob.bc = bc;
    prob.beta = beta;
    prob.domain = domain;
    prob.w = resolve_field(cfg.problem.w);
    prob.f = resolve_field(cfg.problem.f);
    prob.g = bc == BoundaryKind::Dirichlet ? resolve_field("zero")
                                           : resolve_field(cfg.problem.g);
    return prob;
  }
  throw ConfigError("unknown solution id '" + id + "'");
}

}  // namespace ritzcli
