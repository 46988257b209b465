#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ritz/checks.hpp"
#include "ritz/optimizer.hpp"

using namespace ritz;

namespace {

ProblemSpec unit_robin_1d() {
  ProblemSpec prob;
  prob.bc = BoundaryKind::Robin;
  prob.beta = 1.0;
  prob.domain = Domain::hypercube(1);
  prob.w = [](const Vector&) { return 1.0; };
  prob.f = [](const Vector&) { return 1.0; };
  prob.g = [](const Vector&) { return 0.0; };
  return prob;
}

ProjectionSpec loose_spec(const NetParams& center, double radius = 100.0,
                          double budget = 100.0) {
  ProjectionSpec spec;
  spec.inner_centers = center;
  spec.inner_radius = radius;
  spec.outer_budget = budget;
  return spec;
}

}  // namespace

TEST_CASE("initialized network evaluates to zero everywhere") {
  TrainConfig cfg;
  cfg.subnet_count = 4;
  cfg.init_bound = 2.0;
  cfg.seed = 9;
  const NetParams p = init_params(cfg, NetDims{2, 5, 3});
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    Vector x(2);
    x << rng.uniform01(), rng.uniform01();
    CHECK(forward(p, x) == 0.0);
  }
}

TEST_CASE("initial inner entries follow the symmetric uniform law") {
  TrainConfig cfg;
  cfg.subnet_count = 50;
  cfg.init_bound = 1.0;
  cfg.seed = 123;
  const NetParams p = init_params(cfg, NetDims{3, 10, 10});
  double sum = 0.0;
  double max_abs = 0.0;
  long count = 0;
  for (const auto& s : p.subnets) {
    sum += s.W1.sum() + s.b1.sum() + s.W2.sum() + s.b2.sum();
    count += s.W1.size() + s.b1.size() + s.W2.size() + s.b2.size();
    max_abs = std::max({max_abs, s.W1.cwiseAbs().maxCoeff(),
                        s.b1.cwiseAbs().maxCoeff(), s.W2.cwiseAbs().maxCoeff(),
                        s.b2.cwiseAbs().maxCoeff()});
    CHECK(s.W3.norm() == 0.0);
    CHECK(s.b3 == 0.0);
  }
  CHECK(std::abs(sum / count) < 0.02);
  CHECK(max_abs <= 1.0);
}

TEST_CASE("same seed gives bit-identical initialization") {
  TrainConfig cfg;
  cfg.subnet_count = 3;
  cfg.seed = 77;
  const NetParams a = init_params(cfg, NetDims{2, 4, 3});
  const NetParams b = init_params(cfg, NetDims{2, 4, 3});
  NetParams diff = a;
  diff.axpy(-1.0, b);
  CHECK(diff.squared_norm() == 0.0);
}

TEST_CASE("projection returns members of the set unchanged") {
  Rng rng(5);
  const NetParams center = NetParams::random(2, NetDims{1, 3, 2}, 1.0, rng);
  NetParams inside = center;
  inside.subnets[0].W3(0) = 0.5;  // within a generous budget
  ProjectionSpec spec = loose_spec(center, 1.0, 10.0);
  const NetParams projected = project(inside, spec);
  CHECK(projected.flatten() == inside.flatten());
}

TEST_CASE("inner block at distance 2r lands on the sphere along the same ray") {
  Rng rng(7);
  const NetDims dims{2, 3, 2};
  const NetParams center = NetParams::random(1, dims, 1.0, rng);
  const double radius = 0.8;

  NetParams outside = center;
  Matrix dir = Matrix::Random(dims.m1, dims.d);
  dir /= dir.norm();
  outside.subnets[0].W1 = center.subnets[0].W1 + 2.0 * radius * dir;

  ProjectionSpec spec = loose_spec(center, radius, 100.0);
  const NetParams projected = project(outside, spec);
  const Matrix moved = projected.subnets[0].W1 - center.subnets[0].W1;
  CHECK(moved.norm() == doctest::Approx(radius).epsilon(1e-12));
  const Matrix expected = center.subnets[0].W1 + radius * dir;
  CHECK((projected.subnets[0].W1 - expected).norm() < 1e-12);
}

TEST_CASE("l1 projection clips (3,0,...,0) to (1,0,...,0)") {
  std::vector<double> v{3.0, 0.0, 0.0, 0.0};
  const auto w = project_l1(v, 1.0);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == 0.0);
  CHECK(w[3] == 0.0);
}

TEST_CASE("projection suite: idempotence, membership, nonexpansiveness, oracle") {
  const auto report = run_projection_check(/*seed=*/99, /*pair_count=*/300);
  CHECK(report.max_idempotence_gap <= 1e-12);
  CHECK(report.max_membership_violation <= 1e-12);
  CHECK(report.max_expansion <= 1e-12);
  CHECK(report.max_l1_oracle_gap <= 1e-9);
  CHECK(report.pass);
}

TEST_CASE("eta = 0 leaves the parameters and the trace constant") {
  Rng rng(11);
  const ProblemSpec prob = unit_robin_1d();
  const SampleSet samples = make_sample_set(prob.domain, 16, 8, 3);
  TrainConfig cfg;
  cfg.eta = 0.0;
  cfg.iterations = 5;
  cfg.subnet_count = 2;
  const NetParams p0 = NetParams::random(2, NetDims{1, 3, 2}, 0.5, rng);
  const ProjectionSpec spec = loose_spec(p0);
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(p.flatten() == p0.flatten());
  REQUIRE(trace.records.size() == 6);
  for (const auto& r : trace.records) {
    CHECK(r.loss == trace.records[0].loss);
    CHECK(r.guard_violation == false);
  }
}

TEST_CASE("outer-only descent on the convex loss decreases monotonically") {
  // inner layers frozen by radius 0: the loss is a convex quadratic in the
  // two outer parameters (W3, b3) of the single subnet
  Rng rng(13);
  const ProblemSpec prob = unit_robin_1d();
  const SampleSet samples = make_sample_set(prob.domain, 64, 32, 7);
  NetParams p0 = NetParams::random(1, NetDims{1, 2, 1}, 1.0, rng);
  p0.subnets[0].W3.setZero();
  p0.subnets[0].b3 = 0.0;

  ProjectionSpec spec;
  spec.inner_centers = p0;
  spec.inner_radius = 0.0;
  spec.outer_budget = 50.0;

  TrainConfig cfg;
  cfg.eta = 0.05;
  cfg.iterations = 300;
  cfg.subnet_count = 1;
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(trace.monotone(1e-10));
  CHECK(trace.records.back().loss < trace.records.front().loss);
  // inner blocks never moved
  CHECK((p.subnets[0].W1 - p0.subnets[0].W1).norm() == 0.0);
  CHECK((p.subnets[0].W2 - p0.subnets[0].W2).norm() == 0.0);
  // near the quadratic minimum the gradient is small
  CHECK(trace.records.back().grad_norm < 0.05);
}

TEST_CASE("small practical run drives the 1d Robin loss below zero") {
  const ProblemSpec prob = unit_robin_1d();
  const SampleSet samples = make_sample_set(prob.domain, 128, 128, 2024);
  TrainConfig cfg;
  cfg.subnet_count = 4;
  cfg.init_bound = 1.0;
  cfg.seed = 31;
  const NetParams p0 = init_params(cfg, NetDims{1, 5, 3});
  const ProjectionSpec spec = loose_spec(p0, 10.0, 50.0);
  cfg.eta = find_monotone_step(p0, prob, samples, spec, 1.0);
  cfg.iterations = 60;
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(trace.records.front().loss == 0.0);  // zero outer layer
  CHECK(trace.records.back().loss < 0.0);
  CHECK(trace.monotone(1e-10));
}

TEST_CASE("2d Dirichlet-penalty training descends with default widths") {
  ExactSolution u;
  u.value = [](const Vector& x) {
    return std::sin(3.14159265358979323846 * x(0)) *
           std::sin(3.14159265358979323846 * x(1));
  };
  u.gradient = [](const Vector& x) {
    const double pi = 3.14159265358979323846;
    Vector g(2);
    g(0) = pi * std::cos(pi * x(0)) * std::sin(pi * x(1));
    g(1) = pi * std::sin(pi * x(0)) * std::cos(pi * x(1));
    return g;
  };
  const ScalarField val = u.value;
  u.laplacian = [val](const Vector& x) {
    const double pi = 3.14159265358979323846;
    return -2.0 * pi * pi * val(x);
  };
  const ProblemSpec prob = manufacture(Domain::hypercube(2), u,
                                       [](const Vector&) { return 1.0; },
                                       BoundaryKind::Dirichlet, 0.1);
  const SampleSet samples = make_sample_set(prob.domain, 256, 256, 77);
  TrainConfig cfg;
  cfg.subnet_count = 4;
  cfg.seed = 5;
  cfg.iterations = 40;
  const NetDims dims = default_dims(2);
  CHECK(dims.m1 == 10);
  CHECK(dims.m2 == 10);
  const NetParams p0 = init_params(cfg, dims);
  const ProjectionSpec spec = loose_spec(p0, 10.0, 50.0);
  cfg.eta = find_monotone_step(p0, prob, samples, spec, 0.5);
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(trace.monotone(1e-10));
  CHECK(trace.records.back().loss < trace.records.front().loss);
}

TEST_CASE("Neumann training descends too") {
  ExactSolution u;
  u.value = [](const Vector& x) { return std::cos(2.0 * x(0)); };
  u.gradient = [](const Vector& x) {
    Vector g(1);
    g(0) = -2.0 * std::sin(2.0 * x(0));
    return g;
  };
  u.laplacian = [](const Vector& x) { return -4.0 * std::cos(2.0 * x(0)); };
  const ProblemSpec prob = manufacture(Domain::hypercube(1), u,
                                       [](const Vector&) { return 1.0; },
                                       BoundaryKind::Neumann);
  const SampleSet samples = make_sample_set(prob.domain, 128, 128, 31);
  TrainConfig cfg;
  cfg.subnet_count = 4;
  cfg.seed = 7;
  cfg.iterations = 60;
  const NetParams p0 = init_params(cfg, default_dims(1));
  const ProjectionSpec spec = loose_spec(p0, 10.0, 50.0);
  cfg.eta = find_monotone_step(p0, prob, samples, spec, 0.5);
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(trace.monotone(1e-10));
  CHECK(trace.records.back().loss < trace.records.front().loss);
}

TEST_CASE("iterates stay inside the constraint set") {
  Rng rng(17);
  const ProblemSpec prob = unit_robin_1d();
  const SampleSet samples = make_sample_set(prob.domain, 32, 16, 5);
  NetParams p0 = NetParams::random(2, NetDims{1, 3, 2}, 1.0, rng);
  ProjectionSpec spec;
  spec.inner_centers = p0;
  spec.inner_radius = 0.05;
  spec.outer_budget = 0.2;
  TrainConfig cfg;
  cfg.eta = 0.1;
  cfg.iterations = 40;
  cfg.subnet_count = 2;
  const auto [p, trace] = train(p0, prob, samples, cfg, spec);
  CHECK(constraint_violation(p, spec) <= 1e-12);
}

TEST_CASE("non-finite losses abort with a partial trace") {
  Rng rng(19);
  ProblemSpec prob = unit_robin_1d();
  prob.f = [](const Vector&) { return std::numeric_limits<double>::quiet_NaN(); };
  const SampleSet samples = make_sample_set(prob.domain, 8, 4, 3);
  TrainConfig cfg;
  cfg.eta = 0.1;
  cfg.iterations = 10;
  cfg.subnet_count = 1;
  const NetParams p0 = NetParams::random(1, NetDims{1, 2, 2}, 0.5, rng);
  const auto [p, trace] = train(p0, prob, samples, cfg, loose_spec(p0));
  CHECK(trace.aborted_nonfinite);
  CHECK(trace.records.size() >= 1);
  CHECK(trace.records.size() < 11);
}

TEST_CASE("theory-report mode enforces T = round(1/eta)") {
  TrainConfig cfg;
  cfg.mode = TrainMode::TheoryReport;
  cfg.eta = 0.01;
  cfg.iterations = 100;
  CHECK_NOTHROW(cfg.validate());
  cfg.iterations = 99;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("theoretical hyperparameters: d = 1 rate exponent is -1/292") {
  const TheoryReport r = theoretical_hyperparams(100.0, 1);
  CHECK(r.rate_exponent == doctest::Approx(-1.0 / 292.0).epsilon(1e-14));
  // A = n^{415 * 1 * 4 * 125 / 292}; at n = 100 that is ~10^1421
  CHECK(r.a_exponent == doctest::Approx(415.0 * 4.0 * 125.0 / 292.0).epsilon(1e-14));
  CHECK(r.log10_a == doctest::Approx(1421.2).epsilon(1e-3));
  CHECK(r.infeasible);
}

TEST_CASE("theoretical hyperparameters: d = 2 rate exponent is -1/2308") {
  const TheoryReport r = theoretical_hyperparams(1000.0, 2);
  CHECK(r.rate_exponent == doctest::Approx(-1.0 / 2308.0).epsilon(1e-14));
  CHECK(r.infeasible);
}

TEST_CASE("train trace CSV has the documented schema") {
  const ProblemSpec prob = unit_robin_1d();
  const SampleSet samples = make_sample_set(prob.domain, 8, 4, 3);
  TrainConfig cfg;
  cfg.eta = 0.01;
  cfg.iterations = 2;
  cfg.subnet_count = 1;
  const NetParams p0 = init_params(cfg, NetDims{1, 2, 2});
  const auto [p, trace] = train(p0, prob, samples, cfg, loose_spec(p0));
  const auto path = std::string("/tmp/ritz_trace_schema_test.csv");
  trace.write_csv(path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema=1");
  std::getline(in, line);
  CHECK(line == "iter,loss,grad_norm,step_norm,guard_flag");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
  std::remove(path.c_str());
}
