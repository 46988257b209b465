#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ritz/problem.hpp"
#include "ritz/rng.hpp"

using namespace ritz;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("measures: unit cube and 1d interval") {
  CHECK(measures(Domain::hypercube(3)) == std::pair{1.0, 6.0});
  CHECK(measures(Domain::hypercube(1)) == std::pair{1.0, 2.0});
}

TEST_CASE("measures: disc of radius 1/2") {
  const Domain d = Domain::ball(2);
  CHECK(d.volume() == doctest::Approx(kPi / 4.0).epsilon(1e-14));
  CHECK(d.surface() == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("interior sampling is reproducible and in-domain") {
  const Domain cube = Domain::hypercube(2);
  const Matrix a = sample_interior(cube, 4, 42);
  const Matrix b = sample_interior(cube, 4, 42);
  CHECK(a == b);
  CHECK((a.array() > 0.0).all());
  CHECK((a.array() < 1.0).all());
}

TEST_CASE("interior sampling empirical mean approaches the centroid") {
  const Matrix pts = sample_interior(Domain::hypercube(3), 100000, 1);
  for (int j = 0; j < 3; ++j) {
    CHECK(pts.col(j).mean() == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("ball samples stay strictly inside") {
  const Domain ball = Domain::ball(2);
  const Matrix pts = sample_interior(ball, 2000, 3);
  const Vector c = ball.center();
  for (int i = 0; i < pts.rows(); ++i) {
    CHECK((pts.row(i).transpose() - c).norm() < Domain::ball_radius);
  }
}

TEST_CASE("1d boundary sampling is a fair coin on the endpoints") {
  Matrix pts, normals;
  sample_boundary(Domain::hypercube(1), 10000, 5, pts, normals);
  int at_zero = 0;
  for (int i = 0; i < pts.rows(); ++i) {
    CHECK((pts(i, 0) == 0.0 || pts(i, 0) == 1.0));
    if (pts(i, 0) == 0.0) {
      ++at_zero;
      CHECK(normals(i, 0) == -1.0);
    } else {
      CHECK(normals(i, 0) == 1.0);
    }
  }
  CHECK(at_zero / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("2d hypercube boundary points sit on exactly one face") {
  Matrix pts, normals;
  sample_boundary(Domain::hypercube(2), 500, 9, pts, normals);
  for (int i = 0; i < pts.rows(); ++i) {
    int on_face = 0;
    for (int j = 0; j < 2; ++j) {
      if (pts(i, j) == 0.0 || pts(i, j) == 1.0) {
        ++on_face;
        CHECK(std::abs(normals(i, j)) == 1.0);
      } else {
        CHECK(normals(i, j) == 0.0);
      }
    }
    CHECK(on_face == 1);
    CHECK(normals.row(i).norm() == 1.0);
  }
}

TEST_CASE("3d ball boundary normals are radial unit vectors") {
  const Domain ball = Domain::ball(3);
  Matrix pts, normals;
  sample_boundary(ball, 300, 11, pts, normals);
  const Vector c = ball.center();
  for (int i = 0; i < pts.rows(); ++i) {
    const Vector r = pts.row(i).transpose() - c;
    CHECK(std::abs(r.norm() - Domain::ball_radius) < 1e-12);
    CHECK((r / r.norm() - normals.row(i).transpose()).norm() < 1e-12);
  }
}

TEST_CASE("sample sets with the same seed are bit-identical") {
  const Domain cube = Domain::hypercube(2);
  const SampleSet a = make_sample_set(cube, 16, 8, 77);
  const SampleSet b = make_sample_set(cube, 16, 8, 77);
  CHECK(a.interior == b.interior);
  CHECK(a.boundary == b.boundary);
  CHECK(a.normals == b.normals);
}

TEST_CASE("sampling rejects empty requests") {
  CHECK_THROWS_AS(sample_interior(Domain::hypercube(1), 0, 1), std::invalid_argument);
  Matrix p, n;
  CHECK_THROWS_AS(sample_boundary(Domain::hypercube(1), 0, 1, p, n),
                  std::invalid_argument);
}

TEST_CASE("manufacture: constant solution under Neumann data") {
  ExactSolution u;
  u.value = [](const Vector&) { return 1.0; };
  u.gradient = [](const Vector& x) { return Vector::Zero(x.size()).eval(); };
  u.laplacian = [](const Vector&) { return 0.0; };
  const auto prob = manufacture(Domain::hypercube(2), u,
                                [](const Vector&) { return 1.0; },
                                BoundaryKind::Neumann);
  Vector x(2);
  x << 0.3, 0.8;
  CHECK(prob.f(x) == doctest::Approx(1.0).epsilon(1e-14));
  Vector y(2);
  y << 0.0, 0.4;
  CHECK(prob.g(y) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("manufacture: product sine solution gives f = (2 pi^2 + 1) u") {
  ExactSolution u;
  u.value = [](const Vector& x) { return std::sin(kPi * x(0)) * std::sin(kPi * x(1)); };
  u.gradient = [](const Vector& x) {
    Vector g(2);
    g(0) = kPi * std::cos(kPi * x(0)) * std::sin(kPi * x(1));
    g(1) = kPi * std::sin(kPi * x(0)) * std::cos(kPi * x(1));
    return g;
  };
  u.laplacian = [](const Vector& x) {
    return -2.0 * kPi * kPi * std::sin(kPi * x(0)) * std::sin(kPi * x(1));
  };
  const auto prob = manufacture(Domain::hypercube(2), u,
                                [](const Vector&) { return 1.0; },
                                BoundaryKind::Dirichlet, 0.1);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    Vector x(2);
    x << rng.uniform01(), rng.uniform01();
    const double expected = (2.0 * kPi * kPi + 1.0) * u.value(x);
    CHECK(prob.f(x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("manufacture: quadratic Robin data on the interval") {
  ExactSolution u;
  u.value = [](const Vector& x) { return x(0) * x(0); };
  u.gradient = [](const Vector& x) {
    Vector g(1);
    g(0) = 2.0 * x(0);
    return g;
  };
  u.laplacian = [](const Vector&) { return 2.0; };
  const auto prob = manufacture(Domain::hypercube(1), u,
                                [](const Vector&) { return 1.0; },
                                BoundaryKind::Robin, 1.0);
  Vector x(1);
  x << 0.5;
  CHECK(prob.f(x) == doctest::Approx(0.25 - 2.0).epsilon(1e-14));
  Vector left(1), right(1);
  left << 0.0;
  right << 1.0;
  CHECK(prob.g(left) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(prob.g(right) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("manufactured residual vanishes at random interior points") {
  // finite-difference Laplacian path: no symbolic closure supplied
  ExactSolution u;
  u.value = [](const Vector& x) { return std::exp(0.5 * x(0)) * std::cos(x(1)); };
  u.gradient = [](const Vector& x) {
    Vector g(2);
    g(0) = 0.5 * std::exp(0.5 * x(0)) * std::cos(x(1));
    g(1) = -std::exp(0.5 * x(0)) * std::sin(x(1));
    return g;
  };
  const auto prob = manufacture(Domain::hypercube(2), u,
                                [](const Vector&) { return 2.0; },
                                BoundaryKind::Neumann);
  const ExactSolution& exact = *prob.exact;
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    Vector x(2);
    x << rng.uniform01(), rng.uniform01();
    const double residual = -exact.laplacian(x) + 2.0 * exact.value(x) - prob.f(x);
    CHECK(std::abs(residual) < 1e-8);
  }
}

TEST_CASE("boundary datum matches the bc formula at random boundary points") {
  ExactSolution u;
  u.value = [](const Vector& x) { return std::sin(x(0)) * (1.0 + x(1)); };
  u.gradient = [](const Vector& x) {
    Vector g(2);
    g(0) = std::cos(x(0)) * (1.0 + x(1));
    g(1) = std::sin(x(0));
    return g;
  };
  u.laplacian = [](const Vector& x) { return -std::sin(x(0)) * (1.0 + x(1)); };
  const double beta = 0.7;
  const Domain cube = Domain::hypercube(2);
  const auto prob = manufacture(cube, u, [](const Vector&) { return 1.0; },
                                BoundaryKind::Robin, beta);
  Matrix pts, normals;
  sample_boundary(cube, 1000, 13, pts, normals);
  for (int i = 0; i < pts.rows(); ++i) {
    const Vector y = pts.row(i).transpose();
    const Vector n = normals.row(i).transpose();
    const double expected = u.value(y) + beta * u.gradient(y).dot(n);
    CHECK(std::abs(prob.g(y) - expected) < 1e-8);
  }
}

TEST_CASE("exact_robin_1d solves the two-point boundary system") {
  const Solution1d sol = exact_robin_1d(1.0, 1.0, 1.0);
  // (1-b)c1 + (1+b)c2 = -1 and (1+b)e c1 + (1-b)e^{-1} c2 = -1 at b=1
  CHECK(sol.c1 == doctest::Approx(-0.5 / std::exp(1.0)).epsilon(1e-12));
  CHECK(sol.c1 == doctest::Approx(-0.18394).epsilon(1e-4));
  CHECK(sol.c2 == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("exact_robin_1d residual -u'' + u - 1 vanishes on a grid") {
  const Solution1d sol = exact_robin_1d(1.0, 1.0, 1.0);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const double upp = sol.c1 * std::exp(x) + sol.c2 * std::exp(-x);
    const double residual = -upp + sol.value(x) - 1.0;
    CHECK(std::abs(residual) < 1e-10);
  }
  // boundary conditions: u + beta du/dn = 0 with outward normals -1, +1
  CHECK(std::abs(sol.value(0.0) - sol.derivative(0.0)) < 1e-12);
  CHECK(std::abs(sol.value(1.0) + sol.derivative(1.0)) < 1e-12);
}

TEST_CASE("zero source data gives the zero solution") {
  const Solution1d sol = exact_robin_1d(0.0, 1.0, 1.0);
  CHECK(sol.value(0.3) == 0.0);
  CHECK(sol.derivative(0.7) == 0.0);
}

TEST_CASE("singular Robin boundary systems are reported, not guessed") {
  const double e = std::exp(1.0);
  const double beta = -(1.0 + e) / (e - 1.0);
  CHECK_THROWS_AS(exact_robin_1d(1.0, 1.0, beta), std::runtime_error);
}

TEST_CASE("exact_dirichlet_1d vanishes at the endpoints") {
  const Solution1d sol = exact_dirichlet_1d(1.0, 1.0);
  CHECK(std::abs(sol.value(0.0)) < 1e-14);
  CHECK(std::abs(sol.value(1.0)) < 1e-14);
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    const double upp = sol.c1 * std::exp(x) + sol.c2 * std::exp(-x);
    CHECK(std::abs(-upp + sol.value(x) - 1.0) < 1e-10);
  }
}

TEST_CASE("sample CSV round-trips bit-exactly") {
  const Domain ball = Domain::ball(2);
  const SampleSet original = make_sample_set(ball, 20, 10, 4242);
  const auto path = std::filesystem::temp_directory_path() / "ritz_samples_test.csv";
  write_samples_csv(original, path.string());
  const SampleSet loaded = read_samples_csv(path.string());
  CHECK(loaded.interior == original.interior);
  CHECK(loaded.boundary == original.boundary);
  CHECK(loaded.normals == original.normals);
  CHECK(loaded.interior_weight == original.interior_weight);
  CHECK(loaded.boundary_weight == original.boundary_weight);
  CHECK(loaded.seed == original.seed);
  std::filesystem::remove(path);
}
