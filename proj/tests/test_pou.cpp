#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>
#include <vector>

#include "ritz/metrics.hpp"
#include "ritz/pou.hpp"
#include "ritz/rng.hpp"

using namespace ritz;

namespace {
constexpr double kPi = 3.14159265358979323846;

Vector point1(double x) {
  Vector v(1);
  v(0) = x;
  return v;
}
}  // namespace

TEST_CASE("alpha matches its closed form") {
  // N ln((2k)^{k+1} (Nk)^k / (e^k eps)) evaluated independently
  const double expected = 4.0 * std::log(4.0 * 4.0 / (std::exp(1.0) * 0.1));
  CHECK(pou_alpha(4, 1, 0.1) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(pou_alpha(4, 1, 0.1) == doctest::Approx(16.30).epsilon(1e-3));
}

TEST_CASE("alpha would vanish exactly at the critical accuracy") {
  // the eps that makes the log argument 1 exceeds 1/4 for every N, k >= 1,
  // so evaluate the unguarded formula as the oracle and check the guarded
  // function rejects the out-of-range request
  const int N = 1, k = 1;
  const double critical = std::pow(2.0 * k, k + 1.0) * std::pow(N * k * 1.0, k) / std::exp(1.0);
  CHECK(critical > 0.25);
  CHECK(N * std::log(critical / critical) == 0.0);
  CHECK_THROWS_AS(pou_alpha(N, k, critical), std::invalid_argument);
}

TEST_CASE("alpha is strictly decreasing in eps") {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.001, 0.01, 0.05, 0.1, 0.2, 0.24}) {
    const double a = pou_alpha(8, 2, eps);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("alpha rejects k = 0 and out-of-range eps") {
  CHECK_THROWS_AS(pou_alpha(4, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(pou_alpha(4, 1, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(pou_alpha(4, 1, 0.0), std::invalid_argument);
}

TEST_CASE("the 1d bumps sum to one exactly by telescoping") {
  Rng rng(3);
  for (int N : {2, 4, 8, 16}) {
    const PouConfig cfg = PouConfig::make(N, 1, 0.1);
    for (int trial = 0; trial < 250; ++trial) {
      const double y = rng.uniform01();
      double sum = 0.0;
      for (int j = 1; j <= N; ++j) sum += pou_phi(j, cfg, y);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("phi_1 equals one half at the first cell edge") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  CHECK(pou_phi(1, cfg, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("interior bump value matches the two-ramp difference") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  const double expected =
      0.5 * std::tanh(cfg.alpha * 0.25) - 0.5 * std::tanh(cfg.alpha * 0.0);
  CHECK(pou_phi(2, cfg, 0.5) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(pou_phi(2, cfg, 0.5) == doctest::Approx(0.4997).epsilon(1e-3));
}

TEST_CASE("bumps are nonnegative") {
  Rng rng(5);
  const PouConfig cfg = PouConfig::make(8, 1, 0.05);
  for (int trial = 0; trial < 500; ++trial) {
    const double y = rng.uniform(-0.2, 1.2);
    for (int j = 1; j <= 8; ++j) {
      CHECK(pou_phi(j, cfg, y) >= -1e-12);
    }
  }
}

TEST_CASE("tensor bumps sum to one and reduce to phi in 1d") {
  Rng rng(7);
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  // d = 1 reduction
  for (int j = 1; j <= 4; ++j) {
    const double y = rng.uniform01();
    CHECK(pou_bump({j}, cfg, point1(y)) == pou_phi(j, cfg, y));
  }
  // d = 2 global sum, naive accumulation over all multi-indices
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(2);
    x << rng.uniform01(), rng.uniform01();
    double sum = 0.0;
    for (int j1 = 1; j1 <= 4; ++j1)
      for (int j2 = 1; j2 <= 4; ++j2) sum += pou_bump({j1, j2}, cfg, x);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("the worked 2d bump value is the square of the 1d value") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  Vector x(2);
  x << 0.5, 0.5;
  const double phi2 = pou_phi(2, cfg, 0.5);
  CHECK(pou_bump({2, 2}, cfg, x) == doctest::Approx(phi2 * phi2).epsilon(1e-14));
  CHECK(pou_bump({2, 2}, cfg, x) == doctest::Approx(0.2497).epsilon(1e-3));
}

TEST_CASE("bump index range is enforced") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  CHECK_THROWS_AS(pou_phi(0, cfg, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(pou_phi(5, cfg, 0.5), std::invalid_argument);
}

TEST_CASE("order-0 partition bounds hold on every cell") {
  for (double eps : {0.1, 0.01}) {
    for (int d : {1, 2}) {
      const PouConfig cfg = PouConfig::make(4, 1, eps);
      const PouBoundsReport r = check_pou_bounds(cfg, d, 40, 11);
      CHECK(r.deficit_ok);
      CHECK(r.far_ok);
      CHECK(r.sup_deficit <= d * eps);
      CHECK(r.sup_far <= eps);
      CHECK(std::abs(r.worst_global_sum - 1.0) < 1e-12);
      CHECK(r.max_consistency_gap < 1e-12);
    }
  }
}

TEST_CASE("tighter accuracy gives proportionally smaller deviations") {
  const PouConfig loose = PouConfig::make(8, 1, 0.1);
  const PouConfig tight = PouConfig::make(8, 1, 0.01);
  const PouBoundsReport rl = check_pou_bounds(loose, 1, 30, 13);
  const PouBoundsReport rt = check_pou_bounds(tight, 1, 30, 13);
  CHECK(rt.sup_deficit < rl.sup_deficit);
  CHECK(rt.sup_far < rl.sup_far);
}

TEST_CASE("polynomials of fitting degree are recovered exactly") {
  const ScalarField f = [](const Vector& x) {
    return 2.0 + 3.0 * x(0) - x(0) * x(0);
  };
  const LocalFit fit = local_poly_fit(f, {2}, 4, 1, 2);
  REQUIRE(fit.coeffs.size() == 3);
  // powers are enumerated in ascending degree: 1, x, x^2
  CHECK(fit.coeffs[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.coeffs[1] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.coeffs[2] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("constant fields produce a single constant coefficient") {
  const ScalarField f = [](const Vector&) { return 4.25; };
  const LocalFit fit = local_poly_fit(f, {1, 1}, 4, 2, 1);
  for (std::size_t k = 0; k < fit.coeffs.size(); ++k) {
    int degree = 0;
    for (int p : fit.powers[k]) degree += p;
    if (degree == 0) {
      CHECK(fit.coeffs[k] == doctest::Approx(4.25).epsilon(1e-12));
    } else {
      CHECK(std::abs(fit.coeffs[k]) < 1e-12);
    }
  }
}

TEST_CASE("local fit error scales like h^s for the sine field") {
  const ScalarField f = [](const Vector& x) { return std::sin(2.0 * kPi * x(0)); };
  const int degree = 1;  // s = 2
  std::vector<std::pair<double, double>> pairs;
  Rng rng(17);
  for (int N : {4, 8, 16, 32}) {
    double worst = 0.0;
    for (int cell = 1; cell <= N; ++cell) {
      const LocalFit fit = local_poly_fit(f, {cell}, N, 1, degree);
      // per-cell L2 error on fresh points inside I_cell
      double acc = 0.0;
      const int probes = 64;
      for (int i = 0; i < probes; ++i) {
        const double x = (cell - 1.0 + rng.uniform01()) / N;
        const double diff = fit.evaluate(point1(x)) - f(point1(x));
        acc += diff * diff;
      }
      worst = std::max(worst, std::sqrt(acc / probes));
    }
    pairs.push_back({static_cast<double>(N), worst});
  }
  const double slope = empirical_rate(pairs);
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.25));
}

TEST_CASE("rank-deficient designs are reported") {
  const ScalarField f = [](const Vector& x) { return x(0); };
  // a one-point-per-axis grid cannot identify a linear polynomial
  CHECK_THROWS(local_poly_fit(f, {1}, 4, 1, 1, 1));
}

TEST_CASE("approximant reproduces constants exactly") {
  const ScalarField f = [](const Vector&) { return 3.5; };
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  const auto approx = assemble_localized_approximant(f, cfg, 1, 1);
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform01();
    CHECK(approx(point1(x)) == doctest::Approx(3.5).epsilon(1e-12));
  }
}

TEST_CASE("approximant error decreases as the grid refines") {
  const ScalarField f = [](const Vector& x) { return std::sin(2.0 * kPi * x(0)); };
  Rng rng(23);
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {4, 8, 16}) {
    const PouConfig cfg = PouConfig::make(N, 1, 0.01);
    const auto approx = assemble_localized_approximant(f, cfg, 1, 1);
    double sup = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform01();
      sup = std::max(sup, std::abs(approx(point1(x)) - f(point1(x))));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("polynomial fields leak at most eps times their sup") {
  const ScalarField f = [](const Vector& x) { return 1.0 + 0.5 * x(0); };
  const double eps = 0.1;
  const PouConfig cfg = PouConfig::make(4, 1, eps);
  const auto approx = assemble_localized_approximant(f, cfg, 1, 1);
  Rng rng(29);
  const double sup_f = 1.5;
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform01();
    const double gap = std::abs(approx(point1(x)) - f(point1(x)));
    CHECK(gap <= eps * sup_f);
    CHECK(gap < 1e-8);  // exact fits make the leakage vanish
  }
}

TEST_CASE("assembly rejects missing cells") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  const ScalarField f = [](const Vector& x) { return x(0); };
  std::vector<LocalFit> fits;
  for (int cell = 1; cell <= 3; ++cell) {
    fits.push_back(local_poly_fit(f, {cell}, 4, 1, 1));
  }
  CHECK_THROWS_AS(assemble_localized_approximant(cfg, 1, std::move(fits)),
                  std::invalid_argument);
}

TEST_CASE("pou report CSV has the six documented columns") {
  const PouConfig cfg = PouConfig::make(4, 1, 0.1);
  std::vector<PouBoundsReport> reports{check_pou_bounds(cfg, 1, 10, 1)};
  const std::string path = "/tmp/ritz_pou_schema_test.csv";
  write_pou_report_csv(reports, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema=1");
  std::getline(in, line);
  CHECK(line == "N,eps,d,sup_deficit,sup_far,bound_ok");
  std::remove(path.c_str());
}
