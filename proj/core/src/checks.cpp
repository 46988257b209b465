#include "ritz/checks.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ritz {

std::vector<double> finite_difference_gradient(
    const std::function<double(const NetParams&)>& value, const NetParams& at,
    double h) {
  const int A = at.subnet_count();
  std::vector<double> flat = at.flatten();
  std::vector<double> grad(flat.size());
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double orig = flat[k];
    flat[k] = orig + h;
    const double up = value(NetParams::from_flat(flat, A, at.dims));
    flat[k] = orig - h;
    const double dn = value(NetParams::from_flat(flat, A, at.dims));
    flat[k] = orig;
    grad[k] = (up - dn) / (2.0 * h);
  }
  return grad;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / scale;
}

namespace {

// A manufactured 2d-capable problem family with varying data; the sinusoidal
// solution keeps all fields smooth on the closed cube.
ProblemSpec random_problem(int d, Rng& rng) {
  const double freq = 1.0 + rng.uniform01();
  ExactSolution u;
  u.value = [freq, d](const Vector& x) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= std::sin(freq * x(i) + 0.3);
    return v;
  };
  u.gradient = [freq, d](const Vector& x) {
    Vector g(d);
    for (int i = 0; i < d; ++i) {
      double v = freq * std::cos(freq * x(i) + 0.3);
      for (int k = 0; k < d; ++k) {
        if (k != i) v *= std::sin(freq * x(k) + 0.3);
      }
      g(i) = v;
    }
    return g;
  };
  const ExactSolution ucopy = u;
  u.laplacian = [freq, d, ucopy](const Vector& x) {
    return -freq * freq * d * ucopy.value(x);
  };

  const double wlevel = 0.5 + rng.uniform01();
  const ScalarField w = [wlevel](const Vector&) { return wlevel; };
  const bool neumann = rng.uniform01() < 0.3;
  const double beta = 0.5 + rng.uniform01();
  return manufacture(Domain::hypercube(d), u, w,
                     neumann ? BoundaryKind::Neumann : BoundaryKind::Robin,
                     neumann ? 0.0 : beta);
}

std::vector<double> flatten_vector(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string GradCheckReport::summary() const {
  static const char* kBlockNames[6] = {"W1", "b1", "W2", "b2", "W3", "b3"};
  std::ostringstream os;
  os << "grad-check: " << cases.size() << " configurations\n"
     << "  max rel err grad_x                : " << max_err_grad_x << "\n"
     << "  max rel err grad_params           : " << max_err_grad_params << "\n"
     << "  max rel err grad_params_of_spatial: " << max_err_grad_spatial << "\n"
     << "  max rel err loss_gradient         : " << max_err_loss_grad << "\n"
     << "  loss gradient by block:";
  for (int b = 0; b < 6; ++b) {
    os << " " << kBlockNames[b] << "=" << max_err_by_block[b];
  }
  os << "\n  verdict: " << (pass ? "PASS" : "FAIL");
  return os.str();
}

GradCheckReport run_grad_check(std::uint64_t seed, int config_count, bool corrupt) {
  GradCheckReport report;
  Rng rng(seed);
  const int d_choices[] = {1, 2, 3};
  const int a_choices[] = {1, 2, 4};

  for (int c = 0; c < config_count; ++c) {
    GradCheckCase tc;
    tc.d = d_choices[rng.below(3)];
    tc.subnet_count = a_choices[rng.below(3)];
    tc.dims = NetDims{tc.d, 2 + static_cast<int>(rng.below(3)),
                      2 + static_cast<int>(rng.below(3))};

    NetParams params = NetParams::random(tc.subnet_count, tc.dims, 1.5, rng);
    Vector x(tc.d);
    for (int i = 0; i < tc.d; ++i) x(i) = rng.uniform01();

    // spatial gradient against central differences of forward in x
    {
      const double h = 1e-5;
      const Vector analytic = grad_x(params, x);
      Vector fd(tc.d);
      Vector y = x;
      for (int i = 0; i < tc.d; ++i) {
        y(i) = x(i) + h;
        const double up = forward(params, y);
        y(i) = x(i) - h;
        const double dn = forward(params, y);
        y(i) = x(i);
        fd(i) = (up - dn) / (2.0 * h);
      }
      tc.err_grad_x = relative_error(flatten_vector(analytic), flatten_vector(fd));
    }

    // parameter gradient of the value
    {
      const auto fd = finite_difference_gradient(
          [&x](const NetParams& p) { return forward(p, x); }, params);
      tc.err_grad_params = relative_error(grad_params(params, x).flatten(), fd);
    }

    // mixed spatial-parameter gradient, axis chosen at random
    {
      const int axis = static_cast<int>(rng.below(tc.d));
      const auto fd = finite_difference_gradient(
          [&x, axis](const NetParams& p) {
            const double h = 1e-5;
            Vector y = x;
            y(axis) = x(axis) + h;
            const double up = forward(p, y);
            y(axis) = x(axis) - h;
            const double dn = forward(p, y);
            return (up - dn) / (2.0 * h);
          },
          params);
      tc.err_grad_spatial =
          relative_error(grad_params_of_spatial(params, x, axis).flatten(), fd);
    }

    // full loss gradient on a small sample set
    {
      ProblemSpec prob = random_problem(tc.d, rng);
      SampleSet samples = make_sample_set(prob.domain, 6, 4, rng.raw());
      ParamGrad analytic = loss_gradient(params, prob, samples);
      if (corrupt) {
        // negative-control hook: a deliberate formula defect
        analytic.subnets[0].W2.array() += 1e-2;
      }
      const auto fd_flat = finite_difference_gradient(
          [&prob, &samples](const NetParams& p) {
            return discrete_loss(p, prob, samples).total;
          },
          params);
      tc.err_loss_grad = relative_error(analytic.flatten(), fd_flat);

      const ParamGrad fd =
          NetParams::from_flat(fd_flat, tc.subnet_count, tc.dims);
      for (int s = 0; s < tc.subnet_count; ++s) {
        const SubnetParams& a = analytic.subnets[s];
        const SubnetParams& b = fd.subnets[s];
        auto upd = [&](int block, double diff, double scale) {
          report.max_err_by_block[block] = std::max(
              report.max_err_by_block[block], diff / std::max(1.0, scale));
        };
        upd(0, (a.W1 - b.W1).cwiseAbs().maxCoeff(), b.W1.cwiseAbs().maxCoeff());
        upd(1, (a.b1 - b.b1).cwiseAbs().maxCoeff(), b.b1.cwiseAbs().maxCoeff());
        upd(2, (a.W2 - b.W2).cwiseAbs().maxCoeff(), b.W2.cwiseAbs().maxCoeff());
        upd(3, (a.b2 - b.b2).cwiseAbs().maxCoeff(), b.b2.cwiseAbs().maxCoeff());
        upd(4, (a.W3 - b.W3).cwiseAbs().maxCoeff(), b.W3.cwiseAbs().maxCoeff());
        upd(5, std::abs(a.b3 - b.b3), std::abs(b.b3));
      }
    }

    report.max_err_grad_x = std::max(report.max_err_grad_x, tc.err_grad_x);
    report.max_err_grad_params = std::max(report.max_err_grad_params, tc.err_grad_params);
    report.max_err_grad_spatial =
        std::max(report.max_err_grad_spatial, tc.err_grad_spatial);
    report.max_err_loss_grad = std::max(report.max_err_loss_grad, tc.err_loss_grad);
    report.cases.push_back(tc);
  }
  report.pass = report.max_err_grad_x < 1e-5 && report.max_err_grad_params < 1e-5 &&
                report.max_err_grad_spatial < 1e-5 && report.max_err_loss_grad < 1e-5;
  return report;
}

std::string ProjectionCheckReport::summary() const {
  std::ostringstream os;
  os << "projection-check:\n"
     << "  max idempotence gap   : " << max_idempotence_gap << "\n"
     << "  max membership slack  : " << max_membership_violation << "\n"
     << "  max expansion         : " << max_expansion << "\n"
     << "  max l1 vs oracle gap  : " << max_l1_oracle_gap << "\n"
     << "  verdict: " << (pass ? "PASS" : "FAIL");
  return os.str();
}

namespace {

// Brute-force l1 projection for short vectors: tries every support set as the
// active set of the soft threshold and keeps the consistent one.
std::vector<double> l1_project_bruteforce(const std::vector<double>& v, double budget) {
  double l1 = 0.0;
  for (double x : v) l1 += std::abs(x);
  if (l1 <= budget) return v;
  const int n = static_cast<int>(v.size());
  double best_theta = l1;  // shrinking everything to zero is always consistent
  for (int mask = 1; mask < (1 << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        sum += std::abs(v[i]);
        ++count;
      }
    }
    const double theta = (sum - budget) / count;
    if (theta < 0.0) continue;
    bool consistent = true;
    for (int i = 0; i < n; ++i) {
      const bool active = mask & (1 << i);
      if (active && std::abs(v[i]) < theta - 1e-15) consistent = false;
      if (!active && std::abs(v[i]) > theta + 1e-15) consistent = false;
    }
    if (consistent) best_theta = std::min(best_theta, theta);
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(std::max(std::abs(v[i]) - best_theta, 0.0), v[i]);
  }
  return out;
}

}  // namespace

ProjectionCheckReport run_projection_check(std::uint64_t seed, int pair_count) {
  ProjectionCheckReport report;
  Rng rng(seed);
  const NetDims dims{2, 3, 2};
  const int A = 2;

  for (int c = 0; c < pair_count; ++c) {
    ProjectionSpec spec;
    spec.inner_centers = NetParams::random(A, dims, 1.0, rng);
    spec.inner_radius = 0.2 + rng.uniform01();
    spec.outer_budget = 0.5 + 2.0 * rng.uniform01();

    NetParams z = NetParams::random(A, dims, 3.0, rng);
    NetParams zp = NetParams::random(A, dims, 3.0, rng);
    const NetParams pz = project(z, spec);
    const NetParams pzp = project(zp, spec);

    // idempotence
    NetParams twice = project(pz, spec);
    twice.axpy(-1.0, pz);
    report.max_idempotence_gap =
        std::max(report.max_idempotence_gap, std::sqrt(twice.squared_norm()));

    // membership
    report.max_membership_violation =
        std::max(report.max_membership_violation, constraint_violation(pz, spec));

    // nonexpansiveness
    NetParams dz = z;
    dz.axpy(-1.0, zp);
    NetParams dp = pz;
    dp.axpy(-1.0, pzp);
    report.max_expansion =
        std::max(report.max_expansion,
                 std::sqrt(dp.squared_norm()) - std::sqrt(dz.squared_norm()));
  }

  // l1 projection against the subset-enumeration oracle on short vectors
  for (int c = 0; c < 200; ++c) {
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.symmetric(2.0);
    for (double budget : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const auto fast = project_l1(v, budget);
      const auto slow = l1_project_bruteforce(v, budget);
      for (int i = 0; i < n; ++i) {
        report.max_l1_oracle_gap =
            std::max(report.max_l1_oracle_gap, std::abs(fast[i] - slow[i]));
      }
    }
  }

  report.pass = report.max_idempotence_gap <= 1e-12 &&
                report.max_membership_violation <= 1e-12 &&
                report.max_expansion <= 1e-12 && report.max_l1_oracle_gap <= 1e-9;
  return report;
}

std::string ConvexityCheckReport::summary() const {
  std::ostringstream os;
  os << "convexity-check: " << direction_count << " outer directions\n"
     << "  min second difference: " << min_second_difference << "\n"
     << "  verdict: " << (pass ? "PASS" : "FAIL");
  return os.str();
}

ConvexityCheckReport run_convexity_check(std::uint64_t seed, int direction_count) {
  ConvexityCheckReport report;
  report.direction_count = direction_count;
  report.min_second_difference = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  const double h = 1e-3;

  for (int c = 0; c < direction_count; ++c) {
    const int d = 1 + static_cast<int>(rng.below(2));
    const NetDims dims{d, 3, 2};
    const int A = 1 + static_cast<int>(rng.below(2));
    NetParams params = NetParams::random(A, dims, 1.5, rng);
    ProblemSpec prob = random_problem(d, rng);
    if (prob.bc == BoundaryKind::Neumann) {
      prob.bc = BoundaryKind::Robin;
      prob.beta = 1.0;  // convexity criterion targets the Robin loss
    }
    SampleSet samples = make_sample_set(prob.domain, 8, 4, rng.raw());

    // random direction supported on the outer layer only
    NetParams dir = NetParams::zeros(A, dims);
    for (auto& s : dir.subnets) {
      for (int i = 0; i < s.W3.size(); ++i) s.W3(i) = rng.symmetric(1.0);
      s.b3 = rng.symmetric(1.0);
    }

    NetParams up = params;
    up.axpy(h, dir);
    NetParams dn = params;
    dn.axpy(-h, dir);
    const double second = discrete_loss(up, prob, samples).total -
                          2.0 * discrete_loss(params, prob, samples).total +
                          discrete_loss(dn, prob, samples).total;
    report.min_second_difference = std::min(report.min_second_difference, second);
  }
  report.pass = report.min_second_difference >= -1e-10;
  return report;
}

}  // namespace ritz
