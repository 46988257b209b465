#include "ritz/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ritz/io.hpp"

namespace ritz {

std::string ErrorReport::to_json() const {
  std::ostringstream os;
  os << "{\"l2\": " << format_double(l2) << ", \"h1_semi\": " << format_double(h1_semi)
     << ", \"h1\": " << format_double(h1) << ", \"mc_stderr\": " << format_double(mc_stderr)
     << ", \"n_eval\": " << n_eval << "}";
  return os.str();
}

ErrorReport mc_h1_error(const NetParams& params, const ExactSolution& exact,
                        const Domain& domain, int n_eval, std::uint64_t seed) {
  if (!exact.value || !exact.gradient) {
    throw std::invalid_argument("mc_h1_error needs the exact solution");
  }
  if (n_eval < 100) throw std::invalid_argument("n_eval must be >= 100");

  const Matrix pts = sample_interior(domain, n_eval, seed);
  const double vol = domain.volume();

  double sum_l2 = 0.0, sum_semi = 0.0, sum_h1 = 0.0, sum_h1_sq = 0.0;
  EvalTrace trace;
  Vector x(domain.d);
  for (int i = 0; i < n_eval; ++i) {
    x = pts.row(i).transpose();
    evaluate(params, x, trace);
    const double dv = trace.value - exact.value(x);
    const double dg = (trace.grad_x - exact.gradient(x)).squaredNorm();
    const double z = vol * (dv * dv + dg);
    sum_l2 += dv * dv;
    sum_semi += dg;
    sum_h1 += z;
    sum_h1_sq += z * z;
  }
  ErrorReport r;
  r.n_eval = n_eval;
  const double l2_sq = vol * sum_l2 / n_eval;
  const double semi_sq = vol * sum_semi / n_eval;
  r.l2 = std::sqrt(l2_sq);
  r.h1_semi = std::sqrt(semi_sq);
  r.h1 = std::sqrt(l2_sq + semi_sq);

  const double mean = sum_h1 / n_eval;
  const double var = n_eval > 1
                         ? std::max(0.0, (sum_h1_sq - n_eval * mean * mean) / (n_eval - 1))
                         : 0.0;
  const double se_sq = std::sqrt(var / n_eval);  // stderr of the h1^2 estimate
  r.mc_stderr = r.h1 > 1e-12 ? se_sq / (2.0 * r.h1) : std::sqrt(se_sq);
  return r;
}

double generalization_gap(const NetParams& params, const ProblemSpec& prob,
                          const SampleSet& train_samples,
                          const SampleSet& eval_samples) {
  const double train_loss = discrete_loss(params, prob, train_samples).total;
  const double eval_loss = discrete_loss(params, prob, eval_samples).total;
  return std::abs(train_loss - eval_loss);
}

double tanh_second_derivative_sup() { return 4.0 / (3.0 * std::sqrt(3.0)); }

ComplexityBounds complexity_bounds(int m1, int m2, int d, double b_inn, double b_out) {
  if (m1 < 1 || m2 < 1 || d < 1 || b_inn <= 0.0 || b_out <= 0.0) {
    throw std::invalid_argument("complexity bounds need positive inputs");
  }
  // max{., 1} convention for the activation constants
  const double bs = 1.0;
  const double bsp = 1.0;
  const double bspp = std::max(tanh_second_derivative_sup(), 1.0);

  ComplexityBounds b;
  b.f1 = 2.0 * d * m2 * m2 * std::pow(static_cast<double>(m1), 1.5) *
         std::pow(bsp, 4) * bspp * std::pow(b_inn, 5) * b_out * b_out;
  b.f2 = 2.0 * m2 * m2 * std::sqrt(static_cast<double>(m1)) * bs * bs * bsp * bsp *
         b_inn * b_out * b_out;
  b.f3 = m2 * std::sqrt(static_cast<double>(m1)) * bs * bsp * bsp * b_inn * b_out;
  b.f4 = b.f2;
  b.f5 = b.f3;
  return b;
}

std::string ComplexityBounds::to_json() const {
  std::ostringstream os;
  os << "{\"B_F1\": " << format_double(f1) << ", \"B_F2\": " << format_double(f2)
     << ", \"B_F3\": " << format_double(f3) << ", \"B_F4\": " << format_double(f4)
     << ", \"B_F5\": " << format_double(f5) << "}";
  return os.str();
}

double empirical_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("rate fit needs at least 3 pairs");
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, err] : pairs) {
    if (n <= 0.0 || err <= 0.0) {
      throw std::invalid_argument("rate fit needs positive sample sizes and errors");
    }
    sx += std::log(n);
    sy += std::log(err);
  }
  const double mx = sx / pairs.size();
  const double my = sy / pairs.size();
  double num = 0.0, den = 0.0;
  for (const auto& [n, err] : pairs) {
    const double dx = std::log(n) - mx;
    num += dx * (std::log(err) - my);
    den += dx * dx;
  }
  if (den == 0.0) throw std::invalid_argument("rate fit needs distinct sample sizes");
  return num / den;
}

}  // namespace ritz
