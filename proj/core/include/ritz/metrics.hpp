#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ritz/loss.hpp"

namespace ritz {

/// Monte Carlo H1 error report. h1^2 = l2^2 + h1_semi^2 holds exactly;
/// mc_stderr is the standard error of the squared-H1 estimate propagated to
/// the H1 scale (delta method; the raw squared-scale error when h1 ~ 0).
struct ErrorReport {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  double mc_stderr = 0.0;
  int n_eval = 0;

  std::string to_json() const;
};

ErrorReport mc_h1_error(const NetParams& params, const ExactSolution& exact,
                        const Domain& domain, int n_eval, std::uint64_t seed);

/// |L(train) - L(eval)|, an empirical probe of sup |L - L_hat|.
double generalization_gap(const NetParams& params, const ProblemSpec& prob,
                          const SampleSet& train_samples,
                          const SampleSet& eval_samples);

/// The five closed-form C1-norm bounds of the constrained network classes.
/// Activation constants follow the max{.,1} convention, so for tanh
/// B_sigma = B_sigma' = B_sigma'' = 1 (the raw sup of |sigma''| is
/// 4/(3 sqrt 3) ~ 0.7698, clamped up to 1).
struct ComplexityBounds {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;  // equals f2
  double f5 = 0.0;  // equals f3

  std::string to_json() const;
};

ComplexityBounds complexity_bounds(int m1, int m2, int d, double b_inn, double b_out);

/// Raw maximum of |tanh''| before clamping.
double tanh_second_derivative_sup();

/// Least-squares slope of log(error) against log(n). Throws
/// std::invalid_argument on fewer than 3 pairs or nonpositive values.
double empirical_rate(const std::vector<std::pair<double, double>>& pairs);

}  // namespace ritz
