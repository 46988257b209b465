#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ritz/optimizer.hpp"

namespace ritz {

/// Finite-difference and property suites shared by the test binaries and the
/// grad-check subcommand. The oracles here touch only forward evaluation and
/// loss values, never the analytic gradient paths they are checking.

/// Central finite differences of a scalar function of the parameters,
/// one flat entry at a time.
std::vector<double> finite_difference_gradient(
    const std::function<double(const NetParams&)>& value, const NetParams& at,
    double h = 1e-5);

/// max |a-b| / max(1, max |b|), a bounded relative-error metric over blocks.
double relative_error(const std::vector<double>& a, const std::vector<double>& b);

struct GradCheckCase {
  int d = 0;
  int subnet_count = 0;
  NetDims dims;
  double err_grad_x = 0.0;        // spatial gradient vs FD of forward
  double err_grad_params = 0.0;   // parameter gradient vs FD of forward
  double err_grad_spatial = 0.0;  // mixed spatial-parameter gradient vs nested FD
  double err_loss_grad = 0.0;     // loss gradient vs FD of the discrete loss
};

struct GradCheckReport {
  std::vector<GradCheckCase> cases;
  double max_err_grad_x = 0.0;
  double max_err_grad_params = 0.0;
  double max_err_grad_spatial = 0.0;
  double max_err_loss_grad = 0.0;
  // loss-gradient error split by parameter block, W1 b1 W2 b2 W3 b3
  std::array<double, 6> max_err_by_block{};
  bool pass = false;

  std::string summary() const;
};

/// Runs `config_count` random configurations with d in {1,2,3}, A in {1,2,4}
/// and small widths. Thresholds: 1e-5 for parameter/loss/mixed gradients.
/// `corrupt` perturbs the analytic loss gradient before comparison; it is the
/// negative control hook and must make the suite fail.
GradCheckReport run_grad_check(std::uint64_t seed, int config_count = 20,
                               bool corrupt = false);

struct ProjectionCheckReport {
  double max_idempotence_gap = 0.0;
  double max_membership_violation = 0.0;
  double max_expansion = 0.0;      // ||P(z)-P(z')|| - ||z-z'||, should be <= tol
  double max_l1_oracle_gap = 0.0;  // sort-threshold vs brute-force subset oracle
  bool pass = false;

  std::string summary() const;
};

ProjectionCheckReport run_projection_check(std::uint64_t seed, int pair_count = 1000);

struct ConvexityCheckReport {
  double min_second_difference = 0.0;  // along random outer directions
  int direction_count = 0;
  bool pass = false;

  std::string summary() const;
};

/// Second differences of the Robin loss along random outer-layer directions at
/// h = 1e-3; convexity in the outer layer means they stay >= -1e-10.
ConvexityCheckReport run_convexity_check(std::uint64_t seed, int direction_count = 1000);

}  // namespace ritz
