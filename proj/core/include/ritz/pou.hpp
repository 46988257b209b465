#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ritz/problem.hpp"

namespace ritz {

/// Sharpness of the tanh ramp bumps:
///   alpha = N ln( (2k)^{k+1} (Nk)^k / (e^k eps) ).
/// Requires N >= 1, k >= 1 (the formula degenerates at k = 0) and
/// 0 < eps < 1/4.
double pou_alpha(int resolution, int smoothness, double accuracy);

struct PouConfig {
  int resolution = 4;     // N: cells per axis, >= 2
  int smoothness = 1;     // k >= 1, seeds alpha
  double accuracy = 0.1;  // eps in (0, 1/4)
  double alpha = 0.0;     // derived

  static PouConfig make(int resolution, int smoothness, double accuracy);
};

/// One-dimensional bump family: phi_1 and phi_N are half-ramps, interior
/// bumps are differences of shifted ramps, so sum_j phi_j == 1 exactly
/// (the tanh terms cancel pairwise). j is 1-based in 1..N.
double pou_phi(int j, const PouConfig& cfg, double y);

/// Tensor-product bump Phi_j(x) = prod_i phi_{j_i}(x_i); j_i in 1..N.
double pou_bump(const std::vector<int>& j, const PouConfig& cfg, const Vector& x);

/// Order-0 numerical verification of the approximate-partition-of-unity
/// bounds on every cell I_j = prod ((j_i-1)/N, j_i/N):
///   sup |sum_{|v|_inf <= 1} Phi_{j+v} - 1| <= d * eps,
///   sup Phi_{j'} <= eps for |j'-j|_inf >= 2.
/// Because the global sum is exactly 1, the local deficit equals the total
/// far-bump mass; `max_consistency_gap` reports the worst disagreement of the
/// two measurements.
struct PouBoundsReport {
  int resolution = 0;
  double accuracy = 0.0;
  int dim = 0;
  double sup_deficit = 0.0;
  double sup_far = 0.0;
  double worst_global_sum = 0.0;  // sampled sum_j Phi_j farthest from 1
  double max_consistency_gap = 0.0;
  bool deficit_ok = false;
  bool far_ok = false;

  bool ok() const { return deficit_ok && far_ok; }
};

PouBoundsReport check_pou_bounds(const PouConfig& cfg, int dim, int samples_per_cell,
                                 std::uint64_t seed);

/// CSV report for a sweep of bound checks. Columns:
/// N, eps, d, sup_deficit, sup_far, bound_ok.
void write_pou_report_csv(const std::vector<PouBoundsReport>& reports,
                          const std::string& path);

/// Least-squares polynomial of total degree <= degree fitted on a tensor grid
/// over J_j = prod ((j_i-2)/N, (j_i+1)/N) clipped to (0,1)^d. Coefficients are
/// in the global monomial basis x^beta.
struct LocalFit {
  std::vector<int> cell;                 // j in {1..N}^d
  std::vector<std::vector<int>> powers;  // exponent multi-indices
  std::vector<double> coeffs;

  double evaluate(const Vector& x) const;
};

/// Number of monomials of total degree <= degree in d variables.
int polynomial_coefficient_count(int degree, int d);

/// grid_per_axis == 0 selects the default 4x the coefficient count. Throws
/// std::runtime_error on a rank-deficient design.
LocalFit local_poly_fit(const ScalarField& f, const std::vector<int>& cell, int resolution,
                        int dim, int degree, int grid_per_axis = 0);

/// Localized approximant  f~(x) = sum_j Phi_j(x) p_j(x)  with exact products
/// in place of the multiplication subnetwork. Evaluable anywhere in (0,1)^d.
class LocalizedApproximant {
 public:
  LocalizedApproximant(PouConfig cfg, int dim, std::vector<LocalFit> fits);

  double operator()(const Vector& x) const;
  const std::vector<LocalFit>& fits() const { return fits_; }

 private:
  PouConfig cfg_;
  int dim_ = 0;
  std::vector<LocalFit> fits_;  // row-major over {1..N}^d
};

/// Validates that `fits` covers every cell of {1..N}^dim (throws otherwise).
LocalizedApproximant assemble_localized_approximant(const PouConfig& cfg, int dim,
                                                    std::vector<LocalFit> fits);

/// Fits every cell of the grid, then assembles.
LocalizedApproximant assemble_localized_approximant(const ScalarField& f,
                                                    const PouConfig& cfg, int dim,
                                                    int degree, int grid_per_axis = 0);

}  // namespace ritz
