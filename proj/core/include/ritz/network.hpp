#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ritz/linalg.hpp"
#include "ritz/rng.hpp"

namespace ritz {

/// Layer widths of one subnetwork. Defaults follow the analyzed choice
/// m1 = 5d, m2 = binom(2d+1, d+1); any m1, m2 >= 1 is accepted so gradient
/// tests can run on tiny nets.
struct NetDims {
  int d = 1;
  int m1 = 5;
  int m2 = 3;
};

long long binomial(int n, int k);
NetDims default_dims(int d);

/// Parameters of one three-layer tanh subnetwork
///   y = W3 * tanh(W2 * tanh(W1 * x + b1) + b2) + b3.
struct SubnetParams {
  Matrix W1;     // m1 x d
  Vector b1;     // m1
  Matrix W2;     // m2 x m1
  Vector b2;     // m2
  RowVector W3;  // 1 x m2
  double b3 = 0.0;
};

/// Sum-of-subnetworks model f_W(x) = sum_s subnet_s(x).
struct NetParams {
  std::vector<SubnetParams> subnets;
  NetDims dims;

  int subnet_count() const { return static_cast<int>(subnets.size()); }
  std::size_t parameter_count() const;

  static NetParams zeros(int subnet_count, NetDims dims);
  static NetParams random(int subnet_count, NetDims dims, double bound, Rng& rng);

  /// Throws std::invalid_argument on shape inconsistency or non-finite entries.
  void validate() const;
  bool all_finite() const;

  // Flat vector-space helpers shared by the optimizer and the finite-difference
  // oracles. Block order: W1, b1, W2, b2, W3, b3 per subnet; matrices row-major.
  void axpy(double a, const NetParams& other);  // *this += a * other
  void scale(double a);
  double dot(const NetParams& other) const;
  double squared_norm() const;
  std::vector<double> flatten() const;
  static NetParams from_flat(const std::vector<double>& values, int subnet_count,
                             NetDims dims);
};

/// Gradient container, shape-isomorphic to the parameters it differentiates.
using ParamGrad = NetParams;

struct SubnetTrace {
  Vector f1org, f1;  // pre-/post-activation of the first hidden layer
  Vector f2org, f2;  // second hidden layer
};

/// Cached forward pass at one point: the per-subnet pre-activations plus the
/// network value and its spatial gradient. Gradient routines reuse the trace
/// so value/gradient calls at the same point share the tanh evaluations.
struct EvalTrace {
  std::vector<SubnetTrace> subnets;
  double value = 0.0;
  Vector grad_x;
};

void evaluate(const NetParams& params, const Vector& x, EvalTrace& trace);

double forward(const NetParams& params, const Vector& x);
Vector grad_x(const NetParams& params, const Vector& x);

/// d f_W / d(every parameter block) at x.
ParamGrad grad_params(const NetParams& params, const Vector& x);

/// d(d f_W / d x_axis) / d(every parameter block) at x; axis is 0-based.
ParamGrad grad_params_of_spatial(const NetParams& params, const Vector& x, int axis);

/// Accumulating forms used by the loss assembly: acc += coeff * grad(...).
/// `trace` must come from evaluate(params, x).
void accumulate_grad_params(const NetParams& params, const Vector& x,
                            const EvalTrace& trace, double coeff, ParamGrad& acc);
void accumulate_grad_params_of_spatial(const NetParams& params, const Vector& x,
                                       const EvalTrace& trace, int axis,
                                       double coeff, ParamGrad& acc);

}  // namespace ritz
