#pragma once

#include <string>

#include "ritz/network.hpp"
#include "ritz/problem.hpp"

namespace ritz {

/// Term-wise value of the discrete Ritz loss. `total` is the exact sum of the
/// five terms; `total_stderr` is the Monte Carlo standard error of the total
/// (sample standard deviation of the per-point contributions over sqrt(count)).
struct LossBreakdown {
  double grad_energy = 0.0;  // (|O|/n)   sum_i 1/2 |grad f_W(X_i)|^2
  double mass = 0.0;         // (|O|/n)   sum_i 1/2 w f_W^2
  double source = 0.0;       // -(|O|/n)  sum_i f f_W
  double bdry_mass = 0.0;    // (|dO|/(beta m)) sum_j 1/2 f_W^2; zero for Neumann
  double bdry_source = 0.0;  // -(|dO|/(beta m)) sum_j g f_W; -(|dO|/m)... Neumann
  double total = 0.0;
  double total_stderr = 0.0;

  std::string to_json() const;  // {total, grad_energy, mass, source, bdry_mass, bdry_source}
};

/// Robin loss; also accepts Dirichlet problems, which are solved through the
/// Robin penalty route with g = 0 and the problem's beta.
LossBreakdown discrete_loss_robin(const NetParams& params, const ProblemSpec& prob,
                                  const SampleSet& samples);
LossBreakdown discrete_loss_neumann(const NetParams& params, const ProblemSpec& prob,
                                    const SampleSet& samples);
/// Dispatches on prob.bc.
LossBreakdown discrete_loss(const NetParams& params, const ProblemSpec& prob,
                            const SampleSet& samples);

/// Exact gradient of the discrete loss, assembled per sample from the
/// parameter gradients of f_W and of its spatial derivatives. Summation runs
/// in sample-index order so results are bit-reproducible.
ParamGrad loss_gradient(const NetParams& params, const ProblemSpec& prob,
                        const SampleSet& samples);

/// Loss and gradient in a single pass over the samples (one forward trace per
/// point). Values are identical to the separate calls.
LossBreakdown loss_value_and_gradient(const NetParams& params, const ProblemSpec& prob,
                                      const SampleSet& samples, ParamGrad& grad);

/// Loss gap against the attached exact solution on a shared evaluation set.
/// With v = f_W - u* the gap expands per sample as
///   lhs = rhs + cross,
/// where rhs is the quadratic energy distance
///   (|O|/n) sum [ 1/2 |grad v|^2 + 1/2 w v^2 ] + (|dO|/(2 beta m)) sum v^2
/// and cross collects the first-order terms, which vanish in expectation
/// because u* solves the variational problem (they do not vanish per sample).
struct EnergyExcess {
  double lhs = 0.0;
  double rhs = 0.0;
  double cross = 0.0;
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
};

EnergyExcess energy_excess(const NetParams& params, const ProblemSpec& prob,
                           const SampleSet& eval);

}  // namespace ritz
