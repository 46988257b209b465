#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ritz/loss.hpp"

namespace ritz {

/// Constraint set of projected gradient descent: every inner block (W1, b1,
/// W2, b2) lives in a Frobenius ball of radius `inner_radius` around its
/// snapshot in `inner_centers`, and the concatenated outer layer (all W3
/// entries and b3) lives in the l1 ball of radius `outer_budget`.
struct ProjectionSpec {
  NetParams inner_centers;  // outer blocks of the snapshot are ignored
  double inner_radius = 0.0;
  double outer_budget = 0.0;

  void validate() const;
};

enum class TrainMode { Practical, TheoryReport };

struct TrainConfig {
  double eta = 0.1;
  int iterations = 100;  // T
  int subnet_count = 1;  // A
  double init_bound = 1.0;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::Practical;

  /// theory-report mode additionally requires iterations == round(1/eta).
  void validate() const;
};

struct TrainRecord {
  double loss = 0.0;
  double grad_norm = 0.0;
  double step_norm = 0.0;
  bool projection_active = false;
  bool guard_violation = false;  // loss rose by more than 1e-10 entering this state
};

struct TrainTrace {
  std::vector<TrainRecord> records;  // length T+1, including the initial state
  bool aborted_nonfinite = false;

  bool monotone(double tol = 1e-10) const;
  /// CSV columns: iter, loss, grad_norm, step_norm, guard_flag.
  void write_csv(const std::string& path) const;
};

/// Outer layer zero, inner entries i.i.d. uniform on [-init_bound, init_bound].
NetParams init_params(const TrainConfig& cfg, NetDims dims);

/// Euclidean projection onto the constraint set, blockwise radial for the
/// inner Frobenius balls and exact sort-and-threshold for the outer l1 ball.
/// Members of the set are returned bit-identical.
NetParams project(const NetParams& params, const ProjectionSpec& spec);

/// l1-ball projection of a raw vector (the outer-layer primitive, exposed for
/// oracle tests). Deterministic sort-based soft threshold.
std::vector<double> project_l1(const std::vector<double>& v, double budget);

/// Largest constraint violation (negative when strictly inside every ball).
double constraint_violation(const NetParams& params, const ProjectionSpec& spec);

/// Full-batch PGD: W <- proj_C(W - eta * grad L). Projects params0 first.
/// Aborts with a partial trace when loss or gradient turn non-finite.
std::pair<NetParams, TrainTrace> train(const NetParams& params0,
                                       const ProblemSpec& prob,
                                       const SampleSet& samples,
                                       const TrainConfig& cfg,
                                       const ProjectionSpec& spec);

/// Halves eta starting from eta0 until `trial_steps` PGD steps are
/// nonincreasing (per-step tolerance 1e-10); returns the accepted step.
/// Throws std::runtime_error when max_halvings is exhausted.
double find_monotone_step(const NetParams& params0, const ProblemSpec& prob,
                          const SampleSet& samples, const ProjectionSpec& spec,
                          double eta0, int trial_steps = 20, int max_halvings = 60);

/// Evaluation of the prescribed hyperparameters at sample size n and
/// dimension d. The magnitudes are astronomically large for any usable n, so
/// they are reported (as exponents and base-10 logarithms), never
/// instantiated; `infeasible` flags log10(A) > 12.
struct TheoryReport {
  int d = 0;
  double n = 0;
  double a_exponent = 0;       // exponent of n in A
  double log10_a = 0;
  double b_inn_exponent = 0;   // 10 d^3 / (144 d^3 + 2)
  double b_out_exponent = 0;   // 11 d^3 / (144 d^3 + 2)
  double eta_exponent = 0;     // -103 d^3 / (144 d^3 + 2) - a_exponent
  double log10_eta_max = 0;
  double log10_iterations = 0; // T = 1/eta
  double rate_exponent = 0;    // -1 / (288 d^3 + 4)
  bool infeasible = false;

  std::string to_json() const;
};

TheoryReport theoretical_hyperparams(double n, int d);

}  // namespace ritz
