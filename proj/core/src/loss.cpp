#include "ritz/loss.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ritz/io.hpp"

namespace ritz {

namespace {

void check_inputs(const NetParams& params, const ProblemSpec& prob,
                  const SampleSet& samples) {
  prob.validate();
  if (samples.n() < 1 || samples.m() < 1) {
    throw std::invalid_argument("sample set must contain interior and boundary points");
  }
  if (samples.interior.cols() != params.dims.d) {
    throw std::invalid_argument("sample dimension does not match network d");
  }
}

double check_w(double w, const Vector& x) {
  if (!(w > 0.0)) {
    std::ostringstream msg;
    msg << "coefficient w must be positive; got " << w << " at x(0)=" << x(0);
    throw std::invalid_argument(msg.str());
  }
  return w;
}

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count > 0 ? sum / count : 0.0; }
  // standard error of the mean from the sample variance
  double stderr_mean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

// One pass over the samples computing the loss breakdown, and the gradient
// too when `grad` is non-null. Keeping a single code path makes the separate
// and fused entry points bit-identical.
LossBreakdown loss_impl(const NetParams& params, const ProblemSpec& prob,
                        const SampleSet& samples, bool neumann, ParamGrad* grad) {
  check_inputs(params, prob, samples);
  const double interior_scale = samples.interior_weight / samples.n();
  const double beta = prob.beta;
  const double boundary_scale =
      neumann ? samples.boundary_weight / samples.m()
              : samples.boundary_weight / (beta * samples.m());

  LossBreakdown out;
  MeanAccumulator interior_acc, boundary_acc;
  EvalTrace trace;
  Vector x(params.dims.d);

  for (int i = 0; i < samples.n(); ++i) {
    x = samples.interior.row(i).transpose();
    evaluate(params, x, trace);
    const double w = check_w(prob.w(x), x);
    const double fsrc = prob.f(x);
    const double grad_term = 0.5 * trace.grad_x.squaredNorm();
    const double mass_term = 0.5 * w * trace.value * trace.value;
    const double source_term = -fsrc * trace.value;
    out.grad_energy += grad_term;
    out.mass += mass_term;
    out.source += source_term;
    interior_acc.add(grad_term + mass_term + source_term);
    if (grad) {
      // sum_j (d_j f_W) grad_W(d_j f_W) + (w f_W - f) grad_W f_W
      for (int axis = 0; axis < params.dims.d; ++axis) {
        const double c = interior_scale * trace.grad_x(axis);
        if (c != 0.0) accumulate_grad_params_of_spatial(params, x, trace, axis, c, *grad);
      }
      const double c = interior_scale * (w * trace.value - fsrc);
      accumulate_grad_params(params, x, trace, c, *grad);
    }
  }
  out.grad_energy *= interior_scale;
  out.mass *= interior_scale;
  out.source *= interior_scale;

  for (int j = 0; j < samples.m(); ++j) {
    x = samples.boundary.row(j).transpose();
    evaluate(params, x, trace);
    const double value = trace.value;
    const double g = prob.g(x);
    const double mass_term = neumann ? 0.0 : 0.5 * value * value;
    const double source_term = -g * value;
    out.bdry_mass += mass_term;
    out.bdry_source += source_term;
    boundary_acc.add(mass_term + source_term);
    if (grad) {
      // Robin: (f_W - g) grad_W f_W; Neumann: -g grad_W f_W
      const double c = neumann ? boundary_scale * (-g)
                               : boundary_scale * (value - g);
      if (c != 0.0) accumulate_grad_params(params, x, trace, c, *grad);
    }
  }
  out.bdry_mass *= boundary_scale;
  out.bdry_source *= boundary_scale;

  out.total = out.grad_energy + out.mass + out.source + out.bdry_mass + out.bdry_source;
  // Independent sample sets: variances of the two Monte Carlo sums add.
  const double se_i = samples.interior_weight * interior_acc.stderr_mean();
  const double se_b = (neumann ? samples.boundary_weight
                               : samples.boundary_weight / std::abs(beta)) *
                      boundary_acc.stderr_mean();
  out.total_stderr = std::sqrt(se_i * se_i + se_b * se_b);
  return out;
}

}  // namespace

std::string LossBreakdown::to_json() const {
  std::ostringstream os;
  os << "{\"total\": " << format_double(total)
     << ", \"grad_energy\": " << format_double(grad_energy)
     << ", \"mass\": " << format_double(mass)
     << ", \"source\": " << format_double(source)
     << ", \"bdry_mass\": " << format_double(bdry_mass)
     << ", \"bdry_source\": " << format_double(bdry_source) << "}";
  return os.str();
}

LossBreakdown discrete_loss_robin(const NetParams& params, const ProblemSpec& prob,
                                  const SampleSet& samples) {
  if (prob.bc == BoundaryKind::Neumann) {
    throw std::invalid_argument("Robin loss called on a Neumann problem");
  }
  return loss_impl(params, prob, samples, /*neumann=*/false, nullptr);
}

LossBreakdown discrete_loss_neumann(const NetParams& params, const ProblemSpec& prob,
                                    const SampleSet& samples) {
  if (prob.bc != BoundaryKind::Neumann) {
    throw std::invalid_argument("Neumann loss called on a non-Neumann problem");
  }
  return loss_impl(params, prob, samples, /*neumann=*/true, nullptr);
}

LossBreakdown discrete_loss(const NetParams& params, const ProblemSpec& prob,
                            const SampleSet& samples) {
  return prob.bc == BoundaryKind::Neumann
             ? discrete_loss_neumann(params, prob, samples)
             : discrete_loss_robin(params, prob, samples);
}

LossBreakdown loss_value_and_gradient(const NetParams& params, const ProblemSpec& prob,
                                      const SampleSet& samples, ParamGrad& grad) {
  grad = NetParams::zeros(params.subnet_count(), params.dims);
  return loss_impl(params, prob, samples, prob.bc == BoundaryKind::Neumann, &grad);
}

ParamGrad loss_gradient(const NetParams& params, const ProblemSpec& prob,
                        const SampleSet& samples) {
  ParamGrad grad = NetParams::zeros(params.subnet_count(), params.dims);
  loss_impl(params, prob, samples, prob.bc == BoundaryKind::Neumann, &grad);
  return grad;
}

EnergyExcess energy_excess(const NetParams& params, const ProblemSpec& prob,
                           const SampleSet& eval) {
  check_inputs(params, prob, eval);
  if (!prob.exact) {
    throw std::invalid_argument("energy_excess needs the exact solution attached");
  }
  if (prob.bc == BoundaryKind::Neumann) {
    throw std::invalid_argument("energy_excess is defined for the Robin penalty form");
  }
  const ExactSolution& exact = *prob.exact;
  const double interior_scale = eval.interior_weight / eval.n();
  const double boundary_scale = eval.boundary_weight / (prob.beta * eval.m());

  EnergyExcess out;
  MeanAccumulator lhs_i, lhs_b, rhs_i, rhs_b;
  EvalTrace trace;
  Vector x(params.dims.d);

  for (int i = 0; i < eval.n(); ++i) {
    x = eval.interior.row(i).transpose();
    evaluate(params, x, trace);
    const double w = check_w(prob.w(x), x);
    const double fsrc = prob.f(x);
    const double ustar = exact.value(x);
    const Vector gstar = exact.gradient(x);
    const double v = trace.value - ustar;
    const Vector gv = trace.grad_x - gstar;

    const double net_term = 0.5 * trace.grad_x.squaredNorm() +
                            0.5 * w * trace.value * trace.value - fsrc * trace.value;
    const double star_term =
        0.5 * gstar.squaredNorm() + 0.5 * w * ustar * ustar - fsrc * ustar;
    const double quad = 0.5 * gv.squaredNorm() + 0.5 * w * v * v;
    lhs_i.add(net_term - star_term);
    rhs_i.add(quad);
    // first-order expansion term a(u*, v) - F(v) at this sample
    out.cross += interior_scale * (gstar.dot(gv) + w * ustar * v - fsrc * v);
  }

  for (int j = 0; j < eval.m(); ++j) {
    x = eval.boundary.row(j).transpose();
    evaluate(params, x, trace);
    const double value = trace.value;
    const double g = prob.g(x);
    const double ustar = exact.value(x);
    const double v = value - ustar;

    const double net_term = 0.5 * value * value - g * value;
    const double star_term = 0.5 * ustar * ustar - g * ustar;
    const double quad = 0.5 * v * v;
    lhs_b.add(net_term - star_term);
    rhs_b.add(quad);
    out.cross += boundary_scale * (ustar * v - g * v);
  }

  out.lhs = eval.interior_weight * lhs_i.mean() +
            eval.boundary_weight / prob.beta * lhs_b.mean();
  out.rhs = eval.interior_weight * rhs_i.mean() +
            eval.boundary_weight / prob.beta * rhs_b.mean();
  const double lhs_se_b = eval.boundary_weight / std::abs(prob.beta) * lhs_b.stderr_mean();
  const double rhs_se_b = eval.boundary_weight / std::abs(prob.beta) * rhs_b.stderr_mean();
  const double lhs_se_i = eval.interior_weight * lhs_i.stderr_mean();
  const double rhs_se_i = eval.interior_weight * rhs_i.stderr_mean();
  out.lhs_stderr = std::sqrt(lhs_se_i * lhs_se_i + lhs_se_b * lhs_se_b);
  out.rhs_stderr = std::sqrt(rhs_se_i * rhs_se_i + rhs_se_b * rhs_se_b);
  return out;
}

}  // namespace ritz
