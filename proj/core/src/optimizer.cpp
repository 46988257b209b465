#include "ritz/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ritz/io.hpp"

namespace ritz {

namespace {

constexpr double kGuardTol = 1e-10;

void check_compatible(const NetParams& params, const ProjectionSpec& spec) {
  if (spec.inner_centers.subnet_count() != params.subnet_count() ||
      spec.inner_centers.dims.d != params.dims.d ||
      spec.inner_centers.dims.m1 != params.dims.m1 ||
      spec.inner_centers.dims.m2 != params.dims.m2) {
    throw std::invalid_argument("projection centers do not match the network shape");
  }
}

// Pulls one inner block back onto the Frobenius ball around its center.
// Returns true when the block was outside.
template <typename Block>
bool project_inner_block(Block& block, const Block& center, double radius) {
  const double dist = (block - center).norm();
  if (dist <= radius) return false;
  block = center + (radius / dist) * (block - center);
  return true;
}

std::vector<double> collect_outer(const NetParams& params) {
  std::vector<double> v;
  v.reserve(params.subnets.size() * (params.dims.m2 + 1));
  for (const auto& s : params.subnets) {
    for (int i = 0; i < s.W3.size(); ++i) v.push_back(s.W3(i));
    v.push_back(s.b3);
  }
  return v;
}

void scatter_outer(NetParams& params, const std::vector<double>& v) {
  std::size_t k = 0;
  for (auto& s : params.subnets) {
    for (int i = 0; i < s.W3.size(); ++i) s.W3(i) = v[k++];
    s.b3 = v[k++];
  }
}

}  // namespace

void ProjectionSpec::validate() const {
  if (inner_radius < 0.0 || outer_budget < 0.0) {
    throw std::invalid_argument("projection radius and budget must be nonnegative");
  }
  inner_centers.validate();
}

void TrainConfig::validate() const {
  if (eta < 0.0 || !std::isfinite(eta)) throw std::invalid_argument("eta must be finite and >= 0");
  if (iterations < 1) throw std::invalid_argument("iteration count must be >= 1");
  if (subnet_count < 1) throw std::invalid_argument("subnet count must be >= 1");
  if (mode == TrainMode::TheoryReport) {
    if (eta <= 0.0 || iterations != static_cast<int>(std::llround(1.0 / eta))) {
      throw std::invalid_argument("theory-report mode requires T == round(1/eta)");
    }
  }
}

NetParams init_params(const TrainConfig& cfg, NetDims dims) {
  if (cfg.init_bound <= 0.0) throw std::invalid_argument("init_bound must be positive");
  Rng rng(cfg.seed);
  NetParams p = NetParams::zeros(cfg.subnet_count, dims);
  for (auto& s : p.subnets) {
    for (int i = 0; i < s.W1.rows(); ++i)
      for (int j = 0; j < s.W1.cols(); ++j) s.W1(i, j) = rng.symmetric(cfg.init_bound);
    for (int i = 0; i < s.b1.size(); ++i) s.b1(i) = rng.symmetric(cfg.init_bound);
    for (int i = 0; i < s.W2.rows(); ++i)
      for (int j = 0; j < s.W2.cols(); ++j) s.W2(i, j) = rng.symmetric(cfg.init_bound);
    for (int i = 0; i < s.b2.size(); ++i) s.b2(i) = rng.symmetric(cfg.init_bound);
    // outer layer starts at zero, so forward(init, x) == 0 everywhere
    s.W3.setZero();
    s.b3 = 0.0;
  }
  return p;
}

std::vector<double> project_l1(const std::vector<double>& v, double budget) {
  if (budget < 0.0) throw std::invalid_argument("l1 budget must be nonnegative");
  double l1 = 0.0;
  for (double x : v) l1 += std::abs(x);
  if (l1 <= budget) return v;

  // Sort-and-threshold: theta is the largest value for which the soft
  // threshold lands exactly on the budget (Duchi et al. style).
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    prefix += mag[k];
    const double candidate = (prefix - budget) / static_cast<double>(k + 1);
    if (k + 1 == mag.size() || mag[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  std::vector<double> out(v.size());
  double achieved = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = std::copysign(shrunk, v[i]);
    achieved += shrunk;
  }
  // The threshold lands on the budget up to rounding proportional to the
  // input scale; one multiplicative correction keeps the constraint within
  // budget-scale rounding instead.
  if (achieved > budget && achieved > 0.0) {
    const double correction = budget / achieved;
    for (double& w : out) w *= correction;
  }
  return out;
}

NetParams project(const NetParams& params, const ProjectionSpec& spec) {
  spec.validate();
  check_compatible(params, spec);
  NetParams out = params;
  for (std::size_t s = 0; s < out.subnets.size(); ++s) {
    const SubnetParams& c = spec.inner_centers.subnets[s];
    project_inner_block(out.subnets[s].W1, c.W1, spec.inner_radius);
    project_inner_block(out.subnets[s].b1, c.b1, spec.inner_radius);
    project_inner_block(out.subnets[s].W2, c.W2, spec.inner_radius);
    project_inner_block(out.subnets[s].b2, c.b2, spec.inner_radius);
  }
  const std::vector<double> outer = collect_outer(out);
  double l1 = 0.0;
  for (double x : outer) l1 += std::abs(x);
  if (l1 > spec.outer_budget) {
    scatter_outer(out, project_l1(outer, spec.outer_budget));
  }
  return out;
}

double constraint_violation(const NetParams& params, const ProjectionSpec& spec) {
  check_compatible(params, spec);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < params.subnets.size(); ++s) {
    const SubnetParams& p = params.subnets[s];
    const SubnetParams& c = spec.inner_centers.subnets[s];
    worst = std::max(worst, (p.W1 - c.W1).norm() - spec.inner_radius);
    worst = std::max(worst, (p.b1 - c.b1).norm() - spec.inner_radius);
    worst = std::max(worst, (p.W2 - c.W2).norm() - spec.inner_radius);
    worst = std::max(worst, (p.b2 - c.b2).norm() - spec.inner_radius);
  }
  const std::vector<double> outer = collect_outer(params);
  double l1 = 0.0;
  for (double x : outer) l1 += std::abs(x);
  worst = std::max(worst, l1 - spec.outer_budget);
  return worst;
}

bool TrainTrace::monotone(double tol) const {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].loss > records[i - 1].loss + tol) return false;
  }
  return true;
}

void TrainTrace::write_csv(const std::string& path) const {
  std::vector<std::string> lines;
  lines.push_back("# schema=1");
  lines.push_back("iter,loss,grad_norm,step_norm,guard_flag");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrainRecord& r = records[i];
    lines.push_back(std::to_string(i) + "," + format_double(r.loss) + "," +
                    format_double(r.grad_norm) + "," + format_double(r.step_norm) +
                    "," + (r.guard_violation ? "1" : "0"));
  }
  write_text_file(path, lines);
}

std::pair<NetParams, TrainTrace> train(const NetParams& params0,
                                       const ProblemSpec& prob,
                                       const SampleSet& samples,
                                       const TrainConfig& cfg,
                                       const ProjectionSpec& spec) {
  cfg.validate();
  NetParams params = project(params0, spec);
  TrainTrace trace;
  trace.records.reserve(cfg.iterations + 1);

  ParamGrad grad = NetParams::zeros(params.subnet_count(), params.dims);
  double loss = loss_value_and_gradient(params, prob, samples, grad).total;
  trace.records.push_back({loss, std::sqrt(grad.squared_norm()), 0.0, false, false});

  for (int t = 0; t < cfg.iterations; ++t) {
    if (!std::isfinite(loss) || !grad.all_finite()) {
      trace.aborted_nonfinite = true;
      return {params, trace};
    }
    NetParams candidate = params;
    candidate.axpy(-cfg.eta, grad);
    const bool projection_active = constraint_violation(candidate, spec) > 0.0;
    NetParams next = project(candidate, spec);

    NetParams step = next;
    step.axpy(-1.0, params);
    const double step_norm = std::sqrt(step.squared_norm());

    params = std::move(next);
    // projection rounding is proportional to the ball sizes
    const double membership_tol =
        1e-12 * std::max({1.0, spec.inner_radius, spec.outer_budget});
    if (constraint_violation(params, spec) > membership_tol) {
      throw std::logic_error("PGD iterate left the constraint set");
    }
    const double next_loss = loss_value_and_gradient(params, prob, samples, grad).total;
    const bool guard = next_loss > loss + kGuardTol;
    loss = next_loss;
    trace.records.push_back(
        {loss, std::sqrt(grad.squared_norm()), step_norm, projection_active, guard});
  }
  return {params, trace};
}

double find_monotone_step(const NetParams& params0, const ProblemSpec& prob,
                          const SampleSet& samples, const ProjectionSpec& spec,
                          double eta0, int trial_steps, int max_halvings) {
  if (eta0 <= 0.0) throw std::invalid_argument("starting step must be positive");
  double eta = eta0;
  for (int attempt = 0; attempt <= max_halvings; ++attempt) {
    TrainConfig cfg;
    cfg.eta = eta;
    cfg.iterations = trial_steps;
    cfg.subnet_count = params0.subnet_count();
    const auto result = train(params0, prob, samples, cfg, spec);
    if (!result.second.aborted_nonfinite && result.second.monotone(kGuardTol)) {
      return eta;
    }
    eta *= 0.5;
  }
  throw std::runtime_error("no monotone step found after halving limit");
}

std::string TheoryReport::to_json() const {
  std::ostringstream os;
  os << "{\"d\": " << d << ", \"n\": " << format_double(n)
     << ", \"a_exponent\": " << format_double(a_exponent)
     << ", \"log10_A\": " << format_double(log10_a)
     << ", \"b_inn_exponent\": " << format_double(b_inn_exponent)
     << ", \"b_out_exponent\": " << format_double(b_out_exponent)
     << ", \"eta_exponent\": " << format_double(eta_exponent)
     << ", \"log10_eta_max\": " << format_double(log10_eta_max)
     << ", \"log10_T\": " << format_double(log10_iterations)
     << ", \"rate_exponent\": " << format_double(rate_exponent)
     << ", \"infeasible\": " << (infeasible ? "true" : "false") << "}";
  return os.str();
}

TheoryReport theoretical_hyperparams(double n, int d) {
  if (n < 2.0) throw std::invalid_argument("sample size must be >= 2");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  TheoryReport r;
  r.d = d;
  r.n = n;
  const double d3 = std::pow(static_cast<double>(d), 3);
  const double d4 = std::pow(static_cast<double>(d), 4);
  const double log10n = std::log10(n);

  // A = n^{415 d^4 (d+3) 5^{d+2} / (288 d^3 + 4)}
  r.a_exponent = 415.0 * d4 * (d + 3.0) * std::pow(5.0, d + 2) / (288.0 * d3 + 4.0);
  r.log10_a = r.a_exponent * log10n;
  r.b_inn_exponent = 10.0 * d3 / (144.0 * d3 + 2.0);
  r.b_out_exponent = 11.0 * d3 / (144.0 * d3 + 2.0);
  // eta <= C n^{-103 d^3 / (144 d^3 + 2)} / A, T = 1/eta
  r.eta_exponent = -103.0 * d3 / (144.0 * d3 + 2.0) - r.a_exponent;
  r.log10_eta_max = r.eta_exponent * log10n;
  r.log10_iterations = -r.log10_eta_max;
  r.rate_exponent = -1.0 / (288.0 * d3 + 4.0);
  r.infeasible = r.log10_a > 12.0;
  return r;
}

}  // namespace ritz
