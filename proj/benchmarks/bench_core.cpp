#include <benchmark/benchmark.h>

#include "ritz/loss.hpp"
#include "ritz/optimizer.hpp"
#include "ritz/pou.hpp"

namespace {

using namespace ritz;

ProblemSpec benchmark_problem() {
  ProblemSpec prob;
  prob.bc = BoundaryKind::Robin;
  prob.beta = 1.0;
  prob.domain = Domain::hypercube(1);
  prob.w = [](const Vector&) { return 1.0; };
  prob.f = [](const Vector&) { return 1.0; };
  prob.g = [](const Vector&) { return 0.0; };
  return prob;
}

void BM_Forward(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const NetParams p = NetParams::random(16, default_dims(d), 1.0, rng);
  Vector x = Vector::Constant(d, 0.4);
  EvalTrace trace;
  for (auto _ : state) {
    evaluate(p, x, trace);
    benchmark::DoNotOptimize(trace.value);
  }
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(2)->Arg(3);

void BM_GradParams(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const NetParams p = NetParams::random(16, default_dims(d), 1.0, rng);
  Vector x = Vector::Constant(d, 0.4);
  EvalTrace trace;
  evaluate(p, x, trace);
  ParamGrad acc = NetParams::zeros(16, p.dims);
  for (auto _ : state) {
    accumulate_grad_params(p, x, trace, 0.5, acc);
    benchmark::DoNotOptimize(acc.subnets[0].b3);
  }
}
BENCHMARK(BM_GradParams)->Arg(1)->Arg(2)->Arg(3);

void BM_GradSpatial(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const NetParams p = NetParams::random(16, default_dims(d), 1.0, rng);
  Vector x = Vector::Constant(d, 0.4);
  EvalTrace trace;
  evaluate(p, x, trace);
  ParamGrad acc = NetParams::zeros(16, p.dims);
  for (auto _ : state) {
    accumulate_grad_params_of_spatial(p, x, trace, 0, 0.5, acc);
    benchmark::DoNotOptimize(acc.subnets[0].W3);
  }
}
BENCHMARK(BM_GradSpatial)->Arg(1)->Arg(2)->Arg(3);

void BM_LossGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const ProblemSpec prob = benchmark_problem();
  const NetParams p = NetParams::random(16, default_dims(1), 1.0, rng);
  const SampleSet samples = make_sample_set(prob.domain, n, n, 7);
  ParamGrad grad = NetParams::zeros(16, p.dims);
  for (auto _ : state) {
    const LossBreakdown loss = loss_value_and_gradient(p, prob, samples, grad);
    benchmark::DoNotOptimize(loss.total);
  }
  state.SetItemsProcessed(state.iterations() * 2 * n);
}
BENCHMARK(BM_LossGradient)->Arg(256)->Arg(2048);

void BM_Project(benchmark::State& state) {
  Rng rng(1);
  const NetDims dims = default_dims(1);
  ProjectionSpec spec;
  spec.inner_centers = NetParams::random(16, dims, 1.0, rng);
  spec.inner_radius = 0.5;
  spec.outer_budget = 5.0;
  const NetParams z = NetParams::random(16, dims, 3.0, rng);
  for (auto _ : state) {
    const NetParams out = project(z, spec);
    benchmark::DoNotOptimize(out.subnets[0].b3);
  }
}
BENCHMARK(BM_Project);

void BM_PouBump(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const PouConfig cfg = PouConfig::make(N, 1, 0.01);
  Vector x(2);
  x << 0.37, 0.61;
  std::vector<int> j{N / 2, N / 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pou_bump(j, cfg, x));
  }
}
BENCHMARK(BM_PouBump)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
