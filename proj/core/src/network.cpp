#include "ritz/network.hpp"

#include <cmath>
#include <stdexcept>

namespace ritz {

namespace {

void check_dims(const NetDims& dims) {
  if (dims.d < 1 || dims.m1 < 1 || dims.m2 < 1) {
    throw std::invalid_argument("network dims must satisfy d, m1, m2 >= 1");
  }
}

void check_point(const NetParams& params, const Vector& x) {
  if (x.size() != params.dims.d) {
    throw std::invalid_argument("point dimension does not match network d");
  }
}

}  // namespace

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

NetDims default_dims(int d) {
  NetDims dims;
  dims.d = d;
  dims.m1 = 5 * d;
  dims.m2 = static_cast<int>(binomial(2 * d + 1, d + 1));
  return dims;
}

std::size_t NetParams::parameter_count() const {
  const std::size_t per =
      static_cast<std::size_t>(dims.m1) * dims.d + dims.m1 +
      static_cast<std::size_t>(dims.m2) * dims.m1 + dims.m2 + dims.m2 + 1;
  return per * subnets.size();
}

NetParams NetParams::zeros(int subnet_count, NetDims dims) {
  check_dims(dims);
  if (subnet_count < 1) throw std::invalid_argument("subnet count must be >= 1");
  NetParams p;
  p.dims = dims;
  p.subnets.resize(subnet_count);
  for (auto& s : p.subnets) {
    s.W1 = Matrix::Zero(dims.m1, dims.d);
    s.b1 = Vector::Zero(dims.m1);
    s.W2 = Matrix::Zero(dims.m2, dims.m1);
    s.b2 = Vector::Zero(dims.m2);
    s.W3 = RowVector::Zero(dims.m2);
    s.b3 = 0.0;
  }
  return p;
}

NetParams NetParams::random(int subnet_count, NetDims dims, double bound, Rng& rng) {
  NetParams p = zeros(subnet_count, dims);
  for (auto& s : p.subnets) {
    for (int i = 0; i < s.W1.rows(); ++i)
      for (int j = 0; j < s.W1.cols(); ++j) s.W1(i, j) = rng.symmetric(bound);
    for (int i = 0; i < s.b1.size(); ++i) s.b1(i) = rng.symmetric(bound);
    for (int i = 0; i < s.W2.rows(); ++i)
      for (int j = 0; j < s.W2.cols(); ++j) s.W2(i, j) = rng.symmetric(bound);
    for (int i = 0; i < s.b2.size(); ++i) s.b2(i) = rng.symmetric(bound);
    for (int i = 0; i < s.W3.size(); ++i) s.W3(i) = rng.symmetric(bound);
    s.b3 = rng.symmetric(bound);
  }
  return p;
}

bool NetParams::all_finite() const {
  for (const auto& s : subnets) {
    if (!s.W1.allFinite() || !s.b1.allFinite() || !s.W2.allFinite() ||
        !s.b2.allFinite() || !s.W3.allFinite() || !std::isfinite(s.b3)) {
      return false;
    }
  }
  return true;
}

void NetParams::validate() const {
  check_dims(dims);
  if (subnets.empty()) throw std::invalid_argument("network must have A >= 1 subnets");
  for (const auto& s : subnets) {
    if (s.W1.rows() != dims.m1 || s.W1.cols() != dims.d || s.b1.size() != dims.m1 ||
        s.W2.rows() != dims.m2 || s.W2.cols() != dims.m1 || s.b2.size() != dims.m2 ||
        s.W3.size() != dims.m2) {
      throw std::invalid_argument("subnet shapes inconsistent with network dims");
    }
  }
  if (!all_finite()) throw std::invalid_argument("network parameters must be finite");
}

void NetParams::axpy(double a, const NetParams& other) {
  for (std::size_t s = 0; s < subnets.size(); ++s) {
    subnets[s].W1 += a * other.subnets[s].W1;
    subnets[s].b1 += a * other.subnets[s].b1;
    subnets[s].W2 += a * other.subnets[s].W2;
    subnets[s].b2 += a * other.subnets[s].b2;
    subnets[s].W3 += a * other.subnets[s].W3;
    subnets[s].b3 += a * other.subnets[s].b3;
  }
}

void NetParams::scale(double a) {
  for (auto& s : subnets) {
    s.W1 *= a;
    s.b1 *= a;
    s.W2 *= a;
    s.b2 *= a;
    s.W3 *= a;
    s.b3 *= a;
  }
}

double NetParams::dot(const NetParams& other) const {
  double r = 0.0;
  for (std::size_t s = 0; s < subnets.size(); ++s) {
    r += subnets[s].W1.cwiseProduct(other.subnets[s].W1).sum();
    r += subnets[s].b1.dot(other.subnets[s].b1);
    r += subnets[s].W2.cwiseProduct(other.subnets[s].W2).sum();
    r += subnets[s].b2.dot(other.subnets[s].b2);
    r += subnets[s].W3.cwiseProduct(other.subnets[s].W3).sum();
    r += subnets[s].b3 * other.subnets[s].b3;
  }
  return r;
}

double NetParams::squared_norm() const { return dot(*this); }

std::vector<double> NetParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& s : subnets) {
    for (int i = 0; i < s.W1.rows(); ++i)
      for (int j = 0; j < s.W1.cols(); ++j) out.push_back(s.W1(i, j));
    for (int i = 0; i < s.b1.size(); ++i) out.push_back(s.b1(i));
    for (int i = 0; i < s.W2.rows(); ++i)
      for (int j = 0; j < s.W2.cols(); ++j) out.push_back(s.W2(i, j));
    for (int i = 0; i < s.b2.size(); ++i) out.push_back(s.b2(i));
    for (int i = 0; i < s.W3.size(); ++i) out.push_back(s.W3(i));
    out.push_back(s.b3);
  }
  return out;
}

NetParams NetParams::from_flat(const std::vector<double>& values, int subnet_count,
                               NetDims dims) {
  NetParams p = zeros(subnet_count, dims);
  if (values.size() != p.parameter_count()) {
    throw std::invalid_argument("flat parameter array has wrong length");
  }
  std::size_t k = 0;
  for (auto& s : p.subnets) {
    for (int i = 0; i < s.W1.rows(); ++i)
      for (int j = 0; j < s.W1.cols(); ++j) s.W1(i, j) = values[k++];
    for (int i = 0; i < s.b1.size(); ++i) s.b1(i) = values[k++];
    for (int i = 0; i < s.W2.rows(); ++i)
      for (int j = 0; j < s.W2.cols(); ++j) s.W2(i, j) = values[k++];
    for (int i = 0; i < s.b2.size(); ++i) s.b2(i) = values[k++];
    for (int i = 0; i < s.W3.size(); ++i) s.W3(i) = values[k++];
    s.b3 = values[k++];
  }
  return p;
}

namespace {

// Per-thread scratch for the gradient kernels. The loss loops hit these
// routines once per sample point, so avoiding heap churn dominates the cost
// of the small matvecs.
struct Scratch {
  Eigen::ArrayXd s1, s2, t1, t2;
  Vector u, pvec, v, a, q, r, chain;
};

Scratch& scratch() {
  static thread_local Scratch s;
  return s;
}

}  // namespace

void evaluate(const NetParams& params, const Vector& x, EvalTrace& trace) {
  check_point(params, x);
  const int A = params.subnet_count();
  const int d = params.dims.d;
  trace.subnets.resize(A);
  trace.value = 0.0;
  if (trace.grad_x.size() != d) trace.grad_x.resize(d);
  trace.grad_x.setZero();
  Scratch& w = scratch();

  for (int s = 0; s < A; ++s) {
    const SubnetParams& p = params.subnets[s];
    SubnetTrace& t = trace.subnets[s];
    t.f1org.noalias() = p.W1 * x;
    t.f1org += p.b1;
    t.f1 = t.f1org.array().tanh();
    t.f2org.noalias() = p.W2 * t.f1;
    t.f2org += p.b2;
    t.f2 = t.f2org.array().tanh();
    trace.value += p.W3.dot(t.f2) + p.b3;

    // grad_x += W1^T diag[sigma'(f1org)] W2^T diag[sigma'(f2org)] W3^T
    w.u = ((1.0 - t.f2.array().square()) * p.W3.transpose().array()).matrix();
    w.pvec.noalias() = p.W2.transpose() * w.u;
    w.v = ((1.0 - t.f1.array().square()) * w.pvec.array()).matrix();
    trace.grad_x.noalias() += p.W1.transpose() * w.v;
  }
}

double forward(const NetParams& params, const Vector& x) {
  check_point(params, x);
  double value = 0.0;
  for (const auto& p : params.subnets) {
    const Vector f1 = (p.W1 * x + p.b1).array().tanh();
    const Vector f2 = (p.W2 * f1 + p.b2).array().tanh();
    value += p.W3.dot(f2) + p.b3;
  }
  return value;
}

Vector grad_x(const NetParams& params, const Vector& x) {
  EvalTrace trace;
  evaluate(params, x, trace);
  return trace.grad_x;
}

void accumulate_grad_params(const NetParams& params, const Vector& x,
                            const EvalTrace& trace, double coeff, ParamGrad& acc) {
  const int A = params.subnet_count();
  Scratch& w = scratch();
  for (int s = 0; s < A; ++s) {
    const SubnetParams& p = params.subnets[s];
    const SubnetTrace& t = trace.subnets[s];
    SubnetParams& g = acc.subnets[s];

    w.s1 = 1.0 - t.f1.array().square();
    w.s2 = 1.0 - t.f2.array().square();

    // grad W3 = (f2)^T, grad b3 = 1
    g.W3.noalias() += coeff * t.f2.transpose();
    g.b3 += coeff;

    // u = diag[sigma'(f2org)] W3^T
    w.u = (w.s2 * p.W3.transpose().array()).matrix();
    g.W2.noalias() += coeff * (w.u * t.f1.transpose());
    g.b2.noalias() += coeff * w.u;

    // v = diag[sigma'(f1org)] W2^T u
    w.pvec.noalias() = p.W2.transpose() * w.u;
    w.v = (w.s1 * w.pvec.array()).matrix();
    g.W1.noalias() += coeff * (w.v * x.transpose());
    g.b1.noalias() += coeff * w.v;
  }
}

void accumulate_grad_params_of_spatial(const NetParams& params, const Vector& x,
                                       const EvalTrace& trace, int axis,
                                       double coeff, ParamGrad& acc) {
  if (axis < 0 || axis >= params.dims.d) {
    throw std::invalid_argument("spatial axis out of range");
  }
  const int A = params.subnet_count();
  Scratch& w = scratch();
  for (int s = 0; s < A; ++s) {
    const SubnetParams& p = params.subnets[s];
    const SubnetTrace& t = trace.subnets[s];
    SubnetParams& g = acc.subnets[s];

    w.s1 = 1.0 - t.f1.array().square();
    w.s2 = 1.0 - t.f2.array().square();
    w.t1 = -2.0 * t.f1.array() * w.s1;
    w.t2 = -2.0 * t.f2.array() * w.s2;

    const auto c = p.W1.col(axis);                    // W^{1,axis}
    w.a = (w.s1 * c.array()).matrix();                // diag[s1] W^{1,axis}
    w.q.noalias() = p.W2 * w.a;                       // W2 diag[s1] W^{1,axis}
    w.u = (w.s2 * p.W3.transpose().array()).matrix();
    w.pvec.noalias() = p.W2.transpose() * w.u;        // W2^T diag[s2] W3^T
    w.r = (w.q.array() * w.t2 * p.W3.transpose().array()).matrix();

    // grad W3 = (W^{1,axis})^T diag[s1] W2^T diag[s2]; no W3 factor, b3 absent
    g.W3.noalias() += coeff * (w.q.array() * w.s2).matrix().transpose();

    // grad W2 = u a^T + (q . t2 . W3^T) f1^T
    g.W2.noalias() += coeff * (w.u * w.a.transpose());
    g.W2.noalias() += coeff * (w.r * t.f1.transpose());
    g.b2.noalias() += coeff * w.r;

    // grad W1: the explicit column term plus two chain terms carried by x^T
    w.v = (w.s1 * w.pvec.array()).matrix();
    w.chain.noalias() = p.W2.transpose() * w.r;
    w.chain = (w.t1 * c.array() * w.pvec.array()).matrix() +
              (w.s1 * w.chain.array()).matrix();
    g.W1.col(axis).noalias() += coeff * w.v;
    g.W1.noalias() += coeff * (w.chain * x.transpose());
    g.b1.noalias() += coeff * w.chain;
  }
}

ParamGrad grad_params(const NetParams& params, const Vector& x) {
  check_point(params, x);
  EvalTrace trace;
  evaluate(params, x, trace);
  ParamGrad g = NetParams::zeros(params.subnet_count(), params.dims);
  accumulate_grad_params(params, x, trace, 1.0, g);
  return g;
}

ParamGrad grad_params_of_spatial(const NetParams& params, const Vector& x, int axis) {
  check_point(params, x);
  EvalTrace trace;
  evaluate(params, x, trace);
  ParamGrad g = NetParams::zeros(params.subnet_count(), params.dims);
  accumulate_grad_params_of_spatial(params, x, trace, axis, 1.0, g);
  return g;
}

}  // namespace ritz
