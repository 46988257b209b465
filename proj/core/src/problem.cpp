#include "ritz/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ritz/io.hpp"
#include "ritz/rng.hpp"

namespace ritz {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ball_volume(int d, double r) {
  // pi^{d/2} r^d / Gamma(d/2 + 1)
  return std::pow(kPi, 0.5 * d) * std::pow(r, d) / std::tgamma(0.5 * d + 1.0);
}

double ball_surface(int d, double r) { return d * ball_volume(d, r) / r; }

Vector gaussian_direction(int d, Rng& rng) {
  Vector v(d);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

}  // namespace

Domain Domain::hypercube(int d) {
  if (d < 1) throw std::invalid_argument("domain dimension must be >= 1");
  return Domain{DomainKind::Hypercube, d};
}

Domain Domain::ball(int d) {
  if (d < 1) throw std::invalid_argument("domain dimension must be >= 1");
  return Domain{DomainKind::Ball, d};
}

Vector Domain::center() const { return Vector::Constant(d, 0.5); }

double Domain::volume() const {
  switch (kind) {
    case DomainKind::Hypercube:
      return 1.0;
    case DomainKind::Ball:
      return ball_volume(d, ball_radius);
  }
  return 0.0;
}

double Domain::surface() const {
  switch (kind) {
    case DomainKind::Hypercube:
      return 2.0 * d;
    case DomainKind::Ball:
      return ball_surface(d, ball_radius);
  }
  return 0.0;
}

bool Domain::contains(const Vector& x) const {
  if (x.size() != d) return false;
  if (kind == DomainKind::Hypercube) {
    return (x.array() > 0.0).all() && (x.array() < 1.0).all();
  }
  return (x - center()).norm() < ball_radius;
}

Vector outward_normal(const Domain& domain, const Vector& y) {
  if (domain.kind == DomainKind::Ball) {
    const Vector r = y - domain.center();
    const double nrm = r.norm();
    if (nrm == 0.0) throw std::invalid_argument("point is the ball center");
    return r / nrm;
  }
  // Hypercube: the facet is the coordinate closest to {0, 1}.
  int best = -1;
  double best_gap = 1.0;
  double sign = 1.0;
  for (int i = 0; i < domain.d; ++i) {
    const double lo = std::abs(y(i));
    const double hi = std::abs(y(i) - 1.0);
    if (lo < best_gap) {
      best_gap = lo;
      best = i;
      sign = -1.0;
    }
    if (hi < best_gap) {
      best_gap = hi;
      best = i;
      sign = 1.0;
    }
  }
  if (best < 0 || best_gap > 1e-9) {
    throw std::invalid_argument("point is not on the hypercube boundary");
  }
  Vector n = Vector::Zero(domain.d);
  n(best) = sign;
  return n;
}

std::pair<double, double> measures(const Domain& domain) {
  return {domain.volume(), domain.surface()};
}

void ProblemSpec::validate() const {
  if (!w || !f || !g) throw std::invalid_argument("problem fields w, f, g must be set");
  if ((bc == BoundaryKind::Robin || bc == BoundaryKind::Dirichlet) && beta == 0.0) {
    throw std::invalid_argument("beta must be nonzero for the Robin penalty");
  }
}

Matrix sample_interior(const Domain& domain, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("interior sample count must be >= 1");
  Rng rng(seed);
  Matrix pts(n, domain.d);
  if (domain.kind == DomainKind::Hypercube) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < domain.d; ++j) pts(i, j) = rng.uniform01();
    return pts;
  }
  const Vector c = domain.center();
  for (int i = 0; i < n; ++i) {
    const Vector dir = gaussian_direction(domain.d, rng);
    const double radius =
        Domain::ball_radius * std::pow(rng.uniform01(), 1.0 / domain.d);
    pts.row(i) = (c + radius * dir).transpose();
  }
  return pts;
}

void sample_boundary(const Domain& domain, int m, std::uint64_t seed,
                     Matrix& points, Matrix& normals) {
  if (m < 1) throw std::invalid_argument("boundary sample count must be >= 1");
  Rng rng(seed);
  points.resize(m, domain.d);
  normals.resize(m, domain.d);
  if (domain.kind == DomainKind::Ball) {
    const Vector c = domain.center();
    for (int i = 0; i < m; ++i) {
      const Vector dir = gaussian_direction(domain.d, rng);
      points.row(i) = (c + Domain::ball_radius * dir).transpose();
      normals.row(i) = dir.transpose();
    }
    return;
  }
  // Hypercube: faces are equal-area, so pick one uniformly, then a uniform
  // point on it. d = 1 degenerates to a fair coin on the endpoints.
  for (int i = 0; i < m; ++i) {
    const std::uint64_t face = rng.below(2ull * domain.d);
    const int axis = static_cast<int>(face / 2);
    const bool upper = (face % 2) == 1;
    for (int j = 0; j < domain.d; ++j) {
      points(i, j) = (j == axis) ? (upper ? 1.0 : 0.0) : rng.uniform01();
    }
    normals.row(i).setZero();
    normals(i, axis) = upper ? 1.0 : -1.0;
  }
}

SampleSet make_sample_set(const Domain& domain, int n, int m, std::uint64_t seed) {
  SampleSet s;
  s.interior = sample_interior(domain, n, seed);
  // Distinct stream for the boundary so n and m can vary independently.
  sample_boundary(domain, m, seed ^ 0x9e3779b97f4a7c15ull, s.boundary, s.normals);
  s.interior_weight = domain.volume();
  s.boundary_weight = domain.surface();
  s.seed = seed;
  return s;
}

ProblemSpec manufacture(const Domain& domain, const ExactSolution& u,
                        ScalarField w, BoundaryKind bc, double beta) {
  if (!u.value || !u.gradient) {
    throw std::invalid_argument("manufacture needs value and gradient closures");
  }
  if ((bc == BoundaryKind::Robin || bc == BoundaryKind::Dirichlet) && beta == 0.0) {
    throw std::invalid_argument("beta must be nonzero for the Robin penalty");
  }
  ScalarField lap = u.laplacian;
  if (!lap) {
    const ScalarField value = u.value;
    const int d = domain.d;
    lap = [value, d](const Vector& x) {
      const double h = 1e-6;
      double acc = 0.0;
      Vector y = x;
      for (int i = 0; i < d; ++i) {
        const double xi = x(i);
        y(i) = xi + h;
        const double up = value(y);
        y(i) = xi - h;
        const double dn = value(y);
        y(i) = xi;
        acc += (up - 2.0 * value(x) + dn) / (h * h);
      }
      return acc;
    };
  }

  ProblemSpec prob;
  prob.bc = bc;
  prob.beta = beta;
  prob.domain = domain;
  prob.w = w;
  const ScalarField uval = u.value;
  const VectorField ugrad = u.gradient;
  prob.f = [lap, w, uval](const Vector& x) { return -lap(x) + w(x) * uval(x); };
  switch (bc) {
    case BoundaryKind::Dirichlet:
      prob.g = [](const Vector&) { return 0.0; };
      break;
    case BoundaryKind::Neumann:
      prob.g = [domain, ugrad](const Vector& y) {
        return ugrad(y).dot(outward_normal(domain, y));
      };
      break;
    case BoundaryKind::Robin:
      prob.g = [domain, ugrad, uval, beta](const Vector& y) {
        return uval(y) + beta * ugrad(y).dot(outward_normal(domain, y));
      };
      break;
  }
  ExactSolution exact = u;
  exact.laplacian = lap;
  prob.exact = exact;
  return prob;
}

double Solution1d::value(double x) const {
  return particular + c1 * std::exp(root * x) + c2 * std::exp(-root * x);
}

double Solution1d::derivative(double x) const {
  return root * (c1 * std::exp(root * x) - c2 * std::exp(-root * x));
}

ExactSolution Solution1d::as_exact() const {
  const Solution1d self = *this;
  ExactSolution e;
  e.value = [self](const Vector& x) { return self.value(x(0)); };
  e.gradient = [self](const Vector& x) {
    Vector g(1);
    g(0) = self.derivative(x(0));
    return g;
  };
  e.laplacian = [self](const Vector& x) {
    const double r = self.root;
    return r * r * (self.c1 * std::exp(r * x(0)) + self.c2 * std::exp(-r * x(0)));
  };
  return e;
}

namespace {

Solution1d solve_two_point(double fconst, double wconst, double a11, double a12,
                           double a21, double a22, double rhs) {
  Solution1d sol;
  sol.root = std::sqrt(wconst);
  sol.particular = fconst / wconst;
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21),
                                 std::abs(a22), 1.0});
  if (std::abs(det) < 1e-14 * scale * scale) {
    throw std::runtime_error("singular boundary system for the 1d solution");
  }
  sol.c1 = rhs * (a22 - a12) / det;
  sol.c2 = rhs * (a11 - a21) / det;
  return sol;
}

}  // namespace

Solution1d exact_robin_1d(double fconst, double wconst, double beta) {
  if (wconst <= 0.0) throw std::invalid_argument("w must be positive");
  if (beta == 0.0) throw std::invalid_argument("beta must be nonzero");
  const double r = std::sqrt(wconst);
  // u + beta du/dn = 0 at x in {0,1}; outward normals are -1 and +1:
  //   (1 - beta r) c1 + (1 + beta r) c2 = -f/w
  //   (1 + beta r) e^r c1 + (1 - beta r) e^{-r} c2 = -f/w
  const double a11 = 1.0 - beta * r;
  const double a12 = 1.0 + beta * r;
  const double a21 = (1.0 + beta * r) * std::exp(r);
  const double a22 = (1.0 - beta * r) * std::exp(-r);
  const double rhs = -fconst / wconst;
  return solve_two_point(fconst, wconst, a11, a12, a21, a22, rhs);
}

Solution1d exact_dirichlet_1d(double fconst, double wconst) {
  if (wconst <= 0.0) throw std::invalid_argument("w must be positive");
  const double r = std::sqrt(wconst);
  const double rhs = -fconst / wconst;
  return solve_two_point(fconst, wconst, 1.0, 1.0, std::exp(r), std::exp(-r), rhs);
}

void write_samples_csv(const SampleSet& samples, const std::string& path) {
  std::vector<std::string> lines;
  const int d = static_cast<int>(samples.interior.cols());
  std::ostringstream head;
  head << "# schema=1 d=" << d << " volume=" << format_double(samples.interior_weight)
       << " surface=" << format_double(samples.boundary_weight)
       << " seed=" << samples.seed;
  lines.push_back(head.str());
  std::string header = "kind";
  for (int j = 1; j <= d; ++j) header += ",x_" + std::to_string(j);
  for (int j = 1; j <= d; ++j) header += ",n_" + std::to_string(j);
  lines.push_back(header);
  for (int i = 0; i < samples.n(); ++i) {
    std::string row = "interior";
    for (int j = 0; j < d; ++j) row += "," + format_double(samples.interior(i, j));
    for (int j = 0; j < d; ++j) row += ",0";
    lines.push_back(row);
  }
  for (int i = 0; i < samples.m(); ++i) {
    std::string row = "boundary";
    for (int j = 0; j < d; ++j) row += "," + format_double(samples.boundary(i, j));
    for (int j = 0; j < d; ++j) row += "," + format_double(samples.normals(i, j));
    lines.push_back(row);
  }
  write_text_file(path, lines);
}

SampleSet read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema=1", 0) != 0) {
    throw std::runtime_error("sample CSV missing '# schema=1' header: " + path);
  }
  SampleSet s;
  int d = 0;
  {
    std::istringstream head(line.substr(1));
    std::string tok;
    while (head >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "d") d = std::stoi(val);
      if (key == "volume") s.interior_weight = std::stod(val);
      if (key == "surface") s.boundary_weight = std::stod(val);
      if (key == "seed") s.seed = std::stoull(val);
    }
  }
  if (d < 1) throw std::runtime_error("sample CSV header lacks dimension: " + path);
  if (!std::getline(in, line)) throw std::runtime_error("sample CSV truncated: " + path);

  std::vector<Vector> interior;
  std::vector<Vector> boundary;
  std::vector<Vector> normals;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string kind;
    std::getline(row, kind, ',');
    Vector x(d), nrm(d);
    std::string cell;
    for (int j = 0; j < d; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("sample CSV short row at line " + std::to_string(lineno));
      }
      x(j) = std::stod(cell);
    }
    for (int j = 0; j < d; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("sample CSV short row at line " + std::to_string(lineno));
      }
      nrm(j) = std::stod(cell);
    }
    if (kind == "interior") {
      interior.push_back(x);
    } else if (kind == "boundary") {
      boundary.push_back(x);
      normals.push_back(nrm);
    } else {
      throw std::runtime_error("sample CSV unknown kind '" + kind + "' at line " +
                               std::to_string(lineno));
    }
  }
  s.interior.resize(static_cast<int>(interior.size()), d);
  for (std::size_t i = 0; i < interior.size(); ++i)
    s.interior.row(static_cast<int>(i)) = interior[i].transpose();
  s.boundary.resize(static_cast<int>(boundary.size()), d);
  s.normals.resize(static_cast<int>(boundary.size()), d);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    s.boundary.row(static_cast<int>(i)) = boundary[i].transpose();
    s.normals.row(static_cast<int>(i)) = normals[i].transpose();
  }
  return s;
}

}  // namespace ritz
