#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "ritz/linalg.hpp"

namespace ritz {

enum class DomainKind { Hypercube, Ball };
enum class BoundaryKind { Dirichlet, Neumann, Robin };

/// Sampling domain inside the ambient unit cube. The hypercube is (0,1)^d
/// itself; the ball is centered at (1/2,...,1/2) with radius 1/2 so it stays
/// inside the cube.
struct Domain {
  DomainKind kind = DomainKind::Hypercube;
  int d = 1;

  static Domain hypercube(int d);
  static Domain ball(int d);

  double volume() const;
  double surface() const;
  bool contains(const Vector& x) const;  // strict interior
  Vector center() const;
  static constexpr double ball_radius = 0.5;
};

/// Outward unit normal at a boundary point.
Vector outward_normal(const Domain& domain, const Vector& y);

/// Exact (volume, surface) measure pair of the domain.
std::pair<double, double> measures(const Domain& domain);

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;

struct ExactSolution {
  ScalarField value;
  VectorField gradient;
  ScalarField laplacian;  // may be empty; finite differences fill in then
};

struct ProblemSpec {
  BoundaryKind bc = BoundaryKind::Robin;
  double beta = 1.0;  // Robin penalty; must be nonzero for Robin/Dirichlet
  ScalarField w;      // reaction coefficient, >= c_w > 0 at sampled points
  ScalarField f;      // source
  ScalarField g;      // boundary datum (identically zero for Dirichlet)
  Domain domain;
  std::optional<ExactSolution> exact;

  void validate() const;
};

/// Monte Carlo quadrature points: interior points weighted by |Omega| and
/// boundary points with outward normals weighted by |dOmega|.
struct SampleSet {
  Matrix interior;  // n x d
  Matrix boundary;  // m x d
  Matrix normals;   // m x d
  double interior_weight = 0.0;
  double boundary_weight = 0.0;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(interior.rows()); }
  int m() const { return static_cast<int>(boundary.rows()); }
};

Matrix sample_interior(const Domain& domain, int n, std::uint64_t seed);
void sample_boundary(const Domain& domain, int m, std::uint64_t seed,
                     Matrix& points, Matrix& normals);
SampleSet make_sample_set(const Domain& domain, int n, int m, std::uint64_t seed);

/// Builds the problem whose exact solution is `u`: f := -lap(u) + w u and
/// g := 0 (Dirichlet), du/dn (Neumann), u + beta du/dn (Robin). When the
/// Laplacian closure is absent it is supplied by central differences with
/// h = 1e-6, so fields must be evaluable in that margin around the closure.
ProblemSpec manufacture(const Domain& domain, const ExactSolution& u,
                        ScalarField w, BoundaryKind bc, double beta = 0.0);

/// Closed-form solution of -u'' + w u = f on (0,1) with constant data and
/// homogeneous Robin (or Dirichlet) conditions:
///   u(x) = f/w + c1 e^{r x} + c2 e^{-r x},  r = sqrt(w).
struct Solution1d {
  double particular = 0.0;  // f / w
  double c1 = 0.0;
  double c2 = 0.0;
  double root = 1.0;  // sqrt(w)

  double value(double x) const;
  double derivative(double x) const;
  ExactSolution as_exact() const;
};

/// Robin conditions u + beta du/dn = 0 at x in {0,1} (outward normals -1, +1).
/// Throws std::runtime_error when the 2x2 boundary system is singular.
Solution1d exact_robin_1d(double fconst, double wconst, double beta);

/// Dirichlet conditions u(0) = u(1) = 0; the beta -> 0 limit oracle.
Solution1d exact_dirichlet_1d(double fconst, double wconst);

/// CSV export/import of a sample set. Columns: kind, x_1..x_d, n_1..n_d
/// (normals are zero-filled on interior rows); the header comment carries the
/// schema version, dimension, measure weights, and seed.
void write_samples_csv(const SampleSet& samples, const std::string& path);
SampleSet read_samples_csv(const std::string& path);

}  // namespace ritz
