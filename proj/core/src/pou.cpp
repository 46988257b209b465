#include "ritz/pou.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ritz/io.hpp"
#include "ritz/rng.hpp"

namespace ritz {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

/// Iterates multi-indices in {1..N}^d, row-major (last axis fastest).
struct CellIterator {
  int resolution;
  int dim;
  std::vector<int> index;
  bool done = false;

  CellIterator(int N, int d) : resolution(N), dim(d), index(d, 1) {}
  void advance() {
    for (int i = dim - 1; i >= 0; --i) {
      if (++index[i] <= resolution) return;
      index[i] = 1;
    }
    done = true;
  }
};

long cell_count(int N, int d) {
  long c = 1;
  for (int i = 0; i < d; ++i) c *= N;
  return c;
}

long cell_ordinal(const std::vector<int>& j, int N) {
  long ord = 0;
  for (int v : j) ord = ord * N + (v - 1);
  return ord;
}

}  // namespace

double pou_alpha(int resolution, int smoothness, double accuracy) {
  if (resolution < 1) throw std::invalid_argument("resolution N must be >= 1");
  if (smoothness < 1) {
    throw std::invalid_argument("alpha needs k >= 1: (2k)^{k+1} degenerates at k = 0");
  }
  if (!(accuracy > 0.0 && accuracy < 0.25)) {
    throw std::invalid_argument("accuracy eps must lie in (0, 1/4)");
  }
  const double N = resolution;
  const double k = smoothness;
  const double numerator = std::pow(2.0 * k, k + 1.0) * std::pow(N * k, k);
  return N * std::log(numerator / (std::exp(k) * accuracy));
}

PouConfig PouConfig::make(int resolution, int smoothness, double accuracy) {
  if (resolution < 2) throw std::invalid_argument("resolution N must be >= 2");
  PouConfig cfg;
  cfg.resolution = resolution;
  cfg.smoothness = smoothness;
  cfg.accuracy = accuracy;
  cfg.alpha = pou_alpha(resolution, smoothness, accuracy);
  return cfg;
}

double pou_phi(int j, const PouConfig& cfg, double y) {
  const int N = cfg.resolution;
  if (j < 1 || j > N) throw std::invalid_argument("bump index out of 1..N");
  const double a = cfg.alpha;
  if (j == 1) {
    return 0.5 - 0.5 * std::tanh(a * (y - 1.0 / N));
  }
  if (j == N) {
    return 0.5 * std::tanh(a * (y - (N - 1.0) / N)) + 0.5;
  }
  return 0.5 * std::tanh(a * (y - (j - 1.0) / N)) - 0.5 * std::tanh(a * (y - static_cast<double>(j) / N));
}

double pou_bump(const std::vector<int>& j, const PouConfig& cfg, const Vector& x) {
  if (static_cast<int>(j.size()) != x.size()) {
    throw std::invalid_argument("bump multi-index does not match point dimension");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    prod *= pou_phi(j[i], cfg, x(static_cast<int>(i)));
  }
  return prod;
}

PouBoundsReport check_pou_bounds(const PouConfig& cfg, int dim, int samples_per_cell,
                                 std::uint64_t seed) {
  check_dim(dim);
  if (samples_per_cell < 1) throw std::invalid_argument("need at least one sample per cell");
  const int N = cfg.resolution;

  PouBoundsReport report;
  report.resolution = N;
  report.accuracy = cfg.accuracy;
  report.dim = dim;
  report.worst_global_sum = 1.0;

  Rng rng(seed);
  Vector x(dim);
  std::vector<double> phi_axis(static_cast<std::size_t>(N) * dim);

  for (CellIterator cell(N, dim); !cell.done; cell.advance()) {
    for (int s = 0; s < samples_per_cell; ++s) {
      for (int i = 0; i < dim; ++i) {
        const double lo = (cell.index[i] - 1.0) / N;
        x(i) = lo + rng.uniform01() / N;
      }
      // One tanh sweep per axis; every Phi below is a product lookup.
      for (int i = 0; i < dim; ++i) {
        for (int j = 1; j <= N; ++j) {
          phi_axis[static_cast<std::size_t>(i) * N + (j - 1)] = pou_phi(j, cfg, x(i));
        }
      }
      double near_sum = 0.0;
      double far_mass = 0.0;
      double global_sum = 0.0;
      for (CellIterator other(N, dim); !other.done; other.advance()) {
        double prod = 1.0;
        int dist = 0;
        for (int i = 0; i < dim; ++i) {
          prod *= phi_axis[static_cast<std::size_t>(i) * N + (other.index[i] - 1)];
          dist = std::max(dist, std::abs(other.index[i] - cell.index[i]));
        }
        global_sum += prod;
        if (dist <= 1) {
          near_sum += prod;
        } else {
          far_mass += prod;
          report.sup_far = std::max(report.sup_far, prod);
        }
      }
      const double deficit = std::abs(near_sum - 1.0);
      report.sup_deficit = std::max(report.sup_deficit, deficit);
      report.max_consistency_gap =
          std::max(report.max_consistency_gap, std::abs(deficit - far_mass));
      if (std::abs(global_sum - 1.0) > std::abs(report.worst_global_sum - 1.0)) {
        report.worst_global_sum = global_sum;
      }
    }
  }
  report.deficit_ok = report.sup_deficit <= dim * cfg.accuracy;
  report.far_ok = report.sup_far <= cfg.accuracy;
  return report;
}

void write_pou_report_csv(const std::vector<PouBoundsReport>& reports,
                          const std::string& path) {
  std::vector<std::string> lines;
  lines.push_back("# schema=1");
  lines.push_back("N,eps,d,sup_deficit,sup_far,bound_ok");
  for (const auto& r : reports) {
    lines.push_back(std::to_string(r.resolution) + "," + format_double(r.accuracy) +
                    "," + std::to_string(r.dim) + "," + format_double(r.sup_deficit) +
                    "," + format_double(r.sup_far) + "," + (r.ok() ? "1" : "0"));
  }
  write_text_file(path, lines);
}

int polynomial_coefficient_count(int degree, int d) {
  // binom(degree + d, d)
  long long r = 1;
  for (int i = 1; i <= d; ++i) r = r * (degree + i) / i;
  return static_cast<int>(r);
}

namespace {

void enumerate_powers(int degree, int d, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == d) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int v : current) used += v;
  for (int p = 0; p <= degree - used; ++p) {
    current.push_back(p);
    enumerate_powers(degree, d, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> monomial_powers(int degree, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_powers(degree, d, current, out);
  return out;
}

double monomial(const std::vector<int>& powers, const Vector& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    for (int p = 0; p < powers[i]; ++p) v *= x(static_cast<int>(i));
  }
  return v;
}

}  // namespace

double LocalFit::evaluate(const Vector& x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) v += coeffs[k] * monomial(powers[k], x);
  return v;
}

LocalFit local_poly_fit(const ScalarField& f, const std::vector<int>& cell, int resolution,
                        int dim, int degree, int grid_per_axis) {
  check_dim(dim);
  if (static_cast<int>(cell.size()) != dim) {
    throw std::invalid_argument("cell multi-index does not match dimension");
  }
  for (int v : cell) {
    if (v < 1 || v > resolution) throw std::invalid_argument("cell index out of 1..N");
  }
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");

  LocalFit fit;
  fit.cell = cell;
  fit.powers = monomial_powers(degree, dim);
  const int n_coeff = static_cast<int>(fit.powers.size());
  if (grid_per_axis == 0) grid_per_axis = 4 * n_coeff;

  long rows = 1;
  for (int i = 0; i < dim; ++i) rows *= grid_per_axis;
  if (rows < n_coeff) {
    throw std::invalid_argument("fit grid smaller than the coefficient count");
  }

  // Tensor grid over J_cell = prod ((j_i-2)/N, (j_i+1)/N) clipped to (0,1)^d.
  std::vector<double> lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    lo[i] = std::max(0.0, (cell[i] - 2.0) / resolution);
    hi[i] = std::min(1.0, (cell[i] + 1.0) / resolution);
  }
  Matrix design(rows, n_coeff);
  Vector target(rows);
  Vector x(dim);
  std::vector<int> grid_index(dim, 0);
  for (long r = 0; r < rows; ++r) {
    long rem = r;
    for (int i = dim - 1; i >= 0; --i) {
      grid_index[i] = static_cast<int>(rem % grid_per_axis);
      rem /= grid_per_axis;
    }
    for (int i = 0; i < dim; ++i) {
      const double t = (grid_index[i] + 0.5) / grid_per_axis;
      x(i) = lo[i] + t * (hi[i] - lo[i]);
    }
    for (int k = 0; k < n_coeff; ++k) design(r, k) = monomial(fit.powers[k], x);
    target(r) = f(x);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < n_coeff) {
    throw std::runtime_error("rank-deficient design in local polynomial fit");
  }
  const Vector coeffs = qr.solve(target);
  fit.coeffs.assign(coeffs.data(), coeffs.data() + coeffs.size());
  return fit;
}

LocalizedApproximant::LocalizedApproximant(PouConfig cfg, int dim,
                                           std::vector<LocalFit> fits)
    : cfg_(cfg), dim_(dim), fits_(std::move(fits)) {}

double LocalizedApproximant::operator()(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  const int N = cfg_.resolution;
  std::vector<double> phi_axis(static_cast<std::size_t>(N) * dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 1; j <= N; ++j) {
      phi_axis[static_cast<std::size_t>(i) * N + (j - 1)] = pou_phi(j, cfg_, x(i));
    }
  }
  double acc = 0.0;
  for (const auto& fit : fits_) {
    double bump = 1.0;
    for (int i = 0; i < dim_; ++i) {
      bump *= phi_axis[static_cast<std::size_t>(i) * N + (fit.cell[i] - 1)];
    }
    if (bump != 0.0) acc += bump * fit.evaluate(x);
  }
  return acc;
}

LocalizedApproximant assemble_localized_approximant(const PouConfig& cfg, int dim,
                                                    std::vector<LocalFit> fits) {
  check_dim(dim);
  const long expected = cell_count(cfg.resolution, dim);
  if (static_cast<long>(fits.size()) != expected) {
    throw std::invalid_argument("fit list does not cover every cell");
  }
  std::vector<char> seen(expected, 0);
  for (const auto& fit : fits) {
    if (static_cast<int>(fit.cell.size()) != dim) {
      throw std::invalid_argument("fit cell dimension mismatch");
    }
    seen[cell_ordinal(fit.cell, cfg.resolution)] = 1;
  }
  for (char c : seen) {
    if (!c) throw std::invalid_argument("fit list misses a cell");
  }
  std::sort(fits.begin(), fits.end(), [&](const LocalFit& a, const LocalFit& b) {
    return cell_ordinal(a.cell, cfg.resolution) < cell_ordinal(b.cell, cfg.resolution);
  });
  return LocalizedApproximant(cfg, dim, std::move(fits));
}

LocalizedApproximant assemble_localized_approximant(const ScalarField& f,
                                                    const PouConfig& cfg, int dim,
                                                    int degree, int grid_per_axis) {
  check_dim(dim);
  std::vector<LocalFit> fits;
  fits.reserve(cell_count(cfg.resolution, dim));
  for (CellIterator cell(cfg.resolution, dim); !cell.done; cell.advance()) {
    fits.push_back(local_poly_fit(f, cell.index, cfg.resolution, dim, degree, grid_per_axis));
  }
  return assemble_localized_approximant(cfg, dim, std::move(fits));
}

}  // namespace ritz
