#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace morrey {

using cplx = std::complex<double>;

/// Multi-index of a grid point. The second entry is unused (zero) when n = 1.
using Index = std::array<int, 2>;

/// Physical coordinates of a point. The second entry is zero when n = 1.
using Point = std::array<double, 2>;

/// Periodic box [-L/2, L/2)^n sampled with N points per axis, n in {1, 2}.
///
/// Grid point i along an axis sits at -L/2 + i*h with h = L/N, so the origin
/// is the point with index N/2. Flat storage is row-major: the last axis is
/// contiguous.
class Grid {
 public:
  Grid(int dimension, int points_per_axis, double domain_length);

  int dimension() const noexcept { return n_; }
  int points_per_axis() const noexcept { return N_; }
  double domain_length() const noexcept { return L_; }
  double spacing() const noexcept { return h_; }
  /// h^n, the measure attached to one sample.
  double cell_volume() const noexcept { return cell_volume_; }
  /// N^n.
  std::size_t size() const noexcept { return size_; }

  double coordinate(int i) const noexcept { return -0.5 * L_ + i * h_; }
  Point point(const Index& idx) const noexcept;
  Point point(std::size_t flat) const noexcept { return point(unflatten(flat)); }

  Index unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const Index& idx) const noexcept;
  /// Wraps every component into [0, N).
  Index wrap(const Index& idx) const noexcept;
  Index origin() const noexcept;

  /// Minimum-image Euclidean distance on the torus.
  double periodic_distance(const Point& a, const Point& b) const noexcept;
  double periodic_distance(const Index& a, const Index& b) const noexcept;

  /// Signed integer wavenumber of FFT slot k along one axis, in (-N/2, N/2].
  int wavenumber(int k) const noexcept { return k <= N_ / 2 ? k : k - N_; }
  /// |xi| for the frequency stored at flat spectral slot `flat`.
  double frequency_magnitude(std::size_t flat) const noexcept;
  /// 2*pi/L, the smallest nonzero angular frequency.
  double fundamental_frequency() const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.N_ == b.N_ && a.L_ == b.L_;
  }

 private:
  int n_;
  int N_;
  double L_;
  double h_;
  double cell_volume_;
  std::size_t size_;
};

void require_same_grid(const Grid& a, const Grid& b);

/// Complex samples of a function on a Grid. Immutable after construction;
/// every sample is finite.
class Field {
 public:
  Field(Grid grid, std::vector<cplx> samples);

  static Field constant(const Grid& grid, cplx value);
  static Field from_function(const Grid& grid,
                             const std::function<cplx(const Point&)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  cplx operator[](std::size_t i) const noexcept { return samples_[i]; }
  cplx at(const Index& idx) const noexcept {
    return samples_[grid_.flatten(grid_.wrap(idx))];
  }
  std::size_t size() const noexcept { return samples_.size(); }

  double max_abs() const noexcept;
  /// Discrete integral sum(f) h^n.
  cplx integral() const noexcept;
  cplx mean() const noexcept;

 private:
  Grid grid_;
  std::vector<cplx> samples_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx alpha, const Field& f);

/// Discrete L^p norm (sum |f|^p h^n)^(1/p).
double lp_norm(const Field& f, double p);

/// Fourier-series coefficients c_k with f(x_j) = sum_k c_k exp(i xi_k (x_j - x_0)),
/// stored in FFT order. Parseval reads sum |f|^2 h^n = L^n sum |c_k|^2.
class SpectralField {
 public:
  SpectralField(Grid grid, std::vector<cplx> coefficients);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> coefficients() const noexcept { return coefficients_; }
  cplx operator[](std::size_t i) const noexcept { return coefficients_[i]; }
  std::size_t size() const noexcept { return coefficients_.size(); }

  /// Multiplies slot k by multiplier[k].
  SpectralField multiplied(std::span<const double> multiplier) const;

  /// L^n sum |c_k|^2.
  double parseval_energy() const noexcept;

 private:
  Grid grid_;
  std::vector<cplx> coefficients_;
};

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& F);

/// Bilinear pairing sum f*g h^n computed from coefficients:
/// L^n sum_k F_k G_{-k}.
cplx spectral_pairing(const SpectralField& F, const SpectralField& G);

}  // namespace morrey
