#include "morrey/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "morrey/error.hpp"

namespace morrey {

Grid::Grid(int dimension, int points_per_axis, double domain_length)
    : n_(dimension), N_(points_per_axis), L_(domain_length) {
  if (n_ != 1 && n_ != 2)
    throw ParameterError("grid dimension must be 1 or 2, got " + std::to_string(n_));
  if (N_ < 8 || (N_ & (N_ - 1)) != 0)
    throw ParameterError("points per axis must be a power of two >= 8, got " +
                         std::to_string(N_));
  if (!(L_ > 0.0) || !std::isfinite(L_))
    throw ParameterError("domain length must be positive and finite");
  h_ = L_ / N_;
  cell_volume_ = n_ == 1 ? h_ : h_ * h_;
  size_ = n_ == 1 ? std::size_t(N_) : std::size_t(N_) * std::size_t(N_);
}

Point Grid::point(const Index& idx) const noexcept {
  return {coordinate(idx[0]), n_ == 2 ? coordinate(idx[1]) : 0.0};
}

Index Grid::unflatten(std::size_t flat) const noexcept {
  if (n_ == 1) return {int(flat), 0};
  return {int(flat / N_), int(flat % N_)};
}

std::size_t Grid::flatten(const Index& idx) const noexcept {
  if (n_ == 1) return std::size_t(idx[0]);
  return std::size_t(idx[0]) * N_ + std::size_t(idx[1]);
}

Index Grid::wrap(const Index& idx) const noexcept {
  auto w = [this](int i) {
    int r = i % N_;
    return r < 0 ? r + N_ : r;
  };
  return {w(idx[0]), n_ == 2 ? w(idx[1]) : 0};
}

Index Grid::origin() const noexcept { return {N_ / 2, n_ == 2 ? N_ / 2 : 0}; }

double Grid::periodic_distance(const Point& a, const Point& b) const noexcept {
  double sum = 0.0;
  for (int axis = 0; axis < n_; ++axis) {
    double d = std::fabs(a[axis] - b[axis]);
    d = std::fmod(d, L_);
    if (d > 0.5 * L_) d = L_ - d;
    sum += d * d;
  }
  return std::sqrt(sum);
}

double Grid::periodic_distance(const Index& a, const Index& b) const noexcept {
  double sum = 0.0;
  for (int axis = 0; axis < n_; ++axis) {
    int d = std::abs(a[axis] - b[axis]) % N_;
    if (d > N_ / 2) d = N_ - d;
    sum += double(d) * d;
  }
  return h_ * std::sqrt(sum);
}

double Grid::fundamental_frequency() const noexcept { return 2.0 * std::numbers::pi / L_; }

double Grid::frequency_magnitude(std::size_t flat) const noexcept {
  const Index k = unflatten(flat);
  double sum = 0.0;
  for (int axis = 0; axis < n_; ++axis) {
    const double w = wavenumber(k[axis]);
    sum += w * w;
  }
  return fundamental_frequency() * std::sqrt(sum);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

// ---------------------------------------------------------------------------

Field::Field(Grid grid, std::vector<cplx> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size())
    throw InputError("field has " + std::to_string(samples_.size()) + " samples, grid needs " +
                     std::to_string(grid_.size()));
  for (const cplx& v : samples_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InputError("field contains non-finite samples");
}

Field Field::constant(const Grid& grid, cplx value) {
  return Field(grid, std::vector<cplx>(grid.size(), value));
}

Field Field::from_function(const Grid& grid, const std::function<cplx(const Point&)>& fn) {
  std::vector<cplx> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = fn(grid.point(i));
  return Field(grid, std::move(s));
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (const cplx& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

cplx Field::integral() const noexcept {
  cplx s = 0.0;
  for (const cplx& v : samples_) s += v;
  return s * grid_.cell_volume();
}

cplx Field::mean() const noexcept { return integral() / std::pow(grid_.domain_length(), grid_.dimension()); }

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> s(a.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i];
  return Field(a.grid(), std::move(s));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> s(a.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] - b[i];
  return Field(a.grid(), std::move(s));
}

Field operator*(cplx alpha, const Field& f) {
  std::vector<cplx> s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = alpha * f[i];
  return Field(f.grid(), std::move(s));
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw ParameterError("L^p norm needs p >= 1");
  double s = 0.0;
  for (const cplx& v : f.samples()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid grid, std::vector<cplx> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size())
    throw InputError("spectral field size does not match grid");
}

SpectralField SpectralField::multiplied(std::span<const double> multiplier) const {
  if (multiplier.size() != coefficients_.size())
    throw InputError("multiplier length does not match spectral field");
  std::vector<cplx> c(coefficients_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coefficients_[k] * multiplier[k];
  return SpectralField(grid_, std::move(c));
}

double SpectralField::parseval_energy() const noexcept {
  double s = 0.0;
  for (const cplx& c : coefficients_) s += std::norm(c);
  return s * std::pow(grid_.domain_length(), grid_.dimension());
}

SpectralField forward_transform(const Field& f) {
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  const Grid& g = f.grid();
  detail::fft_inplace(data, g.dimension(), g.points_per_axis(), -1);
  const double scale = 1.0 / double(g.size());
  for (cplx& c : data) c *= scale;
  return SpectralField(g, std::move(data));
}

Field inverse_transform(const SpectralField& F) {
  std::vector<cplx> data(F.coefficients().begin(), F.coefficients().end());
  const Grid& g = F.grid();
  detail::fft_inplace(data, g.dimension(), g.points_per_axis(), +1);
  return Field(g, std::move(data));
}

cplx spectral_pairing(const SpectralField& F, const SpectralField& G) {
  require_same_grid(F.grid(), G.grid());
  const Grid& g = F.grid();
  const int N = g.points_per_axis();
  cplx s = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const Index idx = g.unflatten(k);
    const Index neg = g.wrap({N - idx[0], g.dimension() == 2 ? N - idx[1] : 0});
    s += F[k] * G[g.flatten(neg)];
  }
  return s * std::pow(g.domain_length(), g.dimension());
}

}  // namespace morrey
