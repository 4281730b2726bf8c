#include "morrey/ball.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "morrey/error.hpp"

namespace morrey {
namespace {

void check_radius(const Grid& grid, double radius, double lower) {
  const double cap = 0.25 * grid.domain_length();
  if (!(radius > lower * (1.0 + 1e-12)) || radius > cap * (1.0 + 1e-12))
    throw ParameterError("ball radius " + std::to_string(radius) + " outside (" +
                         std::to_string(lower) + ", " + std::to_string(cap) + "]");
}

}  // namespace

BallStencil::BallStencil(const Grid& grid, double radius) : radius_(radius) {
  const double h = grid.spacing();
  const int reach = int(std::floor(radius / h * (1.0 + 1e-12)));
  const int rows = grid.dimension() == 2 ? reach : 0;
  for (int di = -rows; di <= rows; ++di) {
    int w = -1;
    for (int dj = 0; dj <= reach; ++dj) {
      const double d = h * std::sqrt(double(di) * di + double(dj) * dj);
      if (!within_radius(d, radius)) break;
      w = dj;
    }
    if (w < 0) continue;
    spans_.push_back({di, w});
    count_ += std::size_t(2 * w + 1);
  }
}

Ball make_ball(const Grid& grid, const Index& center, double radius) {
  check_radius(grid, radius, 0.0);
  BallStencil stencil(grid, radius);
  Ball ball;
  ball.center = grid.wrap(center);
  ball.radius = radius;
  ball.members.reserve(stencil.count());
  for (const auto& span : stencil.spans()) {
    for (int dj = -span.half_width; dj <= span.half_width; ++dj) {
      Index idx = grid.dimension() == 1 ? Index{ball.center[0] + dj, 0}
                                        : Index{ball.center[0] + span.row_offset, ball.center[1] + dj};
      ball.members.push_back(grid.flatten(grid.wrap(idx)));
    }
  }
  std::sort(ball.members.begin(), ball.members.end());
  ball.volume = double(ball.members.size()) * grid.cell_volume();
  return ball;
}

std::vector<Index> lattice_centers(const Grid& grid, int stride) {
  if (stride < 1) throw ParameterError("center stride must be >= 1");
  std::vector<Index> centers;
  const int N = grid.points_per_axis();
  if (grid.dimension() == 1) {
    for (int i = 0; i < N; i += stride) centers.push_back({i, 0});
  } else {
    for (int i = 0; i < N; i += stride)
      for (int j = 0; j < N; j += stride) centers.push_back({i, j});
  }
  return centers;
}

std::vector<Ball> ball_enumerate(const Grid& grid, std::span<const double> radii, int stride) {
  for (double r : radii) check_radius(grid, r, grid.spacing());
  return BallSet::lattice(grid, {radii.begin(), radii.end()}, stride).materialize();
}

std::vector<double> dyadic_radii(const Grid& grid) {
  std::vector<double> radii;
  const double cap = 0.25 * grid.domain_length() * (1.0 + 1e-12);
  for (double r = 2.0 * grid.spacing(); r <= cap; r *= 2.0) radii.push_back(r);
  return radii;
}

BallSet::BallSet(Grid grid, std::vector<Index> centers, std::vector<double> radii)
    : grid_(std::move(grid)), centers_(std::move(centers)), radii_(std::move(radii)) {
  if (radii_.empty()) throw ParameterError("ball set needs at least one radius");
  if (centers_.empty()) throw ParameterError("ball set needs at least one center");
  for (double r : radii_) check_radius(grid_, r, 0.0);
  for (Index& c : centers_) c = grid_.wrap(c);
}

BallSet BallSet::lattice(const Grid& grid, std::vector<double> radii, int stride) {
  return BallSet(grid, lattice_centers(grid, stride), std::move(radii));
}

BallSet BallSet::centered(const Grid& grid, std::vector<Index> centers, std::vector<double> radii) {
  return BallSet(grid, std::move(centers), std::move(radii));
}

std::vector<Ball> BallSet::materialize() const {
  std::vector<Ball> balls;
  balls.reserve(size());
  for (const Index& c : centers_)
    for (double r : radii_) balls.push_back(make_ball(grid_, c, r));
  return balls;
}

namespace {

void require_ball_on_grid(const Field& f, const Ball& ball) {
  const double expected = double(ball.members.size()) * f.grid().cell_volume();
  if (std::fabs(ball.volume - expected) > 1e-12 * expected ||
      (!ball.members.empty() && ball.members.back() >= f.size()))
    throw GridMismatch("ball does not belong to the field's grid");
}

}  // namespace

cplx ball_mean(const Field& f, const Ball& ball) {
  if (ball.members.empty()) throw InputError("empty ball");
  require_ball_on_grid(f, ball);
  cplx s = 0.0;
  for (std::size_t i : ball.members) {
    if (i >= f.size()) throw GridMismatch("ball does not belong to the field's grid");
    s += f[i];
  }
  return s / double(ball.members.size());
}

double ball_lp_deviation(const Field& f, const Ball& ball, cplx c, double p) {
  if (!(p >= 1.0)) throw ParameterError("ball deviation needs p >= 1");
  require_ball_on_grid(f, ball);
  double s = 0.0;
  for (std::size_t i : ball.members) {
    if (i >= f.size()) throw GridMismatch("ball does not belong to the field's grid");
    s += std::pow(std::abs(f[i] - c), p);
  }
  return s * f.grid().cell_volume();
}

double weighted_type_norm(const Field& f, double p, double beta) {
  if (!(p >= 1.0)) throw ParameterError("type norm needs p >= 1");
  if (!(beta > 0.0)) throw ParameterError("type norm needs beta > 0");
  const Grid& g = f.grid();
  const double exponent = g.dimension() + beta;
  const Point zero{0.0, 0.0};
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = g.periodic_distance(g.point(i), zero);
    s += std::pow(std::abs(f[i]), p) / std::pow(1.0 + d, exponent);
  }
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------

template <class T>
WindowSums<T>::WindowSums(const Grid& grid, std::span<const T> values)
    : n_(grid.dimension()), N_(grid.points_per_axis()) {
  if (values.size() != grid.size()) throw InputError("window sum input does not match grid");
  const int rows = n_ == 1 ? 1 : N_;
  prefix_.assign(std::size_t(rows) * (N_ + 1), T{});
  for (int r = 0; r < rows; ++r) {
    T* p = prefix_.data() + std::size_t(r) * (N_ + 1);
    const T* v = values.data() + std::size_t(r) * N_;
    for (int j = 0; j < N_; ++j) p[j + 1] = p[j] + v[j];
  }
}

template <class T>
T WindowSums<T>::row_range(int row, int lo, int hi) const {
  const T* p = prefix_.data() + std::size_t(row) * (N_ + 1);
  if (lo < 0) return (p[N_] - p[N_ + lo]) + p[hi + 1];
  if (hi >= N_) return (p[N_] - p[lo]) + p[hi + 1 - N_];
  return p[hi + 1] - p[lo];
}

template <class T>
T WindowSums<T>::ball_sum(const Index& center, const BallStencil& stencil) const {
  T total{};
  if (n_ == 1) {
    const int w = stencil.spans().front().half_width;
    return row_range(0, center[0] - w, center[0] + w);
  }
  for (const auto& span : stencil.spans()) {
    int row = (center[0] + span.row_offset) % N_;
    if (row < 0) row += N_;
    total += row_range(row, center[1] - span.half_width, center[1] + span.half_width);
  }
  return total;
}

template class WindowSums<double>;
template class WindowSums<cplx>;

}  // namespace morrey
