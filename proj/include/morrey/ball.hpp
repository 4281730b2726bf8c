#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "morrey/grid.hpp"

namespace morrey {

/// Closed periodic ball: every grid point within `radius` of the center.
struct Ball {
  Index center{};
  double radius = 0.0;
  std::vector<std::size_t> members;  // sorted flat indices
  double volume = 0.0;               // members.size() * h^n
};

/// Membership test shared by every ball construction. Distances are compared
/// with a 1e-12 relative slack so that lattice points exactly on the sphere
/// count as members regardless of rounding.
inline bool within_radius(double distance, double radius) noexcept {
  return distance <= radius * (1.0 + 1e-12);
}

/// Row decomposition of a ball centered at the origin: for each offset along
/// axis 0 the contiguous run [-half_width, half_width] along the last axis.
class BallStencil {
 public:
  struct Span {
    int row_offset;
    int half_width;
  };

  BallStencil(const Grid& grid, double radius);

  double radius() const noexcept { return radius_; }
  std::span<const Span> spans() const noexcept { return spans_; }
  std::size_t count() const noexcept { return count_; }

 private:
  double radius_;
  std::vector<Span> spans_;
  std::size_t count_ = 0;
};

/// radius must lie in (0, L/4].
Ball make_ball(const Grid& grid, const Index& center, double radius);

/// All balls with centers on the stride sub-lattice and each radius, ordered
/// lexicographically by center, then by radius as given. Radii must lie in
/// (h, L/4].
std::vector<Ball> ball_enumerate(const Grid& grid, std::span<const double> radii, int stride);

/// {2^j h} intersected with (h, L/4].
std::vector<double> dyadic_radii(const Grid& grid);

/// Centers on the stride sub-lattice, lexicographic.
std::vector<Index> lattice_centers(const Grid& grid, int stride);

/// A lazily described family of balls: centers x radii. Norm engines sweep
/// it without materializing member lists.
class BallSet {
 public:
  static BallSet lattice(const Grid& grid, std::vector<double> radii, int stride);
  static BallSet centered(const Grid& grid, std::vector<Index> centers, std::vector<double> radii);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Index> centers() const noexcept { return centers_; }
  std::span<const double> radii() const noexcept { return radii_; }
  std::size_t size() const noexcept { return centers_.size() * radii_.size(); }

  /// Same order as ball_enumerate.
  std::vector<Ball> materialize() const;

 private:
  BallSet(Grid grid, std::vector<Index> centers, std::vector<double> radii);

  Grid grid_;
  std::vector<Index> centers_;
  std::vector<double> radii_;
};

/// (1/count) sum_{x in B} f(x).
cplx ball_mean(const Field& f, const Ball& ball);

/// sum_{x in B} |f(x) - c|^p h^n.
double ball_lp_deviation(const Field& f, const Ball& ball, cplx c, double p);

/// (sum_x |f(x)|^p / (1 + d(x,0))^(n+beta) h^n)^(1/p).
double weighted_type_norm(const Field& f, double p, double beta);

/// Periodic prefix sums along the last axis, so that the sum of any value
/// array over a stencil-shaped ball costs one subtraction per row.
template <class T>
class WindowSums {
 public:
  WindowSums(const Grid& grid, std::span<const T> values);

  T ball_sum(const Index& center, const BallStencil& stencil) const;

 private:
  T row_range(int row, int lo, int hi) const;

  int n_;
  int N_;
  std::vector<T> prefix_;  // rows x (N + 1)
};

extern template class WindowSums<double>;
extern template class WindowSums<cplx>;

}  // namespace morrey
