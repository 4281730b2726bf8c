#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "morrey/grid.hpp"

namespace morrey {

/// Seeded generator with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

enum class CorpusKind { PowerLaw, Trig, IndicatorSum, PlaneWave, Constant };

std::string_view to_string(CorpusKind kind) noexcept;
CorpusKind corpus_kind_from_string(std::string_view name);

struct CorpusSpec {
  std::string id;
  CorpusKind kind = CorpusKind::Constant;
  double lambda_f = 0.5;          // PowerLaw: f = d(x,0)^(-(n - lambda_f)/p)
  int band = 8;                   // Trig: wavenumbers |k_i| <= band
  int boxes = 4;                  // IndicatorSum
  std::array<int, 2> wave{3, 0};  // PlaneWave wavenumber
  double value = 1.0;             // Constant
  std::uint64_t seed = 0;         // Trig, IndicatorSum
};

struct CorpusFunction {
  std::string id;
  CorpusKind kind;
  Field field;
};

/// d(x,0)^(-(n - lambda_f)/p) with the origin sample replaced by the
/// p-mean of the profile over the origin cell (a disc of area h^2 in 2D).
Field power_law_field(const Grid& grid, double p, double lambda_f);

/// Real, mean-zero trigonometric polynomial with wavenumbers |k_i| <= band
/// and uniform random coefficients.
Field trig_field(const Grid& grid, int band, std::uint64_t seed);

/// Indicator of a union of random boxes with half-widths in [L/32, L/8].
Field indicator_sum_field(const Grid& grid, int boxes, std::uint64_t seed);

/// exp(i xi_k . x) for the integer wavenumber k.
Field plane_wave_field(const Grid& grid, std::array<int, 2> k);

/// PowerLaw at three lambda values, two Trig seeds, IndicatorSum, PlaneWave
/// and the Constant control.
std::vector<CorpusSpec> default_corpus(int dimension, double lambda, std::uint64_t seed);

CorpusFunction generate(const Grid& grid, double p, const CorpusSpec& spec);

}  // namespace morrey
