#include "morrey/corpus.hpp"

#include <cmath>
#include <numbers>

#include "morrey/error.hpp"

namespace morrey {

std::string_view to_string(CorpusKind kind) noexcept {
  switch (kind) {
    case CorpusKind::PowerLaw: return "power_law";
    case CorpusKind::Trig: return "trig";
    case CorpusKind::IndicatorSum: return "indicator_sum";
    case CorpusKind::PlaneWave: return "plane_wave";
    case CorpusKind::Constant: return "constant";
  }
  return "unknown";
}

CorpusKind corpus_kind_from_string(std::string_view name) {
  for (auto k : {CorpusKind::PowerLaw, CorpusKind::Trig, CorpusKind::IndicatorSum, CorpusKind::PlaneWave,
                 CorpusKind::Constant})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown corpus kind '" + std::string(name) + "'");
}

Field power_law_field(const Grid& grid, double p, double lambda_f) {
  const int n = grid.dimension();
  if (!(p >= 1.0)) throw ParameterError("power law needs p >= 1");
  if (!(lambda_f > 0.0) || !(lambda_f < n)) throw ParameterError("power law lambda must lie in (0, n)");
  const double alpha = (n - lambda_f) / p;
  const double s = alpha * p;
  const double h = grid.spacing();
  double cell_mean;
  if (n == 1) {
    cell_mean = std::pow(0.5 * h, -s) / (1.0 - s);
  } else {
    const double rho = h / std::sqrt(std::numbers::pi);
    cell_mean = std::pow(rho, -s) / (1.0 - 0.5 * s);
  }
  const double origin_value = std::pow(cell_mean, 1.0 / p);
  const Index o = grid.origin();
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = grid.periodic_distance(grid.unflatten(i), o);
    v[i] = d == 0.0 ? origin_value : std::pow(d, -alpha);
  }
  return Field(grid, std::move(v));
}

Field trig_field(const Grid& grid, int band, std::uint64_t seed) {
  if (band < 1 || band >= grid.points_per_axis() / 2) throw ParameterError("trig band must lie in [1, N/2)");
  Rng rng(seed);
  struct Mode {
    int k0, k1;
    double a, b;
  };
  std::vector<Mode> modes;
  const int k1_max = grid.dimension() == 2 ? band : 0;
  for (int k0 = 0; k0 <= band; ++k0)
    for (int k1 = -k1_max; k1 <= k1_max; ++k1) {
      if (k0 == 0 && k1 <= 0) continue;  // one representative per +-k pair, no constant
      const double a = rng.uniform(-1.0, 1.0);
      const double b = rng.uniform(-1.0, 1.0);
      modes.push_back({k0, k1, a, b});
    }
  const double xi0 = grid.fundamental_frequency();
  return Field::from_function(grid, [&](const Point& x) {
    double s = 0.0;
    for (const Mode& m : modes) {
      const double phase = xi0 * (m.k0 * x[0] + m.k1 * x[1]);
      s += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    return cplx(s);
  });
}

Field indicator_sum_field(const Grid& grid, int boxes, std::uint64_t seed) {
  if (boxes < 1) throw ParameterError("indicator sum needs at least one box");
  const int n = grid.dimension();
  const double L = grid.domain_length();
  Rng rng(seed);
  struct Box {
    Point center, half;
  };
  std::vector<Box> list;
  for (int b = 0; b < boxes; ++b) {
    Box box{};
    for (int a = 0; a < n; ++a) {
      box.center[a] = rng.uniform(-0.5 * L, 0.5 * L);
      box.half[a] = rng.uniform(L / 32.0, L / 8.0);
    }
    list.push_back(box);
  }
  return Field::from_function(grid, [&](const Point& x) {
    for (const Box& box : list) {
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        double d = x[a] - box.center[a];
        d -= L * std::round(d / L);
        inside = inside && std::fabs(d) <= box.half[a];
      }
      if (inside) return cplx(1.0);
    }
    return cplx(0.0);
  });
}

Field plane_wave_field(const Grid& grid, std::array<int, 2> k) {
  const double xi0 = grid.fundamental_frequency();
  if (grid.dimension() == 1) k[1] = 0;
  return Field::from_function(grid, [&](const Point& x) {
    return std::polar(1.0, xi0 * (k[0] * x[0] + k[1] * x[1]));
  });
}

std::vector<CorpusSpec> default_corpus(int dimension, double lambda, std::uint64_t seed) {
  std::vector<CorpusSpec> c;
  for (int j = 0; j < 3; ++j) {
    CorpusSpec s;
    s.id = "power_law_" + std::to_string(j);
    s.kind = CorpusKind::PowerLaw;
    s.lambda_f = lambda + j * (dimension - lambda) / 3.0;
    c.push_back(s);
  }
  for (int j = 0; j < 2; ++j) {
    CorpusSpec s;
    s.id = "trig_" + std::to_string(j);
    s.kind = CorpusKind::Trig;
    s.seed = seed + j;
    c.push_back(s);
  }
  CorpusSpec boxes;
  boxes.id = "indicator_sum";
  boxes.kind = CorpusKind::IndicatorSum;
  boxes.seed = seed + 2;
  c.push_back(boxes);
  CorpusSpec wave;
  wave.id = "plane_wave";
  wave.kind = CorpusKind::PlaneWave;
  wave.wave = {3, dimension == 2 ? 1 : 0};
  c.push_back(wave);
  CorpusSpec constant;
  constant.id = "constant";
  constant.kind = CorpusKind::Constant;
  c.push_back(constant);
  return c;
}

CorpusFunction generate(const Grid& grid, double p, const CorpusSpec& spec) {
  switch (spec.kind) {
    case CorpusKind::PowerLaw: return {spec.id, spec.kind, power_law_field(grid, p, spec.lambda_f)};
    case CorpusKind::Trig: return {spec.id, spec.kind, trig_field(grid, spec.band, spec.seed)};
    case CorpusKind::IndicatorSum: return {spec.id, spec.kind, indicator_sum_field(grid, spec.boxes, spec.seed)};
    case CorpusKind::PlaneWave: return {spec.id, spec.kind, plane_wave_field(grid, spec.wave)};
    case CorpusKind::Constant: return {spec.id, spec.kind, Field::constant(grid, spec.value)};
  }
  throw ParameterError("unknown corpus kind");
}

}  // namespace morrey
