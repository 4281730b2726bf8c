#include "morrey/experiments.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

#include <json.hpp>

#include "morrey/atoms.hpp"
#include "morrey/error.hpp"
#include "morrey/field_io.hpp"
#include "morrey/parallel.hpp"

namespace morrey {

using json = nlohmann::ordered_json;

namespace {

json index_json(const Index& x, int n) {
  return n == 1 ? json::array({x[0]}) : json::array({x[0], x[1]});
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// ---------------------------------------------------------------------------
// Seminorm battery shared by norms and equivalence.

struct FunctionNorms {
  std::string id;
  CorpusKind kind;
  std::vector<SeminormReport> reports;
  std::optional<double> mollifier_cap;  // origin sample of a power law

  const SeminormReport* find(SeminormKind k) const {
    for (const auto& r : reports)
      if (r.kind == k) return &r;
    return nullptr;
  }
};

struct Setup {
  Grid grid;
  GeneratorSpec gen;
  BallSet balls;
  LogTimeGrid tgrid;
  std::vector<double> t_set;
};

Setup make_setup(const ExperimentConfig& cfg) {
  const Grid g = cfg.grid();
  const GeneratorSpec gen = cfg.generator_spec();
  BallSet balls = cfg.balls(g);
  std::vector<double> t_set;
  for (double r : balls.radii()) t_set.push_back(std::pow(r, gen.order()));
  return Setup{g, gen, std::move(balls), cfg.time_grid(g), std::move(t_set)};
}

FunctionNorms compute_norms(const Setup& s, const ExperimentConfig& cfg, const CorpusSpec& spec) {
  const CorpusFunction fn = generate(s.grid, cfg.params.p, spec);
  FunctionNorms out{fn.id, fn.kind, {}, std::nullopt};
  const Field& f = fn.field;
  if (fn.kind == CorpusKind::PowerLaw) out.mollifier_cap = std::abs(f.at(s.grid.origin()));
  out.reports.push_back(classical_seminorm(f, cfg.params, s.balls));
  out.reports.push_back(semigroup_seminorm(f, cfg.params, s.gen, s.balls));
  out.reports.push_back(maximal_seminorm(f, cfg.params, s.gen, s.t_set, cfg.x_stride));
  if (s.gen.kind() == GeneratorKind::Poisson)
    out.reports.push_back(poisson_pointwise_seminorm(f, cfg.params, s.gen, s.t_set, cfg.x_stride));
  out.reports.push_back(square_function_seminorm(f, cfg.params, s.gen, s.balls, s.tgrid, SquareVariant::SquareFnL));
  out.reports.push_back(
      square_function_seminorm(f, cfg.params, s.gen, s.balls, s.tgrid, SquareVariant::SquareFnPoisson));
  if (cfg.params.p == 2.0) out.reports.push_back(carleson_tent_norm(f, cfg.params, s.gen, s.balls, s.tgrid));
  return out;
}

std::vector<FunctionNorms> compute_corpus(const Setup& s, const ExperimentConfig& cfg, int threads) {
  const auto specs = cfg.corpus_specs();
  std::vector<std::optional<FunctionNorms>> slots(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) { slots[i] = compute_norms(s, cfg, specs[i]); });
  std::vector<FunctionNorms> out;
  for (auto& v : slots) out.push_back(std::move(*v));
  return out;
}

double constant_scale(const ExperimentConfig& cfg, const std::string& id) {
  for (const auto& s : cfg.corpus_specs())
    if (s.id == id) return std::max(1.0, std::fabs(s.value));
  return 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------

RunResult cmd_norms(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Setup s = make_setup(cfg);
  const auto corpus = compute_corpus(s, cfg, resolve_threads(opt.threads));
  RunResult res;
  json reports = json::array();
  for (const FunctionNorms& fn : corpus) {
    for (const SeminormReport& r : fn.reports) {
      const std::string kind(to_string(r.kind));
      const std::string table_path = "tables/" + fn.id + "__" + kind + ".csv";
      res.outputs.add(table_path, seminorm_table(r, s.grid.dimension()).str());
      reports.push_back({{"function_id", fn.id},
                         {"kind", kind},
                         {"p", cfg.params.p},
                         {"lambda", cfg.params.lambda},
                         {"generator", s.gen.name()},
                         {"value", r.value},
                         {"witness", {{"center", index_json(r.witness.center, s.grid.dimension())},
                                      {"scale", r.witness.scale}}},
                         {"truncation_estimate", r.truncation_estimate},
                         {"table_path", table_path}});
      if (fn.mollifier_cap) reports.back()["mollifier_cap"] = *fn.mollifier_cap;
      if (!finite_nonneg(r.value)) res.failures.push_back("norms.finite:" + fn.id + ":" + kind);
      if (fn.kind == CorpusKind::Constant && r.value > 1e-10 * constant_scale(cfg, fn.id))
        res.failures.push_back("norms.constant_zero:" + fn.id + ":" + kind);
      res.log.push_back(fn.id + " " + kind + " " + format_double(r.value));
    }
  }
  json doc = {{"schema", "morrey.norms/1"},
              {"config", json::parse(config_to_json(cfg))},
              {"time_span", {{"K", s.tgrid.size()}, {"t_min", s.tgrid.t_min()}, {"t_max", s.tgrid.t_max()}}},
              {"reports", reports},
              {"failures", res.failures}};
  res.outputs.add("norms.json", dump(doc));
  return res;
}

// ---------------------------------------------------------------------------

namespace {

struct RatioDef {
  const char* id;
  SeminormKind num;
  SeminormKind den;
};

constexpr RatioDef kRatios[] = {
    {"semigroup/classical", SeminormKind::Semigroup, SeminormKind::Classical},
    {"maximal/semigroup", SeminormKind::Maximal, SeminormKind::Semigroup},
    {"squarefn_l/classical", SeminormKind::SquareFnL, SeminormKind::Classical},
    {"squarefn_poisson/classical", SeminormKind::SquareFnPoisson, SeminormKind::Classical},
    {"carleson_tent/classical", SeminormKind::CarlesonTent, SeminormKind::Classical},
};

}  // namespace

RunResult cmd_equivalence(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.corpus_specs().size() < 3) throw ConfigError("equivalence needs at least 3 corpus functions");
  ExperimentConfig fine = cfg;
  fine.points = cfg.points * 2;
  fine.stride = cfg.stride * 2;
  fine.x_stride = cfg.x_stride * 2;
  fine.radii = cfg.ball_radii(cfg.grid());
  fine.validate();
  const ExperimentConfig* levels[] = {&cfg, &fine};
  const int threads = resolve_threads(opt.threads);

  RunResult res;
  CsvTable ratio_table({"function_id", "N", "ratio", "value"});
  CsvTable band_table({"ratio", "N", "min", "max"});
  CsvTable drift_table({"ratio", "max_N", "max_2N", "drift"});
  json functions = json::object();
  std::map<std::string, std::array<std::pair<double, double>, 2>> bands;

  for (int level = 0; level < 2; ++level) {
    const ExperimentConfig& c = *levels[level];
    const Setup s = make_setup(c);
    const auto corpus = compute_corpus(s, c, threads);
    for (const FunctionNorms& fn : corpus) {
      const double classical = fn.find(SeminormKind::Classical)->value;
      json& entry = functions[fn.id];
      if (fn.kind == CorpusKind::Constant) {
        entry["excluded"] = "constant control";
        continue;
      }
      if (!(classical > 0.0)) {
        entry["anomaly"] = "zero classical seminorm";
        res.failures.push_back("equivalence.zero_classical:" + fn.id);
        continue;
      }
      for (const RatioDef& d : kRatios) {
        const SeminormReport* num = fn.find(d.num);
        const SeminormReport* den = fn.find(d.den);
        if (!num || !den) continue;
        const double ratio = num->value / den->value;
        entry[d.id][std::to_string(c.points)] = ratio;
        ratio_table.add_row({fn.id, std::to_string(c.points), d.id, format_double(ratio)});
        if (!std::isfinite(ratio) || !(ratio > 0.0))
          res.failures.push_back("equivalence.ratio_positive:" + fn.id + ":" + d.id);
        auto [it, fresh] = bands.try_emplace(d.id);
        auto& b = it->second[level];
        if (fresh || b.first == 0.0) b = {ratio, ratio};
        b.first = std::min(b.first, ratio);
        b.second = std::max(b.second, ratio);
      }
    }
  }
  json band_json = json::object();
  for (const RatioDef& d : kRatios) {
    auto it = bands.find(d.id);
    if (it == bands.end()) continue;
    const auto& [coarse, finer] = it->second;
    const double drift = std::fabs(finer.second - coarse.second) / coarse.second;
    band_table.add_row({d.id, std::to_string(cfg.points), format_double(coarse.first), format_double(coarse.second)});
    band_table.add_row({d.id, std::to_string(fine.points), format_double(finer.first), format_double(finer.second)});
    drift_table.add_row({d.id, format_double(coarse.second), format_double(finer.second), format_double(drift)});
    band_json[d.id] = {{"min_N", coarse.first},  {"max_N", coarse.second}, {"min_2N", finer.first},
                       {"max_2N", finer.second}, {"drift", drift},         {"drift_below_0_2", drift < 0.2}};
    res.log.push_back(std::string(d.id) + " band [" + format_double(coarse.first) + ", " +
                      format_double(coarse.second) + "] drift " + format_double(drift));
  }
  json doc = {{"schema", "morrey.equivalence/1"},
              {"config", json::parse(config_to_json(cfg))},
              {"resolutions", {cfg.points, fine.points}},
              {"functions", functions},
              {"bands", band_json},
              {"failures", res.failures}};
  res.outputs.add("equivalence.json", dump(doc));
  res.outputs.add("tables/equivalence_ratios.csv", ratio_table.str());
  res.outputs.add("tables/equivalence_bands.csv", band_table.str());
  res.outputs.add("tables/equivalence_drift.csv", drift_table.str());
  return res;
}

// ---------------------------------------------------------------------------

RunResult cmd_reproduce(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid g = cfg.grid();
  const GeneratorSpec gen = cfg.reproduce.m == 1 ? GeneratorSpec::poisson() : GeneratorSpec::heat();
  const LogTimeGrid automatic = LogTimeGrid::for_grid(g, gen, cfg.reproduce.nodes);
  const LogTimeGrid tgrid(cfg.reproduce.t_min.value_or(automatic.t_min()),
                          cfg.reproduce.t_max.value_or(automatic.t_max()), cfg.reproduce.nodes);
  check_reproduction_span(g, gen, tgrid);

  RunResult res;
  const CalderonConstantCheck cc = calderon_constant_check(cfg.reproduce.m, tgrid);
  if (!(cc.relative_error <= 1e-6)) res.failures.push_back("reproduce.constant");

  const int band = std::min(8, g.points_per_axis() / 4);
  const std::size_t count = std::size_t(cfg.reproduce.battery);
  std::vector<double> errors(count);
  parallel_for(count, resolve_threads(opt.threads), [&](std::size_t i) {
    const Field h = trig_field(g, band, cfg.seed + i);
    const Field back = calderon_reproduce(gen, h, tgrid);
    errors[i] = lp_norm(back - h, 2.0) / lp_norm(h, 2.0);
  });
  double worst = 0.0;
  CsvTable table({"seed", "relative_l2_error"});
  json battery = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    worst = std::max(worst, errors[i]);
    table.add_row({std::to_string(cfg.seed + i), format_double(errors[i])});
    battery.push_back({{"seed", cfg.seed + i}, {"relative_l2_error", errors[i]}});
  }
  if (!(worst <= 1e-3)) res.failures.push_back("reproduce.battery");
  res.log.push_back("constant relative error " + format_double(cc.relative_error));
  res.log.push_back("worst relative L2 error " + format_double(worst));
  json doc = {{"schema", "morrey.reproduce/1"},
              {"m", cfg.reproduce.m},
              {"generator", gen.name()},
              {"grid", {{"n", g.dimension()}, {"N", g.points_per_axis()}, {"L", g.domain_length()}}},
              {"K", tgrid.size()},
              {"t_min", tgrid.t_min()},
              {"t_max", tgrid.t_max()},
              {"constant", {{"integral", cc.integral}, {"expected", cc.expected}, {"relative_error", cc.relative_error}}},
              {"battery", battery},
              {"worst_relative_error", worst},
              {"failures", res.failures}};
  res.outputs.add("reproduce.json", dump(doc));
  res.outputs.add("tables/reproduce_battery.csv", table.str());
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::string atom_csv(const Atom& a) {
  const Grid& g = a.field.grid();
  std::string center = std::to_string(a.ball.center[0]);
  if (g.dimension() == 2) center += ";" + std::to_string(a.ball.center[1]);
  return "# morrey.atom/1 center=" + center + " radius=" + format_double(a.ball.radius) +
         " q=" + format_double(a.q) + " lambda=" + format_double(a.lambda) + "\n" + field_to_csv(a.field);
}

struct AtomSummary {
  std::size_t atoms = 0;
  std::size_t invalid = 0;
  std::size_t holder_violations = 0;
  double worst_size_error = 0.0;
  double lower_bound = 0.0;
  double classical = 0.0;
  std::optional<Atom> best;
  std::vector<DualIdentity> duals;
};

}  // namespace

RunResult cmd_atoms(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (!(cfg.params.p > 1.0)) throw ConfigError("atoms need p > 1");
  const Setup s = make_setup(cfg);
  const double q = cfg.params.p / (cfg.params.p - 1.0);
  const auto specs = cfg.corpus_specs();
  std::vector<AtomSummary> sums(specs.size());

  parallel_for(specs.size(), resolve_threads(opt.threads), [&](std::size_t k) {
    const Field f = generate(s.grid, cfg.params.p, specs[k]).field;
    AtomSummary& sum = sums[k];
    sum.classical = classical_seminorm(f, cfg.params, s.balls).value;
    for (const Index& c : s.balls.centers()) {
      const BallSet local = BallSet::centered(s.grid, {c}, std::vector<double>(s.balls.radii().begin(),
                                                                                s.balls.radii().end()));
      for (Atom& a : atom_family(f, local, q, cfg.params.lambda)) {
        ++sum.atoms;
        const AtomCheck chk = check_atom(a);
        if (!chk.ok()) ++sum.invalid;
        sum.worst_size_error = std::max(sum.worst_size_error, std::fabs(chk.size_ratio - 1.0));
        const double value = std::abs(pair(f, a.field));
        if (value > holder_bound(f, a) * (1.0 + 1e-12) + 1e-300) ++sum.holder_violations;
        if (value > sum.lower_bound || !sum.best) {
          sum.lower_bound = std::max(sum.lower_bound, value);
          sum.best = std::move(a);
        }
      }
    }
    if (sum.best) sum.duals.push_back(dual_identity_check(f, sum.best->field, sum.best->ball, s.gen, s.tgrid));
  });

  RunResult res;
  json functions = json::array();
  CsvTable table({"function_id", "atoms", "invalid", "holder_violations", "lower_bound", "classical", "ratio"});
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const AtomSummary& sum = sums[k];
    const std::string& id = specs[k].id;
    const double ratio = sum.classical > 0.0 ? sum.lower_bound / sum.classical : 0.0;
    json duals = json::array();
    for (const DualIdentity& d : sum.duals) {
      const double scale = std::max(std::abs(d.lhs), std::abs(d.rhs));
      const double rel = scale > 0.0 ? d.gap / scale : 0.0;
      if (!(rel <= 1e-3 || d.gap <= 1e-12)) res.failures.push_back("atoms.dual_identity:" + id);
      duals.push_back({{"lhs", {d.lhs.real(), d.lhs.imag()}},
                       {"rhs", {d.rhs.real(), d.rhs.imag()}},
                       {"gap", d.gap},
                       {"relative_gap", rel},
                       {"K", d.nodes},
                       {"t_span", {d.t_min, d.t_max}}});
    }
    if (sum.invalid) res.failures.push_back("atoms.validity:" + id);
    if (sum.holder_violations) res.failures.push_back("atoms.holder:" + id);
    std::string atom_path;
    if (sum.best) {
      atom_path = "atoms/" + id + ".csv";
      res.outputs.add(atom_path, atom_csv(*sum.best));
    }
    table.add_row({id, std::to_string(sum.atoms), std::to_string(sum.invalid), std::to_string(sum.holder_violations),
                   format_double(sum.lower_bound), format_double(sum.classical), format_double(ratio)});
    functions.push_back({{"function_id", id},
                         {"atoms", sum.atoms},
                         {"invalid_atoms", sum.invalid},
                         {"holder_violations", sum.holder_violations},
                         {"worst_size_error", sum.worst_size_error},
                         {"atomic_lower_bound", sum.lower_bound},
                         {"classical", sum.classical},
                         {"ratio", ratio},
                         {"extremal_atom_path", atom_path},
                         {"dual_identity", duals}});
    res.log.push_back(id + " atoms " + std::to_string(sum.atoms) + " lower/classical " + format_double(ratio));
  }
  json doc = {{"schema", "morrey.atoms/1"},
              {"config", json::parse(config_to_json(cfg))},
              {"q", q},
              {"functions", functions},
              {"failures", res.failures}};
  res.outputs.add("atoms.json", dump(doc));
  res.outputs.add("tables/atoms_summary.csv", table.str());
  return res;
}

// ---------------------------------------------------------------------------

namespace {

struct Check {
  std::string id;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

Check make_check(std::string id, double value, double tolerance) {
  return {std::move(id), value, tolerance, std::isfinite(value) && value <= tolerance};
}

using CheckFn = std::function<Check()>;

std::vector<std::pair<std::string, CheckFn>> selftest_battery(std::uint64_t seed, bool inject_fault) {
  const Grid g1(1, 128, 2.0 * std::numbers::pi);
  const Grid g2(2, 32, 2.0 * std::numbers::pi);
  const Field f1 = trig_field(g1, 12, seed);
  const Field f2 = trig_field(g2, 5, seed + 1);
  const GeneratorSpec heat = GeneratorSpec::heat();
  const GeneratorSpec poisson = GeneratorSpec::poisson();
  std::vector<std::pair<std::string, CheckFn>> list;

  list.push_back({"grid.parseval", [=] {
                    const double direct = std::pow(lp_norm(f2, 2.0), 2);
                    return make_check("grid.parseval",
                                      std::fabs(direct - forward_transform(f2).parseval_energy()) / direct, 1e-12);
                  }});
  for (const GeneratorSpec gen : {heat, poisson}) {
    const std::string tag(gen.name());
    list.push_back({"semigroup.law." + tag, [=] {
                      const double s = 0.03, t = 0.05;
                      const auto a = symbol_table(g1, gen);
                      const double bias = inject_fault ? 1e-3 : 0.0;
                      const Field inner = apply_symbol_function(forward_transform(f1), a, [=](double x) {
                        return std::exp(-t * x) * (1.0 + bias * (x > 0.0));
                      });
                      const Field lhs = apply_P(gen, s, inner);
                      return make_check("semigroup.law." + tag, max_diff(lhs, apply_P(gen, s + t, f1)) / f1.max_abs(),
                                        1e-10);
                    }});
    list.push_back({"semigroup.commutativity." + tag, [=] {
                      const Field a = apply_P(gen, 0.02, apply_Q(gen, 0.07, f2));
                      const Field b = apply_Q(gen, 0.07, apply_P(gen, 0.02, f2));
                      return make_check("semigroup.commutativity." + tag, max_diff(a, b) / f2.max_abs(), 1e-10);
                    }});
    list.push_back({"semigroup.self_adjoint." + tag, [=] {
                      const Field other = trig_field(g1, 10, seed + 7);
                      const cplx a = pair(apply_P(gen, 0.04, f1), other);
                      const cplx b = pair(f1, apply_P(gen, 0.04, other));
                      return make_check("semigroup.self_adjoint." + tag, std::abs(a - b) / std::max(1.0, std::abs(a)),
                                        1e-10);
                    }});
    list.push_back({"semigroup.conservation." + tag, [=] {
                      const Field one = Field::constant(g2, 1.0);
                      const double e = std::max(max_diff(apply_P(gen, 0.3, one), one), apply_Q(gen, 0.3, one).max_abs());
                      return make_check("semigroup.conservation." + tag, e, 1e-10);
                    }});
    list.push_back({"semigroup.q_composition." + tag, [=] {
                      const double t1 = 0.02, t2 = 0.05;
                      const Field lhs = apply_Q(gen, t1, apply_Q(gen, t2, f1));
                      const double half = 0.5 * (t1 + t2);
                      const Field rhs = (t1 * t2 / (half * half)) * apply_Q(gen, half, apply_Q(gen, half, f1));
                      return make_check("semigroup.q_composition." + tag, max_diff(lhs, rhs) / f1.max_abs(), 1e-10);
                    }});
    list.push_back({"norms.variance_identity." + tag, [=] {
                      std::vector<PointTime> samples;
                      for (int i = 0; i < 16; ++i) samples.push_back({{i * 7, 0}, 0.01 * (1 + i % 4)});
                      return make_check("norms.variance_identity." + tag,
                                        variance_identity_discrepancy(f1, gen, samples), 1e-10);
                    }});
  }
  for (int m : {1, 2}) {
    list.push_back({"quadrature.calderon_constant.m" + std::to_string(m), [=] {
                      const GeneratorSpec gen = m == 1 ? poisson : heat;
                      const auto cc = calderon_constant_check(m, LogTimeGrid::for_grid(g1, gen, 2048));
                      return make_check("quadrature.calderon_constant.m" + std::to_string(m), cc.relative_error, 1e-6);
                    }});
  }
  list.push_back({"quadrature.reproduction", [=] {
                    const Field back = calderon_reproduce(heat, f1, LogTimeGrid::for_grid(g1, heat, 512));
                    return make_check("quadrature.reproduction", lp_norm(back - f1, 2.0) / lp_norm(f1, 2.0), 1e-3);
                  }});
  list.push_back({"norms.windowed_matches_direct", [=] {
                    const BallSet balls = BallSet::lattice(g2, dyadic_radii(g2), 4);
                    const MorreyParams params{2.0, 1.0};
                    const double a = classical_seminorm(f2, params, balls, EvaluationMethod::Windowed).value;
                    const double b = classical_seminorm(f2, params, balls, EvaluationMethod::Direct).value;
                    return make_check("norms.windowed_matches_direct", std::fabs(a - b) / b, 1e-10);
                  }});
  list.push_back({"norms.constant_vanishes", [=] {
                    const Field c = Field::constant(g1, 2.5);
                    const BallSet balls = BallSet::lattice(g1, dyadic_radii(g1), 8);
                    const LogTimeGrid tg = LogTimeGrid::for_grid(g1, heat, 64);
                    const MorreyParams params;
                    double worst = classical_seminorm(c, params, balls).value;
                    worst = std::max(worst, semigroup_seminorm(c, params, heat, balls).value);
                    worst = std::max(worst, square_function_seminorm(c, params, heat, balls, tg, SquareVariant::SquareFnL).value);
                    worst = std::max(worst, carleson_tent_norm(c, params, heat, balls, tg).value);
                    return make_check("norms.constant_vanishes", worst, 1e-10);
                  }});
  list.push_back({"norms.square_ratio", [=] {
                    const LogTimeGrid tg(1e-6, 1e3, 2048);
                    const double r = g_function_ratio(f1, heat, 2.0, tg, SquareIntegrand::Q);
                    return make_check("norms.square_ratio", std::fabs(r - 0.5), 1e-4);
                  }});
  list.push_back({"norms.square_ratio_complement", [=] {
                    const LogTimeGrid tg(1e-6, 1e3, 2048);
                    const double r = g_function_ratio(f1, heat, 2.0, tg, SquareIntegrand::QComplement);
                    return make_check("norms.square_ratio_complement", std::fabs(r - std::sqrt(13.0) / 12.0), 1e-4);
                  }});
  for (const GeneratorKind kind : {GeneratorKind::Heat, GeneratorKind::Poisson}) {
    const std::string tag = kind == GeneratorKind::Heat ? "heat" : "poisson";
    list.push_back({"kernel.bounds." + tag, [=] {
                      const KernelProfile prof(kind, 1);
                      const std::vector<double> ts{1e-3, 1e-2, 0.1, 1.0};
                      std::vector<Point> xs, hs;
                      for (int i = 0; i <= 20; ++i) xs.push_back({0.05 * i * i, 0.0});
                      for (double h : {1e-3, 1e-2, 0.1}) hs.push_back({h, 0.0});
                      const auto rep = verify_kernel_bounds(prof, ts, xs, hs);
                      return make_check("kernel.bounds." + tag, double(rep.total_violations()), 0.0);
                    }});
  }
  list.push_back({"kernel.cross_validation.heat", [=] {
                    const KernelProfile prof(GeneratorKind::Heat, 1);
                    return make_check("kernel.cross_validation.heat",
                                      cross_validate_kernel(heat, prof, 0.01, f1) / f1.max_abs(), 1e-6);
                  }});
  list.push_back({"atoms.validity", [=] {
                    const BallSet balls = BallSet::lattice(g1, dyadic_radii(g1), 16);
                    double worst = 0.0;
                    for (const Atom& a : atom_family(f1, balls, 2.0, 0.5)) {
                      const AtomCheck c = check_atom(a);
                      worst = std::max(worst, c.ok() ? std::fabs(c.size_ratio - 1.0) : 1.0);
                    }
                    return make_check("atoms.validity", worst, 1e-12);
                  }});
  list.push_back({"atoms.dual_identity", [=] {
                    const Ball ball = make_ball(g1, {40, 0}, 0.4);
                    const Atom a = make_atom(trig_field(g1, 6, seed + 3), ball, 2.0, 0.5);
                    const DualIdentity d = dual_identity_check(f1, a.field, ball, heat, LogTimeGrid::for_grid(g1, heat, 512));
                    return make_check("atoms.dual_identity", d.gap / std::max(std::abs(d.lhs), 1e-300), 1e-3);
                  }});
  return list;
}

}  // namespace

RunResult cmd_selftest(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto battery = selftest_battery(cfg.seed, opt.inject_fault);
  std::vector<Check> results(battery.size());
  parallel_for(battery.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    try {
      results[i] = battery[i].second();
    } catch (const Error& e) {
      results[i] = {battery[i].first, std::numeric_limits<double>::quiet_NaN(), 0.0, false};
    }
  });
  RunResult res;
  json checks = json::array();
  for (const Check& c : results) {
    checks.push_back({{"id", c.id}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
    res.log.push_back(std::string(c.passed ? "PASS " : "FAIL ") + c.id + " " + format_double(c.value));
    if (!c.passed) res.failures.push_back(c.id);
  }
  json doc = {{"schema", "morrey.selftest/1"},
              {"seed", cfg.seed},
              {"fault_injected", opt.inject_fault},
              {"checks", checks},
              {"passed", res.failures.empty()},
              {"failures", res.failures}};
  res.outputs.add("selftest.json", dump(doc));
  return res;
}

// ---------------------------------------------------------------------------

int run_command(std::string_view command, const ExperimentConfig& cfg, const RunOptions& opt,
                const std::filesystem::path& out_dir, std::ostream& log) {
  RunResult res;
  try {
    cfg.validate();
    if (command == "norms") res = cmd_norms(cfg, opt);
    else if (command == "equivalence") res = cmd_equivalence(cfg, opt);
    else if (command == "reproduce") res = cmd_reproduce(cfg, opt);
    else if (command == "atoms") res = cmd_atoms(cfg, opt);
    else if (command == "selftest") res = cmd_selftest(cfg, opt);
    else throw ConfigError("unknown command '" + std::string(command) + "'");
  } catch (const TruncationError& e) {
    log << "error: " << e.what() << " (estimated tail " << format_double(e.estimated_tail()) << ")\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    log << "parameter error: " << e.what() << "\n";
    return kExitConfig;
  }
  res.outputs.commit(out_dir);
  for (const auto& line : res.log) log << line << "\n";
  for (const auto& f : res.failures) log << "invariant failed: " << f << "\n";
  return res.exit_code();
}

}  // namespace morrey
