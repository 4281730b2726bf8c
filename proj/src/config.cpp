#include "morrey/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "morrey/error.hpp"
#include "morrey/field_io.hpp"

namespace morrey {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + std::string(where));
  }
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

std::optional<double> auto_or_number(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number or \"auto\"");
  return v.get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

CorpusSpec parse_corpus_entry(const json& e) {
  reject_unknown(e, "corpus entry", {"id", "kind", "lambda", "band", "boxes", "wave", "value", "seed"});
  CorpusSpec s;
  s.id = get<std::string>(e, "id", "");
  if (s.id.empty()) throw ConfigError("corpus entry needs an id");
  s.kind = corpus_kind_from_string(get<std::string>(e, "kind", ""));
  s.lambda_f = get<double>(e, "lambda", s.lambda_f);
  s.band = get_int(e, "band", s.band);
  s.boxes = get_int(e, "boxes", s.boxes);
  if (e.contains("wave")) {
    const auto w = get<std::vector<int>>(e, "wave", {});
    if (w.empty() || w.size() > 2) throw ConfigError("wave must list one or two integers");
    s.wave = {w[0], w.size() > 1 ? w[1] : 0};
  }
  s.value = get<double>(e, "value", s.value);
  s.seed = get<std::uint64_t>(e, "seed", s.seed);
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "config",
                 {"schema", "grid", "generator", "params", "balls", "x_stride", "time", "corpus", "seed",
                  "reproduce"});
  if (j.contains("schema") && j.at("schema") != std::string(kConfigSchema))
    throw ConfigError("config schema must be \"" + std::string(kConfigSchema) + "\"");

  ExperimentConfig c;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, "grid", {"n", "N", "L"});
    c.dimension = get_int(g, "n", c.dimension);
    c.points = get_int(g, "N", c.points);
    c.length = get<double>(g, "L", c.length);
  }
  c.generator = get<std::string>(j, "generator", c.generator);
  if (j.contains("params")) {
    const json& p = j.at("params");
    reject_unknown(p, "params", {"p", "lambda"});
    c.params.p = get<double>(p, "p", c.params.p);
    c.params.lambda = get<double>(p, "lambda", c.params.lambda);
  }
  if (j.contains("balls")) {
    const json& b = j.at("balls");
    reject_unknown(b, "balls", {"radii", "stride"});
    if (b.contains("radii")) {
      const json& r = b.at("radii");
      if (r.is_string()) {
        if (r.get<std::string>() != "dyadic") throw ConfigError("balls.radii must be \"dyadic\" or a list");
      } else {
        c.radii = get<std::vector<double>>(b, "radii", {});
      }
    }
    c.stride = get_int(b, "stride", c.stride);
  }
  c.x_stride = get_int(j, "x_stride", c.x_stride);
  if (j.contains("time")) {
    const json& t = j.at("time");
    reject_unknown(t, "time", {"K", "t_min", "t_max"});
    c.time.nodes = get_int(t, "K", c.time.nodes);
    c.time.t_min = auto_or_number(t, "t_min");
    c.time.t_max = auto_or_number(t, "t_max");
  }
  if (j.contains("corpus")) {
    const json& cs = j.at("corpus");
    if (cs.is_string()) {
      if (cs.get<std::string>() != "default") throw ConfigError("corpus must be \"default\" or a list");
    } else if (cs.is_array()) {
      std::vector<CorpusSpec> list;
      for (const json& e : cs) list.push_back(parse_corpus_entry(e));
      c.corpus = std::move(list);
    } else {
      throw ConfigError("corpus must be \"default\" or a list");
    }
  }
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("reproduce")) {
    const json& r = j.at("reproduce");
    reject_unknown(r, "reproduce", {"m", "K", "t_min", "t_max", "battery"});
    c.reproduce.m = get_int(r, "m", c.reproduce.m);
    c.reproduce.nodes = get_int(r, "K", c.reproduce.nodes);
    c.reproduce.t_min = auto_or_number(r, "t_min");
    c.reproduce.t_max = auto_or_number(r, "t_max");
    c.reproduce.battery = get_int(r, "battery", c.reproduce.battery);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::vector<double> ExperimentConfig::ball_radii(const Grid& g) const {
  return radii ? *radii : dyadic_radii(g);
}

BallSet ExperimentConfig::balls(const Grid& g) const { return BallSet::lattice(g, ball_radii(g), stride); }

LogTimeGrid ExperimentConfig::time_grid(const Grid& g) const {
  const GeneratorSpec gen = generator_spec();
  const LogTimeGrid automatic = LogTimeGrid::for_grid(g, gen, time.nodes);
  return LogTimeGrid(time.t_min.value_or(automatic.t_min()), time.t_max.value_or(automatic.t_max()), time.nodes);
}

std::vector<CorpusSpec> ExperimentConfig::corpus_specs() const {
  return corpus ? *corpus : default_corpus(dimension, params.lambda, seed);
}

void ExperimentConfig::validate() const {
  try {
    const Grid g = grid();
    (void)generator_spec();
    params.validate(dimension);
    if (stride < 1 || x_stride < 1) throw ConfigError("strides must be >= 1");
    const auto r = ball_radii(g);
    if (r.empty()) throw ConfigError("no admissible ball radii");
    for (double v : r)
      if (!(v > g.spacing()) || v > 0.25 * g.domain_length() * (1.0 + 1e-12))
        throw ConfigError("ball radii must lie in (h, L/4]");
    (void)time_grid(g);
    if (reproduce.m != 1 && reproduce.m != 2) throw ConfigError("reproduce.m must be 1 or 2");
    if (reproduce.nodes < LogTimeGrid::kMinNodes) throw ConfigError("reproduce.K is too small");
    if (reproduce.battery < 1) throw ConfigError("reproduce.battery must be >= 1");
    std::set<std::string> ids;
    for (const CorpusSpec& s : corpus_specs()) {
      if (!ids.insert(s.id).second) throw ConfigError("duplicate corpus id '" + s.id + "'");
      (void)generate(g, params.p, s);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema"] = kConfigSchema;
  j["grid"] = {{"n", c.dimension}, {"N", c.points}, {"L", c.length}};
  j["generator"] = c.generator;
  j["params"] = {{"p", c.params.p}, {"lambda", c.params.lambda}};
  j["balls"] = {{"radii", c.radii ? json(*c.radii) : json("dyadic")}, {"stride", c.stride}};
  j["x_stride"] = c.x_stride;
  auto num_or_auto = [](const std::optional<double>& v) { return v ? json(*v) : json("auto"); };
  j["time"] = {{"K", c.time.nodes}, {"t_min", num_or_auto(c.time.t_min)}, {"t_max", num_or_auto(c.time.t_max)}};
  json corpus = json::array();
  for (const CorpusSpec& s : c.corpus_specs()) {
    json e = {{"id", s.id}, {"kind", to_string(s.kind)}};
    switch (s.kind) {
      case CorpusKind::PowerLaw: e["lambda"] = s.lambda_f; break;
      case CorpusKind::Trig: e["band"] = s.band; e["seed"] = s.seed; break;
      case CorpusKind::IndicatorSum: e["boxes"] = s.boxes; e["seed"] = s.seed; break;
      case CorpusKind::PlaneWave: e["wave"] = {s.wave[0], s.wave[1]}; break;
      case CorpusKind::Constant: e["value"] = s.value; break;
    }
    corpus.push_back(e);
  }
  j["corpus"] = corpus;
  j["seed"] = c.seed;
  j["reproduce"] = {{"m", c.reproduce.m},
                    {"K", c.reproduce.nodes},
                    {"t_min", num_or_auto(c.reproduce.t_min)},
                    {"t_max", num_or_auto(c.reproduce.t_max)},
                    {"battery", c.reproduce.battery}};
  return j.dump(2) + "\n";
}

}  // namespace morrey
