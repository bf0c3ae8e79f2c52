// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#include "gerost/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gerost/errors.hpp"

namespace gerost {

namespace {

using boost::property_tree::ptree;

// Reads typed values out of one section and rejects unknown keys.
class Section {
 public:
  Section(std::string name, const ptree& tree)
      : name_(std::move(name)), tree_(tree) {}

  bool has(const std::string& key) {
    seen_.insert(key);
    return tree_.find(key) != tree_.not_found();
  }

  std::string text(const std::string& key) {
    std::string v = tree_.find(key)->second.data();
    boost::algorithm::trim(v);
    return v;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("[" + name_ + "] " + key + ": " + what);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const std::string v = text(key);
    if constexpr (std::is_same_v<T, std::string>) {
      out = v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v == "true") {
        out = true;
      } else if (v == "false") {
        out = false;
      } else {
        fail(key, "expected true or false, got '" + v + "'");
      }
    } else {
      out = number<T>(key, v);
    }
  }

  template <typename T>
  T number(const std::string& key, const std::string& v) const {
    T value{};
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || v.empty()) {
      fail(key, "expected a number, got '" + v + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(value)) fail(key, "value must be finite");
    }
    return value;
  }

  void reject_unknown() const {
    for (const auto& [key, child] : tree_) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const ptree& tree_;
  std::set<std::string> seen_;
};

void read_generator(Section s, VideoProfile& p) {
  if (s.has("profile")) p = profile_by_name(s.text("profile"));
  s.read("height", p.height);
  s.read("width", p.width);
  s.read("frames", p.frames);
  s.read("k", p.k);
  s.read("amplitude", p.amplitude);
  s.read("coeff_std", p.coeff_std);
  s.read("noise_std", p.noise_std);
  s.read("occlusion_start", p.occlusion_start);
  s.read("square_size", p.square_size);
  s.read("intensity", p.intensity);
  s.read("walk_step", p.walk_step);
  s.reject_unknown();
}

// Reads "auto" or a number.
bool read_estimate(Section& s, const std::string& key, double& out) {
  if (!s.has(key)) return false;
  if (s.text(key) == "auto") return true;
  s.read(key, out);
  return false;
}

NamedTracker read_tracker(Section s, const std::string& name,
                          const VideoProfile& gen) {
  NamedTracker nt;
  nt.name = name;
  TrackerConfig& c = nt.cfg;
  c.n = gen.ambient_dim();
  c.k = gen.k;
  c.d = gen.k;

  std::string mode = "gerost";
  s.read("mode", mode);
  if (mode == "gerost") {
    c.mode = TrackerMode::kGerost;
  } else if (mode == "great") {
    c.mode = TrackerMode::kGreat;
  } else {
    s.fail("mode", "expected gerost or great, got '" + mode + "'");
  }
  s.read("k", c.k);
  s.read("d", c.d);
  c.T = c.d;
  s.read("T", c.T);
  s.read("K", c.K);
  s.read("alpha", c.alpha);
  s.read("eps_bis", c.eps_bis);
  s.read("init_seed", c.init_seed);

  std::string init = "random";
  s.read("init", init);
  if (init == "random") {
    c.init = InitPolicy::kRandomInNominal;
  } else if (init == "topk") {
    c.init = InitPolicy::kTopK;
  } else {
    s.fail("init", "expected random or topk, got '" + init + "'");
  }

  std::string path = "auto";
  s.read("eigen_path", path);
  if (path == "auto") {
    c.eigen_path = EigenPath::kAuto;
  } else if (path == "dense") {
    c.eigen_path = EigenPath::kDense;
  } else if (path == "lowrank") {
    c.eigen_path = EigenPath::kLowRank;
  } else {
    s.fail("eigen_path", "expected auto, dense or lowrank, got '" + path + "'");
  }

  std::string radius = "fixed";
  s.read("radius", radius);
  if (radius == "fixed") {
    FixedRadius f;
    s.read("rho", f.rho);
    c.radius = f;
  } else if (radius == "adaptive") {
    AdaptiveRadius a;
    nt.mu_auto = read_estimate(s, "mu_est", a.mu_est);
    nt.eps_auto = read_estimate(s, "eps_est", a.eps_est);
    s.read("sigma_lower", a.sigma_lower);
    s.read("p_cap", a.p_cap);
    s.read("include_dk_term", a.include_dk_term);
    c.radius = a;
  } else {
    s.fail("radius", "expected fixed or adaptive, got '" + radius + "'");
  }
  s.reject_unknown();

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("[" + s.name() + "] " + e.what());
  }
  return nt;
}

std::vector<std::uint64_t> parse_seeds(Section& s, const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    boost::algorithm::trim(item);
    seeds.push_back(s.number<std::uint64_t>("seeds", item));
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace

void ExperimentConfig::validate() const {
  const VideoProfile& g = generator;
  if (g.height < 1 || g.width < 1) throw ConfigError("[generator] frame shape must be positive");
  if (g.frames < 2) throw ConfigError("[generator] frames must be at least 2");
  if (g.k < 1 || 2 * g.k > g.ambient_dim()) {
    throw ConfigError("[generator] k must satisfy 1 <= k and 2k <= height*width");
  }
  if (!(g.amplitude >= 0.0) || !(g.amplitude < 1.5707963267948966)) {
    throw ConfigError("[generator] amplitude must lie in [0, pi/2)");
  }
  if (!(g.coeff_std >= 0.0) || !(g.noise_std >= 0.0)) {
    throw ConfigError("[generator] standard deviations must be non-negative");
  }
  if (g.square_size < 1 || g.square_size > std::min(g.height, g.width)) {
    throw ConfigError("[generator] square_size must fit in the frame");
  }
  if (g.walk_step < 0) throw ConfigError("[generator] walk_step must be >= 0");

  if (trackers.empty()) {
    throw ConfigError("at least one [tracker.<name>] section is required");
  }
  std::set<std::string> names;
  for (const NamedTracker& t : trackers) {
    const bool safe_name = std::all_of(t.name.begin(), t.name.end(), [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
    });
    if (t.name.empty() || !safe_name) {
      throw ConfigError("tracker name '" + t.name +
                        "' may only contain letters, digits, '_' and '-'");
    }
    if (!names.insert(t.name).second) {
      throw ConfigError("duplicate tracker name '" + t.name + "'");
    }
    if (t.cfg.n != g.ambient_dim()) {
      throw ConfigError("[tracker." + t.name + "] n does not match the generator");
    }
    t.cfg.validate();
  }

  const long from = evaluation.from_frame == 0 ? g.occlusion_start : evaluation.from_frame;
  const long to = evaluation.to_frame == 0 ? g.frames : evaluation.to_frame;
  if (from < 1 || to > g.frames || from > to) {
    throw ConfigError("[evaluation] frame range must satisfy 1 <= from <= to <= frames");
  }
  if (evaluation.roc_points < 2) throw ConfigError("[evaluation] roc_points must be >= 2");
  if (evaluation.fstar_iters < 1) throw ConfigError("[evaluation] fstar_iters must be >= 1");

  if (run.seeds.empty()) throw ConfigError("[run] seeds must not be empty");
  if (std::set<std::uint64_t>(run.seeds.begin(), run.seeds.end()).size() != run.seeds.size()) {
    throw ConfigError("[run] seeds must be distinct");
  }
  if (run.workers < 0) throw ConfigError("[run] workers must be >= 0");
  if (run.stream_format != "none" && run.stream_format != "csv" &&
      run.stream_format != "bin") {
    throw ConfigError("[run] stream_format must be none, csv or bin");
  }
  if (run.output_dir.empty()) throw ConfigError("[run] output_dir must not be empty");
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ptree root;
  try {
    boost::property_tree::ini_parser::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }

  ExperimentConfig cfg;
  std::string schema;
  bool have_schema = false;
  bool have_generator = false;
  for (const auto& [key, child] : root) {
    if (!child.empty()) continue;
    if (key != "schema") throw ConfigError("unknown top-level key '" + key + "'");
    schema = child.data();
    boost::algorithm::trim(schema);
    have_schema = true;
  }
  if (!have_schema) throw ConfigError("missing 'schema = " + std::string(kConfigSchema) + "'");
  if (schema != kConfigSchema) {
    throw ConfigError("unsupported schema '" + schema + "', expected " + kConfigSchema);
  }

  // The generator determines n, so it is read before any tracker.
  if (auto it = root.find("generator"); it != root.not_found()) {
    read_generator(Section("generator", it->second), cfg.generator);
    have_generator = true;
  }
  if (!have_generator) throw ConfigError("missing [generator] section");

  for (const auto& [key, child] : root) {
    if (child.empty()) continue;
    if (key == "generator") continue;
    if (key.rfind("tracker.", 0) == 0) {
      const std::string name = key.substr(8);
      if (name.empty()) throw ConfigError("[tracker.] needs a name");
      cfg.trackers.push_back(read_tracker(Section(key, child), name, cfg.generator));
    } else if (key == "evaluation") {
      Section s(key, child);
      s.read("from_frame", cfg.evaluation.from_frame);
      s.read("to_frame", cfg.evaluation.to_frame);
      s.read("roc_points", cfg.evaluation.roc_points);
      s.read("bound_check", cfg.evaluation.bound_check);
      s.read("fstar_iters", cfg.evaluation.fstar_iters);
      s.reject_unknown();
    } else if (key == "run") {
      Section s(key, child);
      std::string dir;
      s.read("output_dir", dir);
      if (s.has("output_dir")) cfg.run.output_dir = dir;
      if (s.has("seeds")) cfg.run.seeds = parse_seeds(s, s.text("seeds"));
      s.read("workers", cfg.run.workers);
      s.read("stream_format", cfg.run.stream_format);
      s.reject_unknown();
    } else {
      throw ConfigError("unknown section [" + key + "]");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_experiment_config(in);
}

}  // namespace gerost
