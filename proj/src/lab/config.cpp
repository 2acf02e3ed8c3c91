#include "lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace horolab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(Errc::invalid_config, path + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) bad(path, "unknown key '" + it.key() + "'");
}

double need_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_number()) bad(path, std::string(key) + " must be a number");
  return obj[key].get<double>();
}

uint64_t need_count(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_number_unsigned())
    bad(path, std::string(key) + " must be a nonnegative integer");
  return obj[key].get<uint64_t>();
}

std::string need_string(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_string()) bad(path, std::string(key) + " must be a string");
  return obj[key].get<std::string>();
}

Point parse_point(const SpaceModel& s, const json& v, const std::string& path) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      if (!v.is_string()) bad(path, "tree points are generator words (\"\" for the basepoint)");
      auto w = word_parse(v.get<std::string>(), s.rank);
      if (!w) bad(path, "not a reduced word over the configured rank: " + v.dump());
      return TreePoint{*w};
    }
    case SpaceKind::upper_half_plane: {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        bad(path, "half-plane points are [x, y] with y > 0");
      PlanePoint p{v[0].get<double>(), v[1].get<double>()};
      if (p.y <= 0.0) bad(path, "half-plane points need y > 0");
      return p;
    }
    case SpaceKind::star: {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number())
        bad(path, "star points are [ray, radius]");
      StarPoint p{v[0].get<uint32_t>(), v[1].get<double>()};
      if (p.ray >= s.rays || p.radius < 0.0) bad(path, "star point outside the space");
      return canonical_point(s.kind, p);
    }
  }
  bad(path, "unsupported space");
}

BoundaryPoint parse_boundary(const SpaceModel& s, const json& v, const std::string& path) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      if (!v.is_string()) bad(path, "tree boundary points look like \"ab(ba)\"");
      auto e = tree_end_parse(v.get<std::string>(), s.rank);
      if (!e) bad(path, "not an eventually periodic reduced word: " + v.dump());
      return *e;
    }
    case SpaceKind::upper_half_plane: {
      if (v.is_number()) return PlaneEnd{v.get<double>(), false};
      if (v.is_string() && (v.get<std::string>() == "inf")) return PlaneEnd{0.0, true};
      bad(path, "half-plane boundary points are numbers or \"inf\"");
    }
    case SpaceKind::star: {
      if (!v.is_number_unsigned()) bad(path, "star boundary points are ray indices");
      uint32_t ray = v.get<uint32_t>();
      if (ray >= s.rays) bad(path, "ray index out of range");
      return StarEnd{ray};
    }
  }
  bad(path, "unsupported space");
}

Isometry parse_isometry(const SpaceModel& s, const json& v, const std::string& path) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      if (!v.is_string()) bad(path, "tree isometries are generator words");
      auto w = word_parse(v.get<std::string>(), s.rank);
      if (!w) bad(path, "not a reduced word: " + v.dump());
      return TreeIso{*w};
    }
    case SpaceKind::upper_half_plane: {
      if (!v.is_array() || v.size() != 4) bad(path, "half-plane isometries are [a, b, c, d]");
      for (const auto& e : v)
        if (!e.is_number()) bad(path, "matrix entries must be numbers");
      try {
        return make_plane_iso(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                              v[3].get<double>());
      } catch (const Error& e) {
        bad(path, e.what());
      }
    }
    case SpaceKind::star: {
      if (!v.is_array() || v.size() != s.rays) bad(path, "star isometries are ray permutations");
      StarIso g;
      for (const auto& e : v) {
        if (!e.is_number_unsigned()) bad(path, "permutation entries must be ray indices");
        g.perm.push_back(e.get<uint32_t>());
      }
      return g;
    }
  }
  bad(path, "unsupported space");
}

SpaceModel parse_space(const json& v) {
  check_keys(v, {"kind", "rank", "rays", "delta"}, "space");
  std::string kind = need_string(v, "kind", "space");
  if (kind == "free_group_tree") {
    for (const char* k : {"rays", "delta"})
      if (v.contains(k)) bad("space", std::string(k) + " does not apply to trees");
    return make_tree_space(static_cast<uint32_t>(need_count(v, "rank", "space")));
  }
  if (kind == "upper_half_plane") {
    for (const char* k : {"rays", "rank"})
      if (v.contains(k)) bad("space", std::string(k) + " does not apply to the half-plane");
    return make_half_plane_space(need_number(v, "delta", "space"));
  }
  if (kind == "star") {
    for (const char* k : {"rank", "delta"})
      if (v.contains(k)) bad("space", std::string(k) + " does not apply to the star space");
    return make_star_space(static_cast<uint32_t>(need_count(v, "rays", "space")));
  }
  bad("space", "unknown kind '" + kind + "'");
}

// All reduced words of the given length, each extended to a boundary word by
// repeating its last letter ("walk endpoints at depth k").
std::vector<BoundaryPoint> tree_depth_net(const SpaceModel& s, uint32_t depth) {
  std::vector<Word> words{{}};
  for (uint32_t d = 0; d < depth; ++d) {
    std::vector<Word> next;
    for (const auto& w : words)
      for (uint32_t k = 1; k <= s.rank; ++k)
        for (int sign : {1, -1}) {
          int32_t letter = sign * static_cast<int32_t>(k);
          if (!w.empty() && w.back() == -letter) continue;
          Word ext = w;
          ext.push_back(letter);
          next.push_back(std::move(ext));
        }
    words = std::move(next);
  }
  std::vector<BoundaryPoint> out;
  for (const auto& w : words) {
    Word per{w.back()};
    out.push_back(*make_tree_end(w, per));
  }
  return out;
}

NetConfig parse_nets(const SpaceModel& s, const json& v) {
  NetConfig nets;
  check_keys(v, {"boundary", "interior", "pairs", "horofunctions"}, "nets");

  if (v.contains("boundary")) {
    const json& b = v["boundary"];
    check_keys(b, {"tree_depth", "circle", "all_rays", "extra"}, "nets.boundary");
    if (b.contains("tree_depth")) {
      if (s.kind != SpaceKind::free_group_tree) bad("nets.boundary", "tree_depth needs a tree");
      uint32_t depth = static_cast<uint32_t>(need_count(b, "tree_depth", "nets.boundary"));
      if (depth < 1 || depth > 8) bad("nets.boundary", "tree_depth must be in [1, 8]");
      for (auto& e : tree_depth_net(s, depth)) nets.boundary.push_back(e);
    }
    if (b.contains("circle")) {
      if (s.kind != SpaceKind::upper_half_plane) bad("nets.boundary", "circle needs the half-plane");
      uint64_t m = need_count(b, "circle", "nets.boundary");
      if (m < 2 || m > 100000) bad("nets.boundary", "circle count out of range");
      const double pi = 3.141592653589793;
      for (uint64_t j = 0; j < m; ++j) {
        double theta = -pi + (static_cast<double>(j) + 0.5) * 2.0 * pi / static_cast<double>(m);
        nets.boundary.push_back(PlaneEnd{std::tan(theta / 2.0), false});
      }
    }
    if (b.contains("all_rays")) {
      if (s.kind != SpaceKind::star) bad("nets.boundary", "all_rays needs the star space");
      if (!b["all_rays"].is_boolean()) bad("nets.boundary", "all_rays must be a boolean");
      if (b["all_rays"].get<bool>())
        for (uint32_t r = 0; r < s.rays; ++r) nets.boundary.push_back(StarEnd{r});
    }
    if (b.contains("extra")) {
      if (!b["extra"].is_array()) bad("nets.boundary.extra", "expected an array");
      for (const auto& e : b["extra"]) {
        BoundaryPoint p = parse_boundary(s, e, "nets.boundary.extra");
        bool known = false;
        for (const auto& q : nets.boundary)
          if (bord_points_equal(s, bord(q), bord(p))) known = true;
        if (!known) nets.boundary.push_back(p);
      }
    }
  }

  if (v.contains("interior")) {
    if (!v["interior"].is_array()) bad("nets.interior", "expected an array of points");
    for (const auto& e : v["interior"]) nets.interior.push_back(parse_point(s, e, "nets.interior"));
  }

  for (const auto& p : nets.interior) nets.chain.push_back(bord(p));
  for (const auto& p : nets.boundary) nets.chain.push_back(bord(p));

  if (v.contains("pairs")) {
    const json& p = v["pairs"];
    check_keys(p, {"max_pairs", "explicit"}, "nets.pairs");
    if (p.contains("explicit")) {
      if (!p["explicit"].is_array()) bad("nets.pairs.explicit", "expected an array of pairs");
      for (const auto& e : p["explicit"]) {
        if (!e.is_array() || e.size() != 2) bad("nets.pairs.explicit", "each pair has two entries");
        nets.pairs.emplace_back(parse_boundary(s, e[0], "nets.pairs"),
                                parse_boundary(s, e[1], "nets.pairs"));
      }
    } else {
      uint64_t cap = p.contains("max_pairs") ? need_count(p, "max_pairs", "nets.pairs") : 64;
      for (size_t i = 0; i < nets.boundary.size() && nets.pairs.size() < cap; ++i)
        for (size_t j = i + 1; j < nets.boundary.size() && nets.pairs.size() < cap; ++j)
          nets.pairs.emplace_back(nets.boundary[i], nets.boundary[j]);
    }
    for (const auto& [a, b] : nets.pairs)
      if (bord_points_equal(s, bord(a), bord(b)))
        bad("nets.pairs", "pairs must consist of distinct boundary points");
  }

  if (v.contains("horofunctions")) {
    const json& h = v["horofunctions"];
    check_keys(h, {"boundary", "interior"}, "nets.horofunctions");
    if (h.contains("boundary")) {
      if (!h["boundary"].is_array()) bad("nets.horofunctions.boundary", "expected an array");
      for (const auto& e : h["boundary"])
        nets.horofunctions.push_back(
            Horofunction{bord(parse_boundary(s, e, "nets.horofunctions.boundary"))});
    }
    if (h.contains("interior")) {
      if (!h["interior"].is_array()) bad("nets.horofunctions.interior", "expected an array");
      for (const auto& e : h["interior"])
        nets.horofunctions.push_back(
            Horofunction{bord(parse_point(s, e, "nets.horofunctions.interior"))});
    }
  }
  return nets;
}

std::vector<uint32_t> parse_u32_list(const json& v, const std::string& path) {
  if (!v.is_array()) bad(path, "expected an array");
  std::vector<uint32_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) bad(path, "entries must be nonnegative integers");
    out.push_back(e.get<uint32_t>());
  }
  return out;
}

}  // namespace

const FiniteSupportMeasure& ExperimentConfig::measure(const std::string& name) const {
  auto it = measures.find(name);
  require(it != measures.end(), Errc::invalid_config, "unknown measure '" + name + "'");
  return it->second;
}

double ExperimentConfig::lambda_of(const std::string& name) const {
  auto it = measure_lambda.find(name);
  require(it != measure_lambda.end(), Errc::invalid_config, "unknown measure '" + name + "'");
  return it->second;
}

uint64_t fnv1a_hash(std::string_view bytes) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

ExperimentConfig load_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::invalid_config, std::string("config is not valid JSON: ") + e.what());
  }

  check_keys(root,
             {"space", "visual", "sampler", "measures", "nets", "walk", "caps", "experiments"},
             "config");

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a_hash(text);
  if (!root.contains("space")) bad("config", "missing space");
  cfg.space = parse_space(root["space"]);

  if (root.contains("visual")) {
    check_keys(root["visual"], {"base"}, "visual");
    cfg.visual = make_visual_config(cfg.space, need_number(root["visual"], "base", "visual"));
  } else {
    cfg.visual = make_visual_config(cfg.space);
  }

  if (root.contains("sampler")) {
    const json& sm = root["sampler"];
    check_keys(sm, {"tree_word_length", "plane_x_sigma", "plane_log_y_sigma", "star_radius_range"},
               "sampler");
    if (sm.contains("tree_word_length"))
      cfg.sampler.tree_word_length =
          static_cast<uint32_t>(need_count(sm, "tree_word_length", "sampler"));
    if (sm.contains("plane_x_sigma"))
      cfg.sampler.plane_x_sigma = need_number(sm, "plane_x_sigma", "sampler");
    if (sm.contains("plane_log_y_sigma"))
      cfg.sampler.plane_log_y_sigma = need_number(sm, "plane_log_y_sigma", "sampler");
    if (sm.contains("star_radius_range"))
      cfg.sampler.star_radius_range = need_number(sm, "star_radius_range", "sampler");
  }

  if (root.contains("measures")) {
    if (!root["measures"].is_object()) bad("measures", "expected an object");
    for (auto it = root["measures"].begin(); it != root["measures"].end(); ++it) {
      const std::string path = "measures." + it.key();
      check_keys(it.value(), {"atoms", "weights", "lambda"}, path);
      if (!it.value().contains("atoms") || !it.value()["atoms"].is_array())
        bad(path, "atoms must be an array");
      std::vector<Isometry> atoms;
      for (const auto& a : it.value()["atoms"]) atoms.push_back(parse_isometry(cfg.space, a, path));
      std::vector<double> weights;
      if (it.value().contains("weights")) {
        if (!it.value()["weights"].is_array()) bad(path, "weights must be an array");
        for (const auto& w : it.value()["weights"]) {
          if (!w.is_number()) bad(path, "weights must be numbers");
          weights.push_back(w.get<double>());
        }
      } else {
        weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
      }
      FiniteSupportMeasure mu;
      try {
        mu = make_measure(cfg.space, std::move(atoms), std::move(weights));
      } catch (const Error& e) {
        bad(path, e.what());
      }
      double lambda = it.value().contains("lambda") ? need_number(it.value(), "lambda", path) : 0.0;
      if (it.value().contains("lambda")) {
        if (lambda <= 1.0) bad(path, "lambda must exceed 1");
        if (!in_group_ball(cfg.space, cfg.visual.base, mu, lambda))
          fail(Errc::lambda_violation, path + ": an atom falls outside the declared lambda ball");
        cfg.measure_lambda[it.key()] = lambda;
      }
      cfg.measures.emplace(it.key(), std::move(mu));
    }
  }

  if (root.contains("nets")) cfg.nets = parse_nets(cfg.space, root["nets"]);

  if (root.contains("walk")) {
    const json& w = root["walk"];
    check_keys(w, {"steps", "trials", "seed", "checkpoints"}, "walk");
    cfg.walk.steps = static_cast<uint32_t>(need_count(w, "steps", "walk"));
    cfg.walk.trials = static_cast<uint32_t>(need_count(w, "trials", "walk"));
    cfg.walk.seed = need_count(w, "seed", "walk");
    if (w.contains("checkpoints"))
      cfg.walk.checkpoints = static_cast<uint32_t>(need_count(w, "checkpoints", "walk"));
    if (cfg.walk.steps < 1) bad("walk", "steps must be >= 1");
    if (cfg.walk.trials < 2) bad("walk", "trials must be >= 2");
  }

  if (root.contains("caps")) {
    check_keys(root["caps"], {"enumeration"}, "caps");
    cfg.enumeration_cap = need_count(root["caps"], "enumeration", "caps");
  }

  const bool star = cfg.space.kind == SpaceKind::star;
  if (root.contains("experiments")) {
    const json& ex = root["experiments"];
    check_keys(ex,
               {"validate_space", "drift", "hmet", "stationary", "contraction", "furstenberg",
                "continuity", "ldt"},
               "experiments");
    if (star)
      for (const char* walk_based :
           {"drift", "hmet", "stationary", "contraction", "furstenberg", "continuity", "ldt"})
        if (ex.contains(walk_based))
          bad("experiments", std::string(walk_based) +
                                 " is not available on the star space (ray permutations have "
                                 "zero drift)");

    if (ex.contains("validate_space")) {
      const json& v = ex["validate_space"];
      check_keys(v, {"samples", "ratio_samples", "comparison_samples", "delta"},
                 "experiments.validate_space");
      ValidateSpaceOptions o;
      o.samples = need_count(v, "samples", "experiments.validate_space");
      if (o.samples < 1) bad("experiments.validate_space", "samples must be >= 1");
      if (v.contains("ratio_samples"))
        o.ratio_samples = need_count(v, "ratio_samples", "experiments.validate_space");
      if (v.contains("comparison_samples"))
        o.comparison_samples = need_count(v, "comparison_samples", "experiments.validate_space");
      if (v.contains("delta")) {
        o.delta_override = need_number(v, "delta", "experiments.validate_space");
        if (*o.delta_override < 0.0) bad("experiments.validate_space", "delta must be >= 0");
      }
      cfg.validate_space = o;
    }

    auto need_measure = [&](const json& v, const std::string& path) {
      std::string name = need_string(v, "measure", path);
      if (!cfg.measures.count(name)) bad(path, "unknown measure '" + name + "'");
      return name;
    };

    if (ex.contains("drift")) {
      const json& v = ex["drift"];
      check_keys(v, {"measure", "fekete_orders"}, "experiments.drift");
      DriftOptions o;
      o.measure = need_measure(v, "experiments.drift");
      if (v.contains("fekete_orders"))
        o.fekete_orders = parse_u32_list(v["fekete_orders"], "experiments.drift.fekete_orders");
      cfg.drift = o;
    }

    if (ex.contains("hmet")) {
      const json& v = ex["hmet"];
      check_keys(v, {"measure", "probe", "eval_fraction", "tolerance"}, "experiments.hmet");
      HmetOptions o;
      o.measure = need_measure(v, "experiments.hmet");
      if (!v.contains("probe")) bad("experiments.hmet", "missing probe");
      o.probe = parse_boundary(cfg.space, v["probe"], "experiments.hmet.probe");
      if (v.contains("eval_fraction"))
        o.eval_fraction = need_number(v, "eval_fraction", "experiments.hmet");
      if (o.eval_fraction <= 0.0 || o.eval_fraction >= 1.0)
        bad("experiments.hmet", "eval_fraction must lie in (0,1)");
      if (v.contains("tolerance")) o.tolerance = need_number(v, "tolerance", "experiments.hmet");
      cfg.hmet = o;
    }

    if (ex.contains("stationary")) {
      const json& v = ex["stationary"];
      check_keys(v, {"measure", "steps", "trials", "starts", "alpha", "tolerance", "plane_bins"},
                 "experiments.stationary");
      StationaryOptions o;
      o.measure = need_measure(v, "experiments.stationary");
      o.steps = static_cast<uint32_t>(need_count(v, "steps", "experiments.stationary"));
      o.trials = static_cast<uint32_t>(need_count(v, "trials", "experiments.stationary"));
      if (o.trials < 1) bad("experiments.stationary", "trials must be >= 1");
      if (!v.contains("starts") || !v["starts"].is_array() || v["starts"].empty())
        bad("experiments.stationary", "starts must be a nonempty array");
      for (const auto& e : v["starts"])
        o.starts.push_back(parse_boundary(cfg.space, e, "experiments.stationary.starts"));
      if (v.contains("alpha")) o.alpha = need_number(v, "alpha", "experiments.stationary");
      if (o.alpha <= 0.0 || o.alpha > 1.0) bad("experiments.stationary", "alpha must be in (0,1]");
      if (v.contains("tolerance")) o.tolerance = need_number(v, "tolerance", "experiments.stationary");
      if (v.contains("plane_bins"))
        o.plane_bins = static_cast<uint32_t>(need_count(v, "plane_bins", "experiments.stationary"));
      cfg.stationary = o;
    }

    if (ex.contains("contraction")) {
      const json& v = ex["contraction"];
      check_keys(v, {"measure", "alpha_levels", "n_max", "mc_samples", "submult_total",
                     "submult_alpha"},
                 "experiments.contraction");
      ContractionOptions o;
      o.measure = need_measure(v, "experiments.contraction");
      if (v.contains("alpha_levels"))
        o.alpha_levels = static_cast<uint32_t>(need_count(v, "alpha_levels", "experiments.contraction"));
      if (o.alpha_levels < 1 || o.alpha_levels > 16)
        bad("experiments.contraction", "alpha_levels must be in [1,16]");
      if (v.contains("n_max"))
        o.n_max = static_cast<uint32_t>(need_count(v, "n_max", "experiments.contraction"));
      if (o.n_max < 1) bad("experiments.contraction", "n_max must be >= 1");
      if (v.contains("mc_samples"))
        o.mc_samples = static_cast<uint32_t>(need_count(v, "mc_samples", "experiments.contraction"));
      if (v.contains("submult_total"))
        o.submult_total =
            static_cast<uint32_t>(need_count(v, "submult_total", "experiments.contraction"));
      if (v.contains("submult_alpha"))
        o.submult_alpha = need_number(v, "submult_alpha", "experiments.contraction");
      if (o.submult_alpha <= 0.0 || o.submult_alpha > 1.0)
        bad("experiments.contraction", "submult_alpha must be in (0,1]");
      cfg.contraction = o;
    }

    if (ex.contains("furstenberg")) {
      const json& v = ex["furstenberg"];
      check_keys(v,
                 {"measure", "tolerance", "stationary_steps", "stationary_trials", "start",
                  "explicit_atoms", "explicit_tolerance"},
                 "experiments.furstenberg");
      FurstenbergOptions o;
      o.measure = need_measure(v, "experiments.furstenberg");
      if (v.contains("tolerance")) o.tolerance = need_number(v, "tolerance", "experiments.furstenberg");
      if (v.contains("stationary_steps")) {
        o.stationary_steps =
            static_cast<uint32_t>(need_count(v, "stationary_steps", "experiments.furstenberg"));
        if (!v.contains("start")) bad("experiments.furstenberg", "stationary run needs a start");
        o.start = parse_boundary(cfg.space, v["start"], "experiments.furstenberg.start");
        if (v.contains("stationary_trials"))
          o.stationary_trials =
              static_cast<uint32_t>(need_count(v, "stationary_trials", "experiments.furstenberg"));
      }
      if (v.contains("explicit_atoms")) {
        if (!v["explicit_atoms"].is_array()) bad("experiments.furstenberg", "explicit_atoms is an array");
        for (const auto& e : v["explicit_atoms"]) {
          if (!e.is_array() || e.size() != 2 || !e[1].is_number())
            bad("experiments.furstenberg", "explicit atoms are [boundary point, weight]");
          o.explicit_atoms.emplace_back(
              parse_boundary(cfg.space, e[0], "experiments.furstenberg.explicit_atoms"),
              e[1].get<double>());
        }
      }
      if (v.contains("explicit_tolerance"))
        o.explicit_tolerance = need_number(v, "explicit_tolerance", "experiments.furstenberg");
      if (!o.stationary_steps && o.explicit_atoms.empty())
        bad("experiments.furstenberg", "configure a stationary run, explicit atoms, or both");
      cfg.furstenberg = o;
    }

    if (ex.contains("continuity")) {
      const json& v = ex["continuity"];
      check_keys(v, {"measure", "alpha", "tilts", "convolution_power_max"},
                 "experiments.continuity");
      ContinuityOptions o;
      o.measure = need_measure(v, "experiments.continuity");
      if (!cfg.measure_lambda.count(o.measure))
        bad("experiments.continuity", "the swept measure needs a declared lambda");
      if (v.contains("alpha")) o.alpha = need_number(v, "alpha", "experiments.continuity");
      if (o.alpha <= 0.0 || o.alpha > 1.0) bad("experiments.continuity", "alpha must be in (0,1]");
      if (!v.contains("tilts") || !v["tilts"].is_array() || v["tilts"].empty())
        bad("experiments.continuity", "tilts must be a nonempty array");
      for (const auto& e : v["tilts"]) {
        check_keys(e, {"up", "down", "t"}, "experiments.continuity.tilts");
        WeightTilt tilt;
        tilt.up_index = need_count(e, "up", "experiments.continuity.tilts");
        tilt.down_index = need_count(e, "down", "experiments.continuity.tilts");
        tilt.t = need_number(e, "t", "experiments.continuity.tilts");
        if (tilt.t <= 0.0) bad("experiments.continuity.tilts", "t must be positive");
        o.tilts.push_back(tilt);
      }
      if (v.contains("convolution_power_max"))
        o.convolution_power_max =
            static_cast<uint32_t>(need_count(v, "convolution_power_max", "experiments.continuity"));
      cfg.continuity = o;
    }

    if (ex.contains("ldt")) {
      const json& v = ex["ldt"];
      check_keys(v, {"measure", "epsilons", "n_grid", "trials", "probe", "min_exceedances"},
                 "experiments.ldt");
      LdtOptions o;
      o.measure = need_measure(v, "experiments.ldt");
      if (!v.contains("epsilons") || !v["epsilons"].is_array() || v["epsilons"].empty())
        bad("experiments.ldt", "epsilons must be a nonempty array");
      for (const auto& e : v["epsilons"]) {
        if (!e.is_number() || e.get<double>() <= 0.0)
          bad("experiments.ldt", "epsilons must be positive numbers");
        o.epsilons.push_back(e.get<double>());
      }
      if (!v.contains("n_grid")) bad("experiments.ldt", "missing n_grid");
      o.n_grid = parse_u32_list(v["n_grid"], "experiments.ldt.n_grid");
      if (o.n_grid.empty() || !std::is_sorted(o.n_grid.begin(), o.n_grid.end()))
        bad("experiments.ldt", "n_grid must be increasing");
      for (size_t i = 1; i < o.n_grid.size(); ++i)
        if (o.n_grid[i] == o.n_grid[i - 1]) bad("experiments.ldt", "n_grid must be strictly increasing");
      if (o.n_grid.front() < 1) bad("experiments.ldt", "n grid entries must be >= 1");
      o.trials = static_cast<uint32_t>(need_count(v, "trials", "experiments.ldt"));
      if (o.trials < 2) bad("experiments.ldt", "trials must be >= 2");
      if (v.contains("probe"))
        o.probe = parse_boundary(cfg.space, v["probe"], "experiments.ldt.probe");
      if (v.contains("min_exceedances"))
        o.min_exceedances =
            static_cast<uint32_t>(need_count(v, "min_exceedances", "experiments.ldt"));
      cfg.ldt = o;
    }
  }

  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config_text(buffer.str());
}

}  // namespace horolab
