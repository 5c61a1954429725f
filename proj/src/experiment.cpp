#include "rwppt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rwppt/empirical.hpp"
#include "rwppt/error.hpp"
#include "rwppt/pt_engine.hpp"
#include "rwppt/theory.hpp"

namespace rwppt {

using nlohmann::json;

namespace {

void require_known(const json& obj, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.contains(item.key())) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Either an explicit list or {"start", "stop", "count"} (inclusive ends).
std::vector<double> grid(const json& v, const std::string& where) {
  if (v.is_array()) return number_list(v, where);
  require_known(v, where, {"start", "stop", "count"});
  const double start = get_number(v, "start", where);
  const double stop = get_number(v, "stop", where);
  if (!v.contains("count")) throw ConfigError(where + ": missing 'count'");
  const std::uint64_t count = get_count(v.at("count"), where + ".count");
  if (count < 2) throw ConfigError(where + ": count must be at least 2");
  std::vector<double> out(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = stop;
  return out;
}

MarginalFamily parse_family(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string()) {
    throw ConfigError(where + ": needs a string 'kind'");
  }
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "exp_power") {
    require_known(v, where, {"kind", "z", "sigma"});
    if (!v.contains("z") || !v.at("z").is_number_integer()) {
      throw ConfigError(where + ".z: expected an integer");
    }
    return MarginalFamily::exp_power(v.at("z").get<int>(), get_number(v, "sigma", where));
  }
  if (kind == "tabulated") {
    require_known(v, where, {"kind", "grid", "log_values"});
    if (!v.contains("grid") || !v.contains("log_values")) {
      throw ConfigError(where + ": tabulated family needs 'grid' and 'log_values'");
    }
    return MarginalFamily::tabulated(number_list(v.at("grid"), where + ".grid"),
                                     number_list(v.at("log_values"), where + ".log_values"));
  }
  throw ConfigError(where + ".kind: expected 'exp_power' or 'tabulated'");
}

std::string output_name(const json& outputs, const char* key, std::string fallback) {
  if (!outputs.contains(key)) return fallback;
  const json& v = outputs.at(key);
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw ConfigError(std::string("outputs.") + key + ": expected a file name");
  }
  return v.get<std::string>();
}

double require_beta(const ExperimentConfig& c) {
  if (!c.beta) throw ConfigError("config: 'beta' is required for this subcommand");
  return *c.beta;
}

std::uint64_t require_seed(const ExperimentConfig& c) {
  if (!c.seed) throw ConfigError("config: 'seed' is required (or pass --seed)");
  return *c.seed;
}

LadderPlan build_ladder(const ExperimentConfig& c) {
  if (!c.ladder) throw ConfigError("config: 'ladder' section is required for this subcommand");
  const TargetModel model = c.model();
  const std::size_t d = c.ladder->d.value_or(c.dimension);
  return c.ladder->construction == Construction::geometric
             ? geometric_ladder(model, c.ladder->beta_min, d)
             : optimal_ladder(model, c.ladder->beta_min, d);
}

}  // namespace

std::string format_theory(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_exact(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

TargetModel ExperimentConfig::model_at(std::size_t d) const {
  std::vector<Region> out;
  for (const RegionConfig& r : regions) {
    Region region{std::vector<double>(d, 0.0), r.shape.half_width, r.shape.weight, r.shape.family};
    if (r.center) {
      if (d != dimension) {
        throw ConfigError("config: regions with explicit centers cannot change dimension");
      }
      region.center = *r.center;
    } else {
      region.center[0] = r.shape.offset;
    }
    out.push_back(std::move(region));
  }
  try {
    return TargetModel(d, std::move(out));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("config: invalid model: ") + e.what());
  }
}

TargetModel ExperimentConfig::model() const { return model_at(dimension); }

std::vector<RegionTemplate> ExperimentConfig::templates() const {
  std::vector<RegionTemplate> out;
  for (const RegionConfig& r : regions) {
    if (r.center) throw ConfigError("config: this subcommand needs 'offset' regions, not 'center'");
    out.push_back(r.shape);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON syntax error: ") + e.what());
  }
  require_known(root, "config",
                {"dimension", "regions", "seed", "beta", "ell_grid", "ell", "d_list", "n_samples",
                 "ladder", "simulate", "figure", "outputs"});
  ExperimentConfig c;
  try {
    if (!root.contains("dimension")) throw ConfigError("config: missing 'dimension'");
    c.dimension = get_count(root.at("dimension"), "config.dimension");
    if (c.dimension == 0) throw ConfigError("config.dimension: must be positive");

    if (!root.contains("regions") || !root.at("regions").is_array() ||
        root.at("regions").empty()) {
      throw ConfigError("config: 'regions' must be a non-empty array");
    }
    std::size_t index = 0;
    for (const json& r : root.at("regions")) {
      const std::string where = "regions[" + std::to_string(index++) + "]";
      require_known(r, where, {"offset", "center", "half_width", "weight", "family"});
      RegionConfig rc;
      if (r.contains("center") && r.contains("offset")) {
        throw ConfigError(where + ": give either 'center' or 'offset', not both");
      }
      if (r.contains("center")) {
        rc.center = number_list(r.at("center"), where + ".center");
        if (rc.center->size() != c.dimension) {
          throw ConfigError(where + ".center: length must equal dimension");
        }
      } else if (r.contains("offset")) {
        rc.shape.offset = get_number(r, "offset", where);
      }
      rc.shape.half_width = get_number(r, "half_width", where);
      rc.shape.weight = get_number(r, "weight", where);
      if (!r.contains("family")) throw ConfigError(where + ": missing 'family'");
      rc.shape.family = parse_family(r.at("family"), where + ".family");
      c.regions.push_back(std::move(rc));
    }

    if (root.contains("seed")) c.seed = get_count(root.at("seed"), "config.seed");
    if (root.contains("beta")) c.beta = get_number(root, "beta", "config");
    if (root.contains("ell_grid")) c.ell_grid = grid(root.at("ell_grid"), "config.ell_grid");
    if (root.contains("ell")) {
      const json& e = root.at("ell");
      if (e.is_string() && e.get<std::string>() == "optimal") {
        c.ell_optimal = true;
      } else if (e.is_number()) {
        c.ell = e.get<double>();
      } else {
        throw ConfigError("config.ell: expected a number or \"optimal\"");
      }
    }
    if (root.contains("d_list")) {
      std::vector<std::size_t> ds;
      if (!root.at("d_list").is_array()) throw ConfigError("config.d_list: expected an array");
      for (const json& v : root.at("d_list")) {
        const std::uint64_t d = get_count(v, "config.d_list");
        if (d == 0) throw ConfigError("config.d_list: dimensions must be positive");
        ds.push_back(d);
      }
      c.d_list = std::move(ds);
    }
    if (root.contains("n_samples")) c.n_samples = get_count(root.at("n_samples"), "config.n_samples");

    if (root.contains("ladder")) {
      const json& l = root.at("ladder");
      require_known(l, "ladder", {"beta_min", "construction", "d"});
      LadderSection ls;
      ls.beta_min = get_number(l, "beta_min", "ladder");
      if (l.contains("construction")) {
        const json& k = l.at("construction");
        if (k == "optimal") {
          ls.construction = Construction::optimal;
        } else if (k == "geometric") {
          ls.construction = Construction::geometric;
        } else {
          throw ConfigError("ladder.construction: expected \"optimal\" or \"geometric\"");
        }
      }
      if (l.contains("d")) ls.d = get_count(l.at("d"), "ladder.d");
      c.ladder = ls;
    }
    if (root.contains("simulate")) {
      const json& s = root.at("simulate");
      require_known(s, "simulate", {"betas", "n_sweeps", "within_moves", "refresh_hottest"});
      SimulateSection ss;
      if (s.contains("betas")) ss.betas = number_list(s.at("betas"), "simulate.betas");
      if (!s.contains("n_sweeps")) throw ConfigError("simulate: missing 'n_sweeps'");
      ss.n_sweeps = get_count(s.at("n_sweeps"), "simulate.n_sweeps");
      if (s.contains("within_moves")) {
        ss.within_moves = get_count(s.at("within_moves"), "simulate.within_moves");
      }
      if (s.contains("refresh_hottest")) {
        if (!s.at("refresh_hottest").is_boolean()) {
          throw ConfigError("simulate.refresh_hottest: expected a boolean");
        }
        ss.refresh_hottest = s.at("refresh_hottest").get<bool>();
      }
      c.simulate = std::move(ss);
    }
    if (root.contains("figure")) {
      const json& f = root.at("figure");
      require_known(f, "figure", {"m_grid"});
      if (f.contains("m_grid")) c.m_grid = grid(f.at("m_grid"), "figure.m_grid");
    }
    if (c.m_grid.empty()) c.m_grid = grid(json{{"start", 0.0}, {"stop", 4.0}, {"count", 401}}, "");
    if (root.contains("outputs")) {
      const json& o = root.at("outputs");
      require_known(o, "outputs",
                    {"theory_curve", "optimize", "ladder", "simulate", "convergence", "figure"});
      c.theory_curve_file = output_name(o, "theory_curve", c.theory_curve_file);
      c.optimize_file = output_name(o, "optimize", c.optimize_file);
      c.ladder_file = output_name(o, "ladder", c.ladder_file);
      c.simulate_file = output_name(o, "simulate", c.simulate_file);
      c.convergence_file = output_name(o, "convergence", c.convergence_file);
      c.figure_file = output_name(o, "figure", c.figure_file);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.model();  // validates weights and disjointness
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string theory_curve_csv(const ExperimentConfig& c) {
  const double beta = require_beta(c);
  if (!c.ell_grid) throw ConfigError("config: 'ell_grid' is required for theory-curve");
  const InformationProfile profile = information_profile(c.model(), beta);
  std::string out = "ell,E_ell,a_ell\n";
  for (double ell : *c.ell_grid) {
    if (!(ell >= 0.0)) throw ConfigError("config.ell_grid: values must be >= 0");
    const double a = limiting_acceptance(profile, ell);
    out += format_theory(ell) + "," + format_theory(ell * ell * a) + "," + format_theory(a) + "\n";
  }
  return out;
}

std::string optimize_json(const ExperimentConfig& c) {
  const double beta = require_beta(c);
  const InformationProfile profile = information_profile(c.model(), beta);
  const OptimalSpacing opt = optimize_ell(profile);
  json sigma = json::array();
  for (std::size_t j = 0; j < profile.size(); ++j) {
    json row = json::array();
    for (std::size_t m = 0; m < profile.size(); ++m) row.push_back(sigma_jm(profile, j, m));
    sigma.push_back(std::move(row));
  }
  json out;
  out["ell_hat"] = opt.ell_hat;
  out["a_hat"] = opt.a_hat;
  out["sigma"] = std::move(sigma);
  return out.dump(2) + "\n";
}

std::string ladder_csv(const ExperimentConfig& c) {
  const LadderPlan plan = build_ladder(c);
  std::string out = "index,beta,ell_used,predicted_acceptance\n";
  const auto betas = plan.ladder.betas();
  for (std::size_t i = 0; i < betas.size(); ++i) {
    // Row i > 0 describes the pair (i - 1, i); the top rung has l = 0, a = 1.
    const PairPlan pp = i == 0 ? PairPlan{0.0, 1.0} : plan.pairs[i - 1];
    out += std::to_string(i) + "," + format_exact(betas[i]) + "," + format_exact(pp.ell_used) +
           "," + format_exact(pp.predicted_acceptance) + "\n";
  }
  return out;
}

std::string simulate_csv(const ExperimentConfig& c, unsigned threads) {
  (void)threads;  // a single chain is inherently sequential
  if (!c.simulate) throw ConfigError("config: 'simulate' section is required for simulate");
  const std::uint64_t seed = require_seed(c);
  const TargetModel model = c.model();
  std::vector<double> betas;
  if (c.simulate->betas) {
    betas = *c.simulate->betas;
  } else {
    const auto plan = build_ladder(c);
    betas.assign(plan.ladder.betas().begin(), plan.ladder.betas().end());
  }
  Ladder ladder = [&] {
    try {
      return Ladder(betas);
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("simulate.betas: ") + e.what());
    }
  }();
  RunOptions options;
  options.within_moves_per_sweep = c.simulate->within_moves;
  options.refresh_hottest = c.simulate->refresh_hottest;
  Rng rng(Seed(seed).child(0));
  ParallelTempering pt(model, ladder, options, rng);
  const SwapDiagnostics& diag = pt.run(c.simulate->n_sweeps, rng);
  std::string out = "pair_index,beta_lo,beta_hi,proposals,accepts,acc_rate,esjd\n";
  for (std::size_t i = 0; i < diag.pairs.size(); ++i) {
    const PairStats& p = diag.pairs[i];
    out += std::to_string(i) + "," + format_exact(p.beta_lo) + "," + format_exact(p.beta_hi) + "," +
           std::to_string(p.proposals) + "," + std::to_string(p.accepts) + "," +
           format_exact(p.acceptance_rate()) + "," + format_exact(p.esjd()) + "\n";
  }
  return out;
}

std::string convergence_csv(const ExperimentConfig& c, unsigned threads) {
  const double beta = require_beta(c);
  const std::uint64_t seed = require_seed(c);
  if (!c.d_list || c.d_list->empty()) throw ConfigError("config: 'd_list' is required for convergence");
  const auto templates = c.templates();
  double ell;
  if (c.ell) {
    ell = *c.ell;
  } else {
    ell = optimize_ell(instantiate(templates, 1), beta).ell_hat;
  }
  EstimatorOptions opts;
  opts.threads = std::max(1u, threads);
  std::vector<ConvergenceRow> rows;
  try {
    rows = convergence_study(templates, beta, ell, *c.d_list, c.n_samples, Seed(seed), opts);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("convergence: ") + e.what());
  }
  std::string out = "d,a_emp,stderr,a_limit,gap\n";
  for (const ConvergenceRow& r : rows) {
    out += std::to_string(r.d) + "," + format_exact(r.a_emp) + "," + format_exact(r.std_error) +
           "," + format_exact(r.a_limit) + "," + format_exact(r.gap) + "\n";
  }
  return out;
}

std::string figure_csv(const ExperimentConfig& c) {
  std::string out = "m,value\n";
  for (const auto& [m, v] : figure_curve(c.m_grid)) {
    out += format_theory(m) + "," + format_theory(v) + "\n";
  }
  return out;
}

}  // namespace rwppt
