#include "crackle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <utility>

#include <json.hpp>

#include "crackle/limits.hpp"
#include "crackle/parallel.hpp"
#include "crackle/rng.hpp"
#include "crackle/tail.hpp"

namespace crackle {

using json = nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw io_error("cannot open for reading: " + path);
  std::string out;
  char buf[1 << 16];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  bool bad = std::ferror(f) != 0;
  std::fclose(f);
  if (bad) throw io_error("read failure: " + path);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error("cannot open for writing: " + path);
  std::size_t put = std::fwrite(content.data(), 1, content.size(), f);
  bool bad = put != content.size() || std::fclose(f) != 0;
  if (bad) throw io_error("write failure: " + path);
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t n_index, int trial) {
  std::uint64_t tag = (static_cast<std::uint64_t>(n_index) + 1) << 32 |
                      (static_cast<std::uint64_t>(trial) + 1);
  return mix64(master ^ mix64(tag));
}

namespace {

const char* rule_name(RadiusRule r) {
  switch (r) {
    case RadiusRule::power_case_i: return "power-sparse-log";
    case RadiusRule::power_case_ii: return "power-sparse-poly";
    case RadiusRule::power_case_iii: return "power-weak-core";
    case RadiusRule::exp_case_i: return "exp-sparse";
    case RadiusRule::exp_case_ii: return "exp-weak-core";
    case RadiusRule::custom: return "custom";
  }
  return "custom";
}

RadiusRule rule_from_name(const std::string& s) {
  for (RadiusRule r :
       {RadiusRule::power_case_i, RadiusRule::power_case_ii,
        RadiusRule::power_case_iii, RadiusRule::exp_case_i,
        RadiusRule::exp_case_ii, RadiusRule::custom})
    if (s == rule_name(r)) return r;
  throw config_error("unknown radius rule: " + s);
}

void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const std::string& where) {
  for (const char* k : keys)
    if (!j.contains(k))
      throw config_error(where + ": missing key '" + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
          return it.key() == k;
        }) == keys.end())
      throw config_error(where + ": unknown key '" + it.key() + "'");
}

json model_to_json(const Model& m) {
  json j;
  j["d"] = m.d;
  if (m.family == Family::power_law) {
    j["family"] = "power-law";
    j["alpha"] = m.alpha;
  } else {
    j["family"] = "exponential";
    j["tau"] = m.tau;
  }
  return j;
}

Model model_from_json(const json& j) {
  if (!j.is_object()) throw config_error("model: expected an object");
  std::string fam = j.value("family", std::string());
  if (fam == "power-law") {
    expect_keys(j, {"family", "d", "alpha"}, "model");
    return make_power_law(j.at("d").get<int>(), j.at("alpha").get<double>());
  }
  if (fam == "exponential") {
    expect_keys(j, {"family", "d", "tau"}, "model");
    return make_exponential(j.at("d").get<int>(), j.at("tau").get<double>());
  }
  throw config_error("model: unknown family '" + fam + "'");
}

json rule_to_json(const RegimeSpec& spec) {
  json j;
  j["name"] = rule_name(spec.rule);
  switch (spec.rule) {
    case RadiusRule::power_case_i: j["xi"] = spec.xi; break;
    case RadiusRule::power_case_ii: j["b"] = spec.b; break;
    case RadiusRule::power_case_iii: j["c"] = spec.c; break;
    case RadiusRule::exp_case_i: j["b"] = spec.b; break;
    case RadiusRule::exp_case_ii: j["c1"] = spec.c1; break;
    case RadiusRule::custom:
      j["A"] = spec.A;
      j["p"] = spec.p;
      j["q"] = spec.q;
      break;
  }
  return j;
}

void rule_from_json(const json& j, RegimeSpec& spec) {
  if (!j.is_object() || !j.contains("name"))
    throw config_error("rule: expected an object with a 'name'");
  spec.rule = rule_from_name(j.at("name").get<std::string>());
  switch (spec.rule) {
    case RadiusRule::power_case_i:
      expect_keys(j, {"name", "xi"}, "rule");
      spec.xi = j.at("xi").get<double>();
      break;
    case RadiusRule::power_case_ii:
      expect_keys(j, {"name", "b"}, "rule");
      spec.b = j.at("b").get<double>();
      break;
    case RadiusRule::power_case_iii:
      expect_keys(j, {"name", "c"}, "rule");
      spec.c = j.at("c").get<double>();
      break;
    case RadiusRule::exp_case_i:
      expect_keys(j, {"name", "b"}, "rule");
      spec.b = j.at("b").get<double>();
      break;
    case RadiusRule::exp_case_ii:
      expect_keys(j, {"name", "c1"}, "rule");
      spec.c1 = j.at("c1").get<double>();
      break;
    case RadiusRule::custom:
      expect_keys(j, {"name", "A", "p", "q"}, "rule");
      spec.A = j.at("A").get<double>();
      spec.p = j.at("p").get<double>();
      spec.q = j.at("q").get<double>();
      break;
  }
}

void validate_config(const ExperimentConfig& cfg) {
  try {
    validate(cfg.regime);
  } catch (const std::exception& e) {
    throw config_error(std::string("regime: ") + e.what());
  }
  const TGrid& g = cfg.t_grid;
  if (!(g.lo >= 0.0) || !(g.hi > g.lo) || !(g.hi <= 1.0))
    throw config_error("t_grid: need 0 <= lo < hi <= 1");
  if (g.points < 2) throw config_error("t_grid: need at least 2 points");
  if (cfg.n_values.empty()) throw config_error("n_values: empty");
  for (long n : cfg.n_values)
    if (n < 3 || n > (1L << 30))
      throw config_error("n_values: entries must lie in [3, 2^30]");
  if (cfg.trials < 1) throw config_error("trials: need >= 1");
  if (cfg.mc_budget < 2) throw config_error("mc_budget: need >= 2");
  if (cfg.inner_budget < 1) throw config_error("inner_budget: need >= 1");
  if (cfg.series_m < cfg.regime.k + 2)
    throw config_error("series_m: need >= k+2");
  if (cfg.j_cap < 1) throw config_error("j_cap: need >= 1");
  if (cfg.truncation_m != 0 && cfg.truncation_m < cfg.regime.k + 2)
    throw config_error("truncation_m: need 0 (off) or >= k+2");
  const Model& m = cfg.regime.model;
  if (m.family == Family::exponential && m.tau > 1.0)
    throw config_error(
        "exponential model: tau > 1 has a vanishing tail decay scale, the "
        "limit integrals here are undefined");
}

std::uint64_t limit_seed(std::uint64_t master, std::size_t t_index) {
  return mix64(master ^ 0x6c696d6974ULL ^
               (0x9e3779b97f4a7c15ULL * (t_index + 1)));
}

struct LimitCurve {
  std::vector<double> mean, se;
  double tail_bound = 0.0;
  std::string name;
};

// Which limit law a config targets: single minimal-cluster term (sparse
// regimes) or the full occupancy series at the limiting cluster intensity
// (weak-core regimes).  Custom rules inherit from the classifier.
LimitCurve limit_curve(const ExperimentConfig& cfg,
                       const std::vector<double>& grid,
                       const RegimeReport& cls, int threads) {
  const RegimeSpec& spec = cfg.regime;
  const Model& m = spec.model;
  const int k = spec.k;
  const std::size_t G = grid.size();
  LimitCurve out;
  out.mean.assign(G, 0.0);
  out.se.assign(G, 0.0);
  const std::uint64_t base = mix64(cfg.seed ^ 0x6c696d6974ULL);

  double fact = 1.0;
  for (int v = 2; v <= k + 2; ++v) fact *= v;

  bool weak_core = spec.rule == RadiusRule::power_case_iii ||
                   spec.rule == RadiusRule::exp_case_ii;
  double lambda = 0.0;
  if (spec.rule == RadiusRule::power_case_iii) lambda = m.C / spec.c;
  if (spec.rule == RadiusRule::exp_case_ii)
    lambda = m.C * std::pow(spec.c1, -1.0 / m.tau);
  if (spec.rule == RadiusRule::custom) {
    if (cls.label == "weak-core-regime") {
      weak_core = true;
      lambda = cls.lambda_hat;
    } else if (cls.label != "sparse-CLT-regime") {
      throw config_error("custom rule classified '" + cls.label +
                         "': no strong-law normalizer applies");
    }
  }

  int m_cap = cfg.series_m;
  const bool truncated = cfg.truncation_m > 0;
  if (truncated) m_cap = std::min(m_cap, cfg.truncation_m);

  if (weak_core) {
    std::vector<double> tb(G, 0.0);
    parallel_for(G, threads, [&](std::size_t ti) {
      if (grid[ti] <= 0.0) return;
      SeriesEstimate est;
      if (m.family == Family::power_law)
        est = mu_total(m.d, k, grid[ti], lambda, m.alpha, m_cap, cfg.j_cap,
                       cfg.mc_budget, cfg.inner_budget, limit_seed(base, ti),
                       1, truncated);
      else
        est = xi_total(m.d, k, grid[ti], lambda, m.tau, crackle_parameter(m),
                       m_cap, cfg.j_cap, cfg.mc_budget, cfg.inner_budget,
                       limit_seed(base, ti), 1, truncated);
      out.mean[ti] = est.value;
      out.se[ti] = est.stderr_;
      tb[ti] = est.tail_bound;
    });
    out.tail_bound = *std::max_element(tb.begin(), tb.end());
    out.name = m.family == Family::power_law
                   ? "occupancy series of mu at lambda = " +
                         format_double(lambda)
                   : "occupancy series of xi at lambda = " +
                         format_double(lambda);
    return out;
  }

  // Sparse regimes: limit is the minimal-cluster density over (k+2)-point
  // clusters, mu^(k+2,1)(t;0)/(k+2)! or xi^(k+2,1)(t;0)/(k+2)!.  At lambda=0
  // (and infinite crackle parameter in the exponential family) both scale as
  // t^{d(k+1)}, so one estimate at t = 1 fixes the whole curve.
  const double expo = static_cast<double>(m.d) * (k + 1);
  if (m.family == Family::power_law) {
    MuSpec ms;
    ms.d = m.d;
    ms.k = k;
    ms.i = k + 2;
    ms.j = 1;
    ms.t = 1.0;
    ms.lambda = 0.0;
    ms.alpha = m.alpha;
    ms.budget = cfg.mc_budget;
    ms.inner_budget = cfg.inner_budget;
    ms.seed = limit_seed(base, 0);
    MCEstimate est = mu_estimate(ms, threads);
    for (std::size_t ti = 0; ti < G; ++ti) {
      double s = std::pow(grid[ti], expo) / fact;
      out.mean[ti] = est.mean * s;
      out.se[ti] = est.stderr_ * s;
    }
    out.name = "minimal-cluster density mu/(k+2)! at lambda = 0";
    return out;
  }

  XiSpec xs;
  xs.d = m.d;
  xs.k = k;
  xs.i = k + 2;
  xs.j = 1;
  xs.lambda = 0.0;
  xs.tau = m.tau;
  xs.c = crackle_parameter(m);
  xs.budget = cfg.mc_budget;
  xs.inner_budget = cfg.inner_budget;
  if (std::isinf(xs.c)) {
    xs.t = 1.0;
    xs.seed = limit_seed(base, 0);
    MCEstimate est = xi_estimate(xs, threads);
    for (std::size_t ti = 0; ti < G; ++ti) {
      double s = std::pow(grid[ti], expo) / fact;
      out.mean[ti] = est.mean * s;
      out.se[ti] = est.stderr_ * s;
    }
  } else {
    // Finite crackle parameter: the angular tilt breaks the scale law, so
    // estimate each grid point separately.
    parallel_for(G, threads, [&](std::size_t ti) {
      if (grid[ti] <= 0.0) return;
      XiSpec per = xs;
      per.t = grid[ti];
      per.seed = limit_seed(base, ti);
      MCEstimate est = xi_estimate(per);
      out.mean[ti] = est.mean / fact;
      out.se[ti] = est.stderr_ / fact;
    });
  }
  out.name = "minimal-cluster density xi/(k+2)! at lambda = 0";
  return out;
}

std::pair<std::string, std::string> scaler_strings(const RegimeSpec& spec) {
  RadiusRule r = spec.rule;
  if (r == RadiusRule::custom)
    r = spec.model.family == Family::power_law ? RadiusRule::power_case_i
                                               : RadiusRule::exp_case_i;
  switch (r) {
    case RadiusRule::power_case_i:
    case RadiusRule::power_case_ii:
      return {"rho_n", "n^(k+2) R^d f(R)^(k+2)"};
    case RadiusRule::power_case_iii:
      return {"R^d", "R_n^d with R_n = (c n)^(1/alpha)"};
    case RadiusRule::exp_case_i:
      return {"eta_n", "n^(k+2) a(R) R^(d-1) f(R)^(k+2)"};
    default:
      return {"a(R) R^(d-1)", "a(R_n) R_n^(d-1)"};
  }
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (!cfg.preset_name.empty()) j["preset"] = cfg.preset_name;
  j["model"] = model_to_json(cfg.regime.model);
  j["k"] = cfg.regime.k;
  j["rule"] = rule_to_json(cfg.regime);
  j["t_grid"] = {{"min", cfg.t_grid.lo},
                 {"max", cfg.t_grid.hi},
                 {"points", cfg.t_grid.points}};
  j["n_values"] = cfg.n_values;
  j["trials"] = cfg.trials;
  j["mc_budget"] = cfg.mc_budget;
  j["inner_budget"] = cfg.inner_budget;
  j["series_m"] = cfg.series_m;
  j["j_cap"] = cfg.j_cap;
  j["truncation_m"] = cfg.truncation_m;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

namespace {

ExperimentConfig config_from_json_obj(const json& j) {
  if (!j.is_object()) throw config_error("config: expected a JSON object");
  json probe = j;
  probe.erase("preset");
  expect_keys(probe,
              {"model", "k", "rule", "t_grid", "n_values", "trials",
               "mc_budget", "inner_budget", "series_m", "j_cap",
               "truncation_m", "seed"},
              "config");
  ExperimentConfig cfg;
  cfg.preset_name = j.value("preset", std::string());
  cfg.regime.model = model_from_json(j.at("model"));
  cfg.regime.k = j.at("k").get<int>();
  rule_from_json(j.at("rule"), cfg.regime);
  const json& g = j.at("t_grid");
  expect_keys(g, {"min", "max", "points"}, "t_grid");
  cfg.t_grid.lo = g.at("min").get<double>();
  cfg.t_grid.hi = g.at("max").get<double>();
  cfg.t_grid.points = g.at("points").get<int>();
  cfg.n_values = j.at("n_values").get<std::vector<long>>();
  cfg.trials = j.at("trials").get<int>();
  cfg.mc_budget = j.at("mc_budget").get<std::uint64_t>();
  cfg.inner_budget = j.at("inner_budget").get<std::uint64_t>();
  cfg.series_m = j.at("series_m").get<int>();
  cfg.j_cap = j.at("j_cap").get<long>();
  cfg.truncation_m = j.at("truncation_m").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  validate_config(cfg);
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: JSON parse failed: ") + e.what());
  }
  return config_from_json_obj(j);
}

std::vector<std::string> preset_names() {
  return {"ex31-i", "ex31-ii", "ex31-iii", "ex32-i", "ex32-ii"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset_name = name;
  cfg.t_grid = {0.0, 1.0, 33};
  cfg.n_values = {512, 1024, 2048, 4096, 8192, 16384};
  cfg.trials = 50;
  cfg.mc_budget = 200000;
  cfg.inner_budget = 1024;
  cfg.series_m = 5;
  cfg.j_cap = 2;
  cfg.seed = 1;
  RegimeSpec& spec = cfg.regime;
  spec.k = 1;
  if (name == "ex31-i") {
    spec.model = make_power_law(2, 5.0);
    spec.rule = RadiusRule::power_case_i;
    spec.xi = 0.2;
  } else if (name == "ex31-ii") {
    spec.model = make_power_law(2, 5.0);
    spec.rule = RadiusRule::power_case_ii;
    spec.b = 4.0;
  } else if (name == "ex31-iii") {
    spec.model = make_power_law(2, 4.0);
    spec.rule = RadiusRule::power_case_iii;
    // c = 2 C e omega_d puts the limiting cluster intensity at the middle
    // of the admissible range, lambda = 1/(2 e omega_d).
    spec.c = 2.0 * spec.model.C * std::exp(1.0) * ball_volume(2);
    cfg.n_values = {512, 1024, 2048, 4096, 8192};
  } else if (name == "ex32-i") {
    spec.model = make_exponential(2, 0.5);
    spec.rule = RadiusRule::exp_case_i;
    spec.b = 0.1;
  } else if (name == "ex32-ii") {
    spec.model = make_exponential(2, 0.75);
    spec.rule = RadiusRule::exp_case_ii;
    spec.c1 = 1.5;
  } else {
    throw config_error("unknown preset: " + name);
  }
  validate_config(cfg);
  return cfg;
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg, int threads) {
  validate_config(cfg);
  RegimeReport cls = classify_regime(cfg.regime);
  if (cls.label == "degenerate") {
    std::string msg =
        "regime classified degenerate along n = 1e6..1e12 (cluster intensity "
        "and scaler both collapse); refusing to run convergence. Probes "
        "(n, nf, scaler):";
    for (std::size_t i = 0; i < cls.probe_n.size(); ++i)
      msg += " (" + format_double(cls.probe_n[i]) + ", " +
             format_double(cls.probe_nf[i]) + ", " +
             format_double(cls.probe_scaler[i]) + ")";
    throw config_error(msg);
  }

  ConvergenceReport rep;
  rep.config = cfg;
  rep.grid = linear_grid(cfg.t_grid.lo, cfg.t_grid.hi, cfg.t_grid.points);
  auto names = scaler_strings(cfg.regime);
  rep.scaler_name = names.first;
  rep.scaler_formula = names.second;

  const std::size_t N = cfg.n_values.size();
  const std::size_t T = static_cast<std::size_t>(cfg.trials);
  const std::size_t G = rep.grid.size();
  const int k = cfg.regime.k;

  rep.radius.resize(N);
  rep.nf.resize(N);
  rep.scaler.resize(N);
  for (std::size_t ni = 0; ni < N; ++ni) {
    double n = static_cast<double>(cfg.n_values[ni]);
    rep.radius[ni] = radius_at(cfg.regime, n);
    rep.nf[ni] = cluster_intensity(cfg.regime, n);
    rep.scaler[ni] = scaler_at(cfg.regime, n);
  }

  rep.beta.assign(N, std::vector<std::vector<long>>(T));
  std::vector<long> skips(N * T, 0);
  RadialTable table(cfg.regime.model);

  parallel_for(N * T, threads, [&](std::size_t idx) {
    const std::size_t ni = idx / T;
    const int trial = static_cast<int>(idx % T);
    const std::uint64_t cs = cell_seed(cfg.seed, ni, trial);
    PointCloud cloud = sample_cloud(cfg.regime.model, table,
                                    static_cast<int>(cfg.n_values[ni]), cs);
    Eigen::MatrixXd tail = tail_points(cloud.points, rep.radius[ni]);
    TailCurve curve =
        cfg.truncation_m > 0
            ? truncated_betti_curve(tail, k, rep.grid, cfg.truncation_m)
            : tail_betti_curve(tail, k, rep.grid);
    for (long b : curve.beta)
      if (b < 0) throw std::logic_error("negative Betti number in a curve");

    if (cfg.regime.rule == RadiusRule::power_case_iii &&
        cfg.truncation_m == 0) {
      // Bounded-intensity runs re-derive the last curve value through the
      // global complex, the occupancy census, and the two-sided minimal
      // cluster bound; any mismatch is a hard failure.
      const double tmax = rep.grid.back();
      try {
        long global = tail_betti_global(tail, k, tmax);
        if (global != curve.beta.back())
          throw std::logic_error("per-component vs global curve mismatch");
        long census = 0;
        for (const ProfileEntry& e : component_profile(tail, k, tmax))
          census += e.j * e.count;
        if (census != global)
          throw std::logic_error("occupancy census does not add up to beta");
        SandwichResult sw = sandwich_check(tail, k, tmax);
        if (!sw.holds || sw.beta != global)
          throw std::logic_error("two-sided minimal-cluster bound violated");
      } catch (const capacity_error&) {
        skips[idx] = 1;
      }
    }
    rep.beta[ni][trial] = std::move(curve.beta);
  });
  rep.sandwich_skips = std::accumulate(skips.begin(), skips.end(), 0L);

  rep.mean_scaled.assign(N, std::vector<double>(G, 0.0));
  rep.se_scaled.assign(N, std::vector<double>(G, 0.0));
  for (std::size_t ni = 0; ni < N; ++ni) {
    for (std::size_t ti = 0; ti < G; ++ti) {
      double mean = 0.0;
      for (std::size_t tr = 0; tr < T; ++tr)
        mean += static_cast<double>(rep.beta[ni][tr][ti]);
      mean /= (static_cast<double>(T) * rep.scaler[ni]);
      double var = 0.0;
      for (std::size_t tr = 0; tr < T; ++tr) {
        double x =
            static_cast<double>(rep.beta[ni][tr][ti]) / rep.scaler[ni] - mean;
        var += x * x;
      }
      rep.mean_scaled[ni][ti] = mean;
      rep.se_scaled[ni][ti] =
          T > 1 ? std::sqrt(var / (static_cast<double>(T - 1) *
                                   static_cast<double>(T)))
                : 0.0;
    }
  }

  LimitCurve lc = limit_curve(cfg, rep.grid, cls, threads);
  rep.limit_mean = std::move(lc.mean);
  rep.limit_se = std::move(lc.se);
  rep.limit_tail_bound = lc.tail_bound;
  rep.limit_name = std::move(lc.name);

  rep.sup_distance.assign(N, 0.0);
  for (std::size_t ni = 0; ni < N; ++ni) {
    double sup = 0.0;
    for (std::size_t ti = 0; ti < G; ++ti)
      sup = std::max(sup,
                     std::abs(rep.mean_scaled[ni][ti] - rep.limit_mean[ti]));
    rep.sup_distance[ni] = sup;
  }
  return rep;
}

std::string report_to_json(const ConvergenceReport& rep) {
  json j;
  j["config"] = json::parse(config_to_json(rep.config));
  j["grid"] = rep.grid;
  j["scaler_name"] = rep.scaler_name;
  j["scaler_formula"] = rep.scaler_formula;
  j["limit_name"] = rep.limit_name;
  j["radius"] = rep.radius;
  j["nf"] = rep.nf;
  j["scaler"] = rep.scaler;
  j["beta"] = rep.beta;
  j["mean_scaled"] = rep.mean_scaled;
  j["se_scaled"] = rep.se_scaled;
  j["limit_mean"] = rep.limit_mean;
  j["limit_se"] = rep.limit_se;
  j["limit_tail_bound"] = rep.limit_tail_bound;
  j["sup_distance"] = rep.sup_distance;
  j["sandwich_skips"] = rep.sandwich_skips;
  std::vector<std::vector<std::uint64_t>> seeds(rep.config.n_values.size());
  for (std::size_t ni = 0; ni < seeds.size(); ++ni)
    for (int tr = 0; tr < rep.config.trials; ++tr)
      seeds[ni].push_back(cell_seed(rep.config.seed, ni, tr));
  j["cell_seeds"] = seeds;
  return j.dump(2);
}

ConvergenceReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("report: JSON parse failed: ") + e.what());
  }
  expect_keys(j,
              {"config", "grid", "scaler_name", "scaler_formula", "limit_name",
               "radius", "nf", "scaler", "beta", "mean_scaled", "se_scaled",
               "limit_mean", "limit_se", "limit_tail_bound", "sup_distance",
               "sandwich_skips", "cell_seeds"},
              "report");
  ConvergenceReport rep;
  rep.config = config_from_json_obj(j.at("config"));
  rep.grid = j.at("grid").get<std::vector<double>>();
  rep.scaler_name = j.at("scaler_name").get<std::string>();
  rep.scaler_formula = j.at("scaler_formula").get<std::string>();
  rep.limit_name = j.at("limit_name").get<std::string>();
  rep.radius = j.at("radius").get<std::vector<double>>();
  rep.nf = j.at("nf").get<std::vector<double>>();
  rep.scaler = j.at("scaler").get<std::vector<double>>();
  rep.beta = j.at("beta").get<std::vector<std::vector<std::vector<long>>>>();
  rep.mean_scaled =
      j.at("mean_scaled").get<std::vector<std::vector<double>>>();
  rep.se_scaled = j.at("se_scaled").get<std::vector<std::vector<double>>>();
  rep.limit_mean = j.at("limit_mean").get<std::vector<double>>();
  rep.limit_se = j.at("limit_se").get<std::vector<double>>();
  rep.limit_tail_bound = j.at("limit_tail_bound").get<double>();
  rep.sup_distance = j.at("sup_distance").get<std::vector<double>>();
  rep.sandwich_skips = j.at("sandwich_skips").get<long>();
  auto seeds =
      j.at("cell_seeds").get<std::vector<std::vector<std::uint64_t>>>();
  for (std::size_t ni = 0; ni < seeds.size(); ++ni)
    for (std::size_t tr = 0; tr < seeds[ni].size(); ++tr)
      if (seeds[ni][tr] != cell_seed(rep.config.seed, ni, static_cast<int>(tr)))
        throw config_error("report: cell seeds inconsistent with master seed");
  return rep;
}

namespace {

std::string single_line_config(const ExperimentConfig& cfg) {
  return json::parse(config_to_json(cfg)).dump();
}

}  // namespace

std::string report_to_csv(const ConvergenceReport& rep) {
  std::string out;
  out += "# config: " + single_line_config(rep.config) + "\n";
  out += "# scaler: " + rep.scaler_name + " = " + rep.scaler_formula + "\n";
  out += "# limit: " + rep.limit_name + "\n";
  for (std::size_t ni = 0; ni < rep.beta.size(); ++ni)
    for (std::size_t tr = 0; tr < rep.beta[ni].size(); ++tr)
      out += "# cell_seed: n=" + std::to_string(rep.config.n_values[ni]) +
             " trial=" + std::to_string(tr) + " seed=" +
             std::to_string(cell_seed(rep.config.seed, ni,
                                      static_cast<int>(tr))) +
             "\n";
  out += "n,trial,t,beta,scaled\n";
  for (std::size_t ni = 0; ni < rep.beta.size(); ++ni) {
    for (std::size_t tr = 0; tr < rep.beta[ni].size(); ++tr) {
      for (std::size_t ti = 0; ti < rep.beta[ni][tr].size(); ++ti) {
        double scaled =
            static_cast<double>(rep.beta[ni][tr][ti]) / rep.scaler[ni];
        out += std::to_string(rep.config.n_values[ni]) + "," +
               std::to_string(tr) + "," + format_double(rep.grid[ti]) + "," +
               std::to_string(rep.beta[ni][tr][ti]) + "," +
               format_double(scaled) + "\n";
      }
    }
  }
  return out;
}

std::string summary_to_csv(const ConvergenceReport& rep) {
  std::string out;
  out += "# config: " + single_line_config(rep.config) + "\n";
  out += "n,t,mean_scaled,se_scaled,limit_mean,limit_se,sup_distance\n";
  for (std::size_t ni = 0; ni < rep.mean_scaled.size(); ++ni)
    for (std::size_t ti = 0; ti < rep.mean_scaled[ni].size(); ++ti)
      out += std::to_string(rep.config.n_values[ni]) + "," +
             format_double(rep.grid[ti]) + "," +
             format_double(rep.mean_scaled[ni][ti]) + "," +
             format_double(rep.se_scaled[ni][ti]) + "," +
             format_double(rep.limit_mean[ti]) + "," +
             format_double(rep.limit_se[ti]) + "," +
             format_double(rep.sup_distance[ni]) + "\n";
  return out;
}

std::string regime_table_csv(const RegimeSpec& spec,
                             const std::vector<long>& n_values) {
  validate(spec);
  std::string out = "n,R,nf,scaler\n";
  for (long n : n_values) {
    double x = static_cast<double>(n);
    out += std::to_string(n) + "," + format_double(radius_at(spec, x)) + "," +
           format_double(cluster_intensity(spec, x)) + "," +
           format_double(scaler_at(spec, x)) + "\n";
  }
  return out;
}

void emit(const ConvergenceReport& rep, const std::string& format,
          const std::string& path) {
  if (format == "json") {
    write_text_file(path, report_to_json(rep) + "\n");
    return;
  }
  if (format != "csv")
    throw config_error("unknown output format: " + format +
                       " (expected csv or json)");
  std::string summary_path = path;
  const std::string ext = ".csv";
  if (summary_path.size() >= ext.size() &&
      summary_path.compare(summary_path.size() - ext.size(), ext.size(),
                           ext) == 0)
    summary_path.resize(summary_path.size() - ext.size());
  summary_path += ".summary.csv";
  write_text_file(path, report_to_csv(rep));
  write_text_file(summary_path, summary_to_csv(rep));
}

}  // namespace crackle
