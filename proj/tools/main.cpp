// Command-line driver: sample clouds, tail Betti curves, limit-integral
// estimates, and full convergence experiments.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crackle/density.hpp"
#include "crackle/harness.hpp"
#include "crackle/limits.hpp"
#include "crackle/regimes.hpp"
#include "crackle/tail.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
  cmd->add_option("--config", o.config_path, "experiment config JSON file");
  cmd->add_option("--preset", o.preset_name, "named example configuration");
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  if (with_format)
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "master seed override")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--threads", o.threads, "worker threads")
      ->check(CLI::PositiveNumber);
}

crackle::ExperimentConfig load_config(const CommonOpts& o) {
  if (!o.config_path.empty() && !o.preset_name.empty())
    throw crackle::config_error("give either --config or --preset, not both");
  crackle::ExperimentConfig cfg;
  if (!o.config_path.empty())
    cfg = crackle::config_from_json(crackle::read_text_file(o.config_path));
  else if (!o.preset_name.empty())
    cfg = crackle::preset(o.preset_name);
  else
    throw crackle::config_error("need --config FILE or --preset NAME");
  if (o.seed_set) cfg.seed = o.seed;
  return cfg;
}

void write_out(const CommonOpts& o, const std::string& text) {
  if (o.out.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    crackle::write_text_file(o.out, text);
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  std::string base = path;
  const std::string ext = ".csv";
  if (base.size() >= ext.size() &&
      base.compare(base.size() - ext.size(), ext.size(), ext) == 0)
    base.resize(base.size() - ext.size());
  return base + tag + ".csv";
}

int run_sample(const CommonOpts& o, long n_opt) {
  crackle::ExperimentConfig cfg = load_config(o);
  const crackle::Model& m = cfg.regime.model;
  long n = n_opt > 0 ? n_opt : cfg.n_values.front();
  crackle::PointCloud cloud =
      crackle::sample_cloud(m, static_cast<int>(n), cfg.seed);
  if (o.format == "json") {
    json j;
    j["model"] = json::parse(crackle::config_to_json(cfg)).at("model");
    j["seed"] = cloud.seed;
    j["n"] = n;
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
      for (int r = 0; r < m.d; ++r) pts[i].push_back(cloud.points(r, i));
    j["points"] = pts;
    write_out(o, j.dump(2) + "\n");
    return 0;
  }
  std::string out = "# seed=" + std::to_string(cloud.seed) +
                    " d=" + std::to_string(m.d) + "\nid";
  for (int r = 0; r < m.d; ++r) out += ",x" + std::to_string(r);
  out += "\n";
  for (long i = 0; i < n; ++i) {
    out += std::to_string(i);
    for (int r = 0; r < m.d; ++r)
      out += "," + crackle::format_double(cloud.points(r, i));
    out += "\n";
  }
  write_out(o, out);
  return 0;
}

int run_betti(const CommonOpts& o, long n_opt, int trial) {
  crackle::ExperimentConfig cfg = load_config(o);
  long n = n_opt > 0 ? n_opt : cfg.n_values.front();
  std::size_t ni = 0;
  while (ni < cfg.n_values.size() && cfg.n_values[ni] != n) ++ni;
  if (ni == cfg.n_values.size())
    throw crackle::config_error("--n must be one of the config's n_values");
  if (trial < 0 || trial >= cfg.trials)
    throw crackle::config_error("--trial out of range");
  const std::uint64_t seed = crackle::cell_seed(cfg.seed, ni, trial);
  crackle::PointCloud cloud =
      crackle::sample_cloud(cfg.regime.model, static_cast<int>(n), seed);
  const double R = crackle::radius_at(cfg.regime, static_cast<double>(n));
  Eigen::MatrixXd tail = crackle::tail_points(cloud.points, R);
  std::vector<double> grid =
      crackle::linear_grid(cfg.t_grid.lo, cfg.t_grid.hi, cfg.t_grid.points);
  crackle::TailCurve curve =
      crackle::tail_betti_curve(tail, cfg.regime.k, grid);
  auto profile =
      crackle::component_profile(tail, cfg.regime.k, grid.back());
  if (o.format == "json") {
    json j;
    j["n"] = n;
    j["R"] = R;
    j["k"] = cfg.regime.k;
    j["seed"] = seed;
    j["model"] = json::parse(crackle::config_to_json(cfg)).at("model");
    j["tail_count"] = static_cast<long>(tail.cols());
    json jc = json::array();
    for (std::size_t ti = 0; ti < curve.t.size(); ++ti)
      jc.push_back({{"t", curve.t[ti]}, {"beta", curve.beta[ti]}});
    j["curve"] = jc;
    json jp = json::array();
    for (const auto& e : profile)
      jp.push_back({{"i", e.i}, {"j", e.j}, {"count", e.count}});
    j["profile"] = jp;
    write_out(o, j.dump(2) + "\n");
    return 0;
  }
  std::string head = "# n=" + std::to_string(n) + " R=" +
                     crackle::format_double(R) + " k=" +
                     std::to_string(cfg.regime.k) + " seed=" +
                     std::to_string(seed) + "\n";
  std::string out = head + "t,beta\n";
  for (std::size_t ti = 0; ti < curve.t.size(); ++ti)
    out += crackle::format_double(curve.t[ti]) + "," +
           std::to_string(curve.beta[ti]) + "\n";
  std::string prof = head + "i,j,count\n";
  for (const auto& e : profile)
    prof += std::to_string(e.i) + "," + std::to_string(e.j) + "," +
            std::to_string(e.count) + "\n";
  if (o.out.empty()) {
    write_out(o, out + prof);
  } else {
    crackle::write_text_file(o.out, out);
    crackle::write_text_file(sibling_path(o.out, ".profile"), prof);
  }
  return 0;
}

int run_limit(const CommonOpts& o, int i, long jj, double t, double lambda,
              bool total) {
  crackle::ExperimentConfig cfg = load_config(o);
  const crackle::Model& m = cfg.regime.model;
  json j;
  j["t"] = t;
  j["lambda"] = lambda;
  if (total) {
    int m_cap = cfg.series_m;
    const bool truncated = cfg.truncation_m > 0;
    if (truncated) m_cap = std::min(m_cap, cfg.truncation_m);
    crackle::SeriesEstimate est;
    if (m.family == crackle::Family::power_law) {
      est = crackle::mu_total(m.d, cfg.regime.k, t, lambda, m.alpha, m_cap,
                              cfg.j_cap, cfg.mc_budget, cfg.inner_budget,
                              cfg.seed, o.threads, truncated);
      j["family"] = "mu";
    } else {
      est = crackle::xi_total(m.d, cfg.regime.k, t, lambda, m.tau,
                              crackle::crackle_parameter(m), m_cap, cfg.j_cap,
                              cfg.mc_budget, cfg.inner_budget, cfg.seed,
                              o.threads, truncated);
      j["family"] = "xi";
    }
    j["total"] = true;
    j["value"] = est.value;
    j["stderr"] = est.stderr_;
    j["tail_bound"] = est.tail_bound;
    j["m_cap"] = est.m_cap;
    j["seed"] = est.seed;
  } else {
    crackle::MCEstimate est;
    if (m.family == crackle::Family::power_law) {
      crackle::MuSpec ms;
      ms.d = m.d;
      ms.k = cfg.regime.k;
      ms.i = i > 0 ? i : cfg.regime.k + 2;
      ms.j = jj;
      ms.t = t;
      ms.lambda = lambda;
      ms.alpha = m.alpha;
      ms.budget = cfg.mc_budget;
      ms.inner_budget = cfg.inner_budget;
      ms.seed = cfg.seed;
      est = crackle::mu_estimate(ms, o.threads);
      j["family"] = "mu";
      j["i"] = ms.i;
      j["j"] = ms.j;
    } else {
      crackle::XiSpec xs;
      xs.d = m.d;
      xs.k = cfg.regime.k;
      xs.i = i > 0 ? i : cfg.regime.k + 2;
      xs.j = jj;
      xs.t = t;
      xs.lambda = lambda;
      xs.tau = m.tau;
      xs.c = crackle::crackle_parameter(m);
      xs.budget = cfg.mc_budget;
      xs.inner_budget = cfg.inner_budget;
      xs.seed = cfg.seed;
      est = crackle::xi_estimate(xs, o.threads);
      j["family"] = "xi";
      j["i"] = xs.i;
      j["j"] = xs.j;
    }
    j["total"] = false;
    j["mean"] = est.mean;
    j["stderr"] = est.stderr_;
    j["samples"] = est.samples;
    j["seed"] = est.seed;
  }
  write_out(o, j.dump(2) + "\n");
  return 0;
}

int run_converge(const CommonOpts& o, const std::string& table_path) {
  crackle::ExperimentConfig cfg = load_config(o);
  crackle::ConvergenceReport rep = crackle::run_convergence(cfg, o.threads);
  if (!table_path.empty())
    crackle::write_text_file(
        table_path, crackle::regime_table_csv(cfg.regime, cfg.n_values));
  if (o.out.empty()) {
    write_out(o, o.format == "json" ? crackle::report_to_json(rep) + "\n"
                                    : crackle::report_to_csv(rep));
    return 0;
  }
  crackle::emit(rep, o.format, o.out);
  return 0;
}

int run_preset(const std::string& name, bool list, const std::string& out) {
  if (list) {
    std::string text;
    for (const std::string& p : crackle::preset_names()) text += p + "\n";
    if (out.empty())
      std::fwrite(text.data(), 1, text.size(), stdout);
    else
      crackle::write_text_file(out, text);
    return 0;
  }
  if (name.empty())
    throw crackle::config_error("preset: need a NAME argument or --list");
  std::string text = crackle::config_to_json(crackle::preset(name)) + "\n";
  if (out.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    crackle::write_text_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tail Betti numbers of random Čech complexes: sampling, curves, "
      "limit integrals, convergence experiments"};
  app.require_subcommand(1);

  CommonOpts so;
  long sample_n = 0;
  CLI::App* sample = app.add_subcommand("sample", "draw a point cloud");
  add_common(sample, so);
  sample->add_option("--n", sample_n, "points to draw");

  CommonOpts bo;
  long betti_n = 0;
  int betti_trial = 0;
  CLI::App* betti =
      app.add_subcommand("betti", "tail Betti curve for one trial");
  add_common(betti, bo);
  betti->add_option("--n", betti_n, "cloud size (one of the config n_values)");
  betti->add_option("--trial", betti_trial, "trial index");

  CommonOpts lo;
  int limit_i = 0;
  long limit_j = 1;
  double limit_t = 1.0, limit_lambda = 0.0;
  bool limit_total = false;
  CLI::App* limit =
      app.add_subcommand("limit", "Monte Carlo limit-integral estimate");
  add_common(limit, lo, false);
  limit->add_option("--i", limit_i, "cluster size (default k+2)");
  limit->add_option("--j", limit_j, "Betti value j");
  limit->add_option("--t", limit_t, "scale t in [0,1]");
  limit->add_option("--lambda", limit_lambda, "cluster intensity");
  limit->add_flag("--total", limit_total, "weighted occupancy series");

  CommonOpts co;
  std::string table_path;
  CLI::App* converge =
      app.add_subcommand("converge", "full convergence experiment");
  add_common(converge, co);
  converge->add_option("--regime-table", table_path,
                       "also write the (n, R, nf, scaler) audit CSV here");

  std::string preset_name, preset_out;
  bool preset_list = false;
  CLI::App* preset = app.add_subcommand("preset", "show a named config");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", preset_list, "list preset names");
  preset->add_option("--out", preset_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (sample->parsed()) return run_sample(so, sample_n);
    if (betti->parsed()) return run_betti(bo, betti_n, betti_trial);
    if (limit->parsed())
      return run_limit(lo, limit_i, limit_j, limit_t, limit_lambda,
                       limit_total);
    if (converge->parsed()) return run_converge(co, table_path);
    if (preset->parsed())
      return run_preset(preset_name, preset_list, preset_out);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const crackle::capacity_error& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return 3;
  } catch (const crackle::io_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const crackle::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
