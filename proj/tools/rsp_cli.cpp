// Command-line frontend: every subcommand echoes its resolved parameters as JSON on stderr
// and writes its result to stdout (or --out).

#include "rsp/asymptotics.hpp"
#include "rsp/dynamics.hpp"
#include "rsp/error.hpp"
#include "rsp/harness.hpp"
#include "rsp/inference.hpp"
#include "rsp/io.hpp"
#include "rsp/network.hpp"
#include "rsp/spectral.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace rsp;

namespace {

struct NetworkOptions {
  std::string gen = "mean-field";
  int n = 4;
  double alpha = 0.5;
  double p = 0.5;
  std::string file;

  void attach(CLI::App* app, const std::string& prefix = "") {
    app->add_option("--" + prefix + "gen", gen, "Network generator: mean-field, cycle or special-vertex")
        ->check(CLI::IsMember({"mean-field", "cycle", "special-vertex"}))
        ->capture_default_str();
    app->add_option("--" + prefix + "n", n, "Number of vertices")->capture_default_str();
    app->add_option("--" + prefix + "alpha", alpha, "Mean-field coupling alpha in (0, 1]")->capture_default_str();
    app->add_option("--" + prefix + "p", p, "Special-vertex self weight p in (0, 1)")->capture_default_str();
    app->add_option("--" + prefix + "network", file, "Network JSON {\"n\", \"weights\"}; overrides the generator");
  }

  WeightedNetwork build() const {
    if (!file.empty()) return network_from_json(read_json_file(file));
    NetworkSpec s;
    s.generator = gen;
    s.n = n;
    s.alpha = alpha;
    s.p = p;
    return s.build();
  }

  Json echo() const {
    if (!file.empty()) return {{"network", file}};
    return {{"gen", gen}, {"n", n}, {"alpha", alpha}, {"p", p}};
  }
};

struct Output {
  std::string path;
  void attach(CLI::App* app) { app->add_option("--out", path, "Output file (default: stdout)"); }
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write '" + path + "'");
    f << text;
  }
};

void echo(const std::string& command, Json params) {
  params["command"] = command;
  std::cerr << params.dump() << '\n';
}

Vector resolve_state(const std::vector<double>& values, const std::string& file, int n, const char* what) {
  if (!file.empty()) {
    const Json j = read_json_file(file);
    return j.is_array() ? vector_from_json(j) : trajectory_summary_from_json(j).final_state;
  }
  if (values.size() == 1) return Vector::Constant(n, values[0]);
  if (static_cast<int>(values.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " needs 1 or N = " + std::to_string(n) + " values");
  return Eigen::Map<const Vector>(values.data(), n);
}

std::optional<long> offset(long n0) { return n0 > 0 ? std::optional<long>(n0) : std::nullopt; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interacting reinforced stochastic processes on weighted networks"};
  app.require_subcommand(1);

  // network
  NetworkOptions net_opts;
  Output net_out;
  auto* network_cmd = app.add_subcommand("network", "Build a network and print it as JSON");
  net_opts.attach(network_cmd);
  net_out.attach(network_cmd);

  // spectrum
  NetworkOptions spec_opts;
  Output spec_out;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Biorthogonal eigen-decomposition of a network");
  spec_opts.attach(spectrum_cmd);
  spec_out.attach(spectrum_cmd);

  // simulate
  NetworkOptions sim_net;
  Output sim_out;
  double sim_gamma = 0.75, sim_c = 1.0;
  long sim_n0 = 0, sim_horizon = 1000, sim_stride = 0;
  std::vector<double> sim_z0{0.5};
  std::uint64_t sim_seed = 0, sim_rep = 0;
  std::optional<double> sim_rho, sim_q;
  std::string sim_summary;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory; CSV of recorded states");
  sim_net.attach(simulate_cmd);
  sim_out.attach(simulate_cmd);
  simulate_cmd->add_option("--gamma", sim_gamma, "Schedule exponent gamma in (1/2, 1]")->capture_default_str();
  simulate_cmd->add_option("--c", sim_c, "Schedule scale c > 0")->capture_default_str();
  simulate_cmd->add_option("--n0", sim_n0, "Schedule offset in steps (0: smallest safe default)")->capture_default_str();
  simulate_cmd->add_option("--z0", sim_z0, "Initial inclinations: one value for all vertices, or N values")
      ->capture_default_str();
  simulate_cmd->add_option("--horizon", sim_horizon, "Number of steps")->capture_default_str();
  simulate_cmd->add_option("--stride", sim_stride, "Record every k steps (0: geometric 1, 2, 4, ...)")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", sim_seed, "Master seed (decimal 64-bit)")->capture_default_str();
  simulate_cmd->add_option("--replication", sim_rep, "Replication index selecting the random stream")
      ->capture_default_str();
  simulate_cmd->add_option("--rho", sim_rho, "Forcing weight rho in [0, 1); enables the forcing variant");
  simulate_cmd->add_option("--q", sim_q, "Forcing target q in [0, 1]");
  simulate_cmd->add_option("--summary", sim_summary, "Write the JSON summary (final state, z_tilde, spread) here");

  // covariance
  NetworkOptions cov_net;
  Output cov_out;
  double cov_gamma = 0.75, cov_c = 1.0, cov_tol = kRegimeTolerance;
  auto* covariance_cmd = app.add_subcommand("covariance", "Asymptotic covariances for a network and schedule");
  cov_net.attach(covariance_cmd);
  cov_out.attach(covariance_cmd);
  covariance_cmd->add_option("--gamma", cov_gamma, "Schedule exponent gamma in (1/2, 1]")->capture_default_str();
  covariance_cmd->add_option("--c", cov_c, "Schedule scale c > 0")->capture_default_str();
  covariance_cmd->add_option("--tol", cov_tol, "Tolerance for the critical line")->capture_default_str();

  // ci
  NetworkOptions ci_net;
  Output ci_out;
  std::vector<double> ci_state;
  std::string ci_state_file;
  std::optional<double> ci_z_tilde;
  long ci_n = 1000;
  double ci_gamma = 0.75, ci_c = 1.0, ci_level = 0.95;
  auto* ci_cmd = app.add_subcommand("ci", "Asymptotic confidence interval for the common limit");
  ci_net.attach(ci_cmd);
  ci_out.attach(ci_cmd);
  ci_cmd->add_option("--state", ci_state, "Observed Z_n: N values (or one value for all)");
  ci_cmd->add_option("--state-file", ci_state_file, "Observed Z_n from a JSON array or simulate --summary output");
  ci_cmd->add_option("--z-tilde", ci_z_tilde, "Observed Perron component instead of a full state");
  ci_cmd->add_option("--steps", ci_n, "Time n at which the state was observed")->capture_default_str();
  ci_cmd->add_option("--gamma", ci_gamma, "Schedule exponent gamma in (1/2, 1]")->capture_default_str();
  ci_cmd->add_option("--c", ci_c, "Schedule scale c > 0")->capture_default_str();
  ci_cmd->add_option("--level", ci_level, "Nominal coverage in (0, 1)")->capture_default_str();

  // test
  NetworkOptions test_net;
  Output test_out;
  std::vector<double> test_state;
  std::string test_state_file;
  long test_n = 1000;
  double test_gamma = 0.75, test_c = 1.0, test_significance = 0.05;
  auto* test_cmd = app.add_subcommand("test", "Chi-square test of a hypothesized network from an observed state");
  test_net.attach(test_cmd);
  test_out.attach(test_cmd);
  test_cmd->add_option("--state", test_state, "Observed Z_n: N values");
  test_cmd->add_option("--state-file", test_state_file, "Observed Z_n from a JSON array or simulate --summary output");
  test_cmd->add_option("--steps", test_n, "Time n at which the state was observed")->capture_default_str();
  test_cmd->add_option("--gamma", test_gamma, "Schedule exponent gamma in (1/2, 1]")->capture_default_str();
  test_cmd->add_option("--c", test_c, "Schedule scale c > 0")->capture_default_str();
  test_cmd->add_option("--significance", test_significance, "Test level in (0, 1)")->capture_default_str();

  // verify
  std::string verify_config;
  std::optional<std::uint64_t> verify_seed;
  int verify_threads = 0;
  std::string verify_dir;
  Output verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run experiment configs and their checks; exit 2 on a failed check");
  verify_cmd->add_option("--config", verify_config, "Experiment or suite JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--seed", verify_seed, "Override every experiment's master seed");
  verify_cmd->add_option("--threads", verify_threads, "Worker threads (0: all cores; RSP_THREADS caps this)")
      ->capture_default_str();
  verify_cmd->add_option("--csv-dir", verify_dir, "Directory for ensemble summaries and per-check CSV tables");
  verify_out.attach(verify_cmd);

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact reference computations");
  oracle_cmd->require_subcommand(1);
  NetworkOptions enum_net;
  Output enum_out;
  double enum_gamma = 1.0, enum_c = 1.0;
  long enum_n0 = 0;
  int enum_steps = 4;
  std::vector<double> enum_z0{0.5};
  auto* enumerate_cmd = oracle_cmd->add_subcommand("enumerate", "Exact law of Z_n by walking every outcome");
  enum_net.attach(enumerate_cmd);
  enum_out.attach(enumerate_cmd);
  enumerate_cmd->add_option("--gamma", enum_gamma, "Schedule exponent gamma in (1/2, 1]")->capture_default_str();
  enumerate_cmd->add_option("--c", enum_c, "Schedule scale c > 0")->capture_default_str();
  enumerate_cmd->add_option("--n0", enum_n0, "Schedule offset (0: default)")->capture_default_str();
  enumerate_cmd->add_option("--z0", enum_z0, "Initial inclinations")->capture_default_str();
  enumerate_cmd->add_option("--steps", enum_steps, "Number of steps n (N * n <= 24)")->capture_default_str();

  Output app_out;
  double a1_re = 0.5, a1_im = 0.0, a2_re = 0.5, a2_im = 0.0, app_gamma = 0.75, app_c = 1.0;
  long app_n = 1000000, app_m0 = 0;
  auto* appendix_cmd = oracle_cmd->add_subcommand("appendix", "Normalized product-sum and its limit");
  app_out.attach(appendix_cmd);
  appendix_cmd->add_option("--a1-re", a1_re, "Re alpha_1")->capture_default_str();
  appendix_cmd->add_option("--a1-im", a1_im, "Im alpha_1")->capture_default_str();
  appendix_cmd->add_option("--a2-re", a2_re, "Re alpha_2")->capture_default_str();
  appendix_cmd->add_option("--a2-im", a2_im, "Im alpha_2")->capture_default_str();
  appendix_cmd->add_option("--gamma", app_gamma, "Exponent gamma in (1/2, 1]")->capture_default_str();
  appendix_cmd->add_option("--c", app_c, "Scale c > 0")->capture_default_str();
  appendix_cmd->add_option("--n", app_n, "Number of terms n")->capture_default_str();
  appendix_cmd->add_option("--m0", app_m0, "First index (0: smallest index keeping every factor positive)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*network_cmd) {
      echo("network", net_opts.echo());
      net_out.write(to_json(net_opts.build()).dump(2) + "\n");
    } else if (*spectrum_cmd) {
      echo("spectrum", spec_opts.echo());
      spec_out.write(to_json(decompose(spec_opts.build())).dump(2) + "\n");
    } else if (*simulate_cmd) {
      const WeightedNetwork net = sim_net.build();
      const ReinforcementSchedule sched(sim_gamma, sim_c, offset(sim_n0));
      const Vector z0 = resolve_state(sim_z0, "", net.size(), "--z0");
      std::optional<ForcingVariant> variant;
      if (sim_rho || sim_q) {
        if (!sim_rho || !sim_q) throw Error(ErrorKind::InvalidParameter, "forcing needs both --rho and --q");
        variant = ForcingVariant{*sim_rho, *sim_q};
      }
      Json params = sim_net.echo();
      params.update({{"gamma", sim_gamma}, {"c", sim_c}, {"n0", sched.offset()}, {"z0", vector_to_json(z0)},
                     {"horizon", sim_horizon}, {"stride", sim_stride}, {"seed", sim_seed},
                     {"replication", sim_rep}});
      if (variant) params.update({{"rho", variant->rho}, {"q", variant->q}});
      echo("simulate", params);
      const Trajectory t = simulate(net, sched, z0, sim_horizon, Recording{sim_stride}, variant, sim_seed, sim_rep);
      std::ostringstream csv;
      write_trajectory_csv(csv, t);
      sim_out.write(csv.str());
      if (!sim_summary.empty()) {
        std::ofstream f(sim_summary);
        if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write '" + sim_summary + "'");
        f << to_json(summarize(t)).dump(2) << '\n';
      }
    } else if (*covariance_cmd) {
      Json params = cov_net.echo();
      params.update({{"gamma", cov_gamma}, {"c", cov_c}, {"tol", cov_tol}});
      echo("covariance", params);
      const SpectralData spec = decompose(cov_net.build());
      cov_out.write(to_json(covariance_report(spec, classify_regime(spec, cov_gamma, cov_c, cov_tol))).dump(2) + "\n");
    } else if (*ci_cmd) {
      const WeightedNetwork net = ci_net.build();
      const SpectralData spec = decompose(net);
      double zt;
      if (ci_z_tilde) {
        zt = *ci_z_tilde;
      } else {
        if (ci_state.empty() && ci_state_file.empty())
          throw Error(ErrorKind::InvalidParameter, "give --state, --state-file or --z-tilde");
        zt = perron_component(spec.v1, resolve_state(ci_state, ci_state_file, net.size(), "--state"));
      }
      Json params = ci_net.echo();
      params.update({{"z_tilde", zt}, {"steps", ci_n}, {"gamma", ci_gamma}, {"c", ci_c}, {"level", ci_level}});
      echo("ci", params);
      ci_out.write(to_json(confidence_interval(zt, ci_n, ci_gamma, ci_c, spec, ci_level)).dump(2) + "\n");
    } else if (*test_cmd) {
      const WeightedNetwork net = test_net.build();
      if (test_state.empty() && test_state_file.empty())
        throw Error(ErrorKind::InvalidParameter, "give --state or --state-file");
      const Vector z = resolve_state(test_state, test_state_file, net.size(), "--state");
      if (z.size() != net.size()) throw Error(ErrorKind::DimensionMismatch, "state size differs from the network");
      Json params = test_net.echo();
      params.update({{"state", vector_to_json(z)}, {"steps", test_n}, {"gamma", test_gamma}, {"c", test_c},
                     {"significance", test_significance}});
      echo("test", params);
      test_out.write(to_json(topology_test(z, test_n, net, test_gamma, test_c, test_significance)).dump(2) + "\n");
    } else if (*verify_cmd) {
      std::vector<ExperimentConfig> suite = suite_from_json(read_json_file(verify_config));
      if (verify_seed)
        for (auto& c : suite) c.seed = *verify_seed;
      const int threads = resolve_threads(verify_threads);
      Json resolved = Json::array();
      for (const auto& c : suite) resolved.push_back(to_json(c));
      echo("verify", {{"threads", threads}, {"experiments", resolved}});

      if (!verify_dir.empty()) std::filesystem::create_directories(verify_dir);
      Json reports = Json::array();
      bool all_passed = true;
      for (const auto& config : suite) {
        const ExperimentResult result = run_experiment(config, threads);
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
          const CheckReport& r = result.reports[i];
          reports.push_back(to_json(r));
          all_passed = all_passed && r.passed;
          std::cerr << (r.passed ? "PASS " : "FAIL ") << r.experiment << ' ' << r.kind << '\n';
          if (!verify_dir.empty()) {
            std::ofstream f(std::filesystem::path(verify_dir) / (config.name + "_" + std::to_string(i) + "_" + r.kind + ".csv"));
            write_report_csv(f, r);
          }
        }
        if (!verify_dir.empty()) {
          std::ofstream f(std::filesystem::path(verify_dir) / (config.name + "_summary.json"));
          f << to_json(result.summary).dump() << '\n';
        }
      }
      verify_out.write(Json{{"passed", all_passed}, {"reports", reports}}.dump(2) + "\n");
      return all_passed ? 0 : 2;
    } else if (*enumerate_cmd) {
      const WeightedNetwork net = enum_net.build();
      const ReinforcementSchedule sched(enum_gamma, enum_c, offset(enum_n0));
      const Vector z0 = resolve_state(enum_z0, "", net.size(), "--z0");
      Json params = enum_net.echo();
      params.update({{"gamma", enum_gamma}, {"c", enum_c}, {"n0", sched.offset()}, {"z0", vector_to_json(z0)},
                     {"steps", enum_steps}});
      echo("oracle enumerate", params);
      Json outcomes = Json::array();
      for (const auto& o : enumerate_exact(net, sched, z0, enum_steps))
        outcomes.push_back({{"probability", o.probability}, {"z", vector_to_json(o.z)}});
      enum_out.write(Json{{"steps", enum_steps}, {"outcomes", outcomes}}.dump(2) + "\n");
    } else if (*appendix_cmd) {
      AppendixOracleInput in{{a1_re, a1_im}, {a2_re, a2_im}, app_gamma, app_c, offset(app_m0), app_n};
      echo("oracle appendix", {{"alpha1", {{"re", a1_re}, {"im", a1_im}}},
                               {"alpha2", {{"re", a2_re}, {"im", a2_im}}},
                               {"gamma", app_gamma},
                               {"c", app_c},
                               {"n", app_n},
                               {"m0", appendix_start_index(in)}});
      const Complex partial = appendix_limit_partial(in);
      const Complex limit = appendix_limit_value(in);
      app_out.write(Json{{"partial", {{"re", partial.real()}, {"im", partial.imag()}}},
                         {"limit", {{"re", limit.real()}, {"im", limit.imag()}}},
                         {"relative_error", std::abs(partial - limit) / std::abs(limit)}}
                        .dump(2) +
                    "\n");
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
