#include "rsp/io.hpp"

#include "rsp/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <set>

namespace rsp {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

/// Rejects keys outside `allowed` so that typos in configs surface immediately.
void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!ok.count(item.key())) bad("unknown key '" + item.key() + "' in " + where);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

/// Non-finite doubles are written as null and read back as NaN.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double as_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

Json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }
Complex complex_from_json(const Json& j) { return {get<double>(j, "re"), get<double>(j, "im")}; }

Json cmatrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix cmatrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("expected a non-empty array of rows");
  CMatrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != static_cast<std::size_t>(m.cols())) bad("ragged complex matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Json range_to_json(const Range& r) { return Json::array({r.lower, r.upper}); }
Range range_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("a range is written [lower, upper]");
  return {j[0].get<double>(), j[1].get<double>()};
}
std::optional<Range> range_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return range_from_json(j.at(key));
}

char regime_letter(const Json& j) {
  const auto s = j.get<std::string>();
  if (s.size() != 1 || s[0] < 'A' || s[0] > 'C') bad("regime must be \"A\", \"B\" or \"C\"");
  return s[0];
}

RegimeCase regime_case(const Json& j) { return static_cast<RegimeCase>(regime_letter(j) - 'A'); }

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("expected a non-empty array of rows");
  Matrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(m.cols())) bad("ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = as_number(j[r][c]);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = as_number(j[i]);
  return v;
}

Json to_json(const WeightedNetwork& net) { return {{"n", net.size()}, {"weights", matrix_to_json(net.weights())}}; }

WeightedNetwork network_from_json(const Json& j) {
  only_keys(j, {"n", "weights"}, "network");
  const Matrix w = matrix_from_json(field(j, "weights"));
  if (j.contains("n") && get<int>(j, "n") != w.rows())
    throw Error(ErrorKind::DimensionMismatch, "declared n differs from the weight matrix size");
  return build_network(w);
}

Json to_json(const SpectralData& spec) {
  Json eig = Json::array();
  for (const auto& l : spec.eigenvalues) eig.push_back(complex_to_json(l));
  Json out{{"n", spec.size()},
           {"eigenvalues", eig},
           {"left", cmatrix_to_json(spec.left)},
           {"right", cmatrix_to_json(spec.right)},
           {"v1", vector_to_json(spec.v1)}};
  out["lambda_star"] = spec.lambda_star ? complex_to_json(*spec.lambda_star) : Json(nullptr);
  return out;
}

SpectralData spectral_from_json(const Json& j) {
  only_keys(j, {"n", "eigenvalues", "left", "right", "v1", "lambda_star"}, "spectrum");
  SpectralData s;
  for (const auto& e : field(j, "eigenvalues")) s.eigenvalues.push_back(complex_from_json(e));
  s.left = cmatrix_from_json(field(j, "left"));
  s.right = cmatrix_from_json(field(j, "right"));
  s.v1 = vector_from_json(field(j, "v1"));
  if (j.contains("lambda_star") && !j.at("lambda_star").is_null()) s.lambda_star = complex_from_json(j.at("lambda_star"));
  const auto n = static_cast<Eigen::Index>(s.eigenvalues.size());
  if (s.left.rows() != n || s.left.cols() != n || s.right.rows() != n || s.right.cols() != n || s.v1.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "spectrum components disagree in size");
  return s;
}

Json to_json(const RegimeClassification& regime) {
  return {{"case", std::string(1, to_char(regime.regime))},
          {"gamma", regime.gamma},
          {"c", regime.c},
          {"tol", regime.tol},
          {"a_star", regime.a_star},
          {"m_star", regime.m_star()}};
}

RegimeClassification regime_from_json(const Json& j) {
  only_keys(j, {"case", "gamma", "c", "tol", "a_star", "m_star"}, "regime");
  RegimeClassification r;
  r.regime = regime_case(field(j, "case"));
  r.gamma = get<double>(j, "gamma");
  r.c = get<double>(j, "c");
  r.tol = get_or<double>(j, "tol", kRegimeTolerance);
  r.a_star = get_or<std::vector<int>>(j, "a_star", {});
  return r;
}

Json to_json(const CovarianceReport& report) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (report.sigma_hat + report.sigma_hat.transpose()),
                                               Eigen::EigenvaluesOnly);
  return {{"regime", to_json(report.regime)},
          {"sigma_tilde_sq", report.sigma_tilde_sq},
          {"sigma_tilde", matrix_to_json(report.sigma_tilde)},
          {"sigma_hat", matrix_to_json(report.sigma_hat)},
          {"sigma_hat_eigenvalues", vector_to_json(solver.eigenvalues().reverse())},
          {"rank_hat", report.rank_hat},
          {"expected_rank", report.expected_rank},
          {"max_imag", report.max_imag},
          {"pairwise", matrix_to_json(report.pairwise)},
          {"flagged_vertices", report.flagged_vertices},
          {"diagnostic", report.diagnostic}};
}

CovarianceReport covariance_from_json(const Json& j) {
  only_keys(j,
            {"regime", "sigma_tilde_sq", "sigma_tilde", "sigma_hat", "sigma_hat_eigenvalues", "rank_hat",
             "expected_rank", "max_imag", "pairwise", "flagged_vertices", "diagnostic"},
            "covariance report");
  CovarianceReport r;
  r.regime = regime_from_json(field(j, "regime"));
  r.sigma_tilde_sq = get<double>(j, "sigma_tilde_sq");
  r.sigma_tilde = matrix_from_json(field(j, "sigma_tilde"));
  r.sigma_hat = matrix_from_json(field(j, "sigma_hat"));
  r.rank_hat = get<int>(j, "rank_hat");
  r.expected_rank = get<int>(j, "expected_rank");
  r.max_imag = get_or<double>(j, "max_imag", 0.0);
  r.pairwise = matrix_from_json(field(j, "pairwise"));
  r.flagged_vertices = get_or<std::vector<int>>(j, "flagged_vertices", {});
  r.diagnostic = get_or<std::string>(j, "diagnostic", "");
  return r;
}

Json to_json(const ConfidenceInterval& ci) {
  return {{"lower", ci.lower}, {"upper", ci.upper}, {"level", ci.level}, {"center", ci.center},
          {"half_width", ci.half_width}};
}

ConfidenceInterval interval_from_json(const Json& j) {
  only_keys(j, {"lower", "upper", "level", "center", "half_width"}, "confidence interval");
  return {get<double>(j, "lower"), get<double>(j, "upper"), get<double>(j, "level"), get<double>(j, "center"),
          get<double>(j, "half_width")};
}

Json to_json(const TestResult& t) {
  return {{"statistic", t.statistic},
          {"dof", t.dof},
          {"p_value", t.p_value},
          {"critical_value", t.critical_value},
          {"significance", t.significance},
          {"reject", t.reject},
          {"regime", std::string(1, to_char(t.regime))}};
}

TestResult test_result_from_json(const Json& j) {
  only_keys(j, {"statistic", "dof", "p_value", "critical_value", "significance", "reject", "regime"}, "test result");
  TestResult t;
  t.statistic = get<double>(j, "statistic");
  t.dof = get<int>(j, "dof");
  t.p_value = get<double>(j, "p_value");
  t.critical_value = get<double>(j, "critical_value");
  t.significance = get<double>(j, "significance");
  t.reject = get<bool>(j, "reject");
  t.regime = regime_case(field(j, "regime"));
  return t;
}

TrajectorySummary summarize(const Trajectory& trajectory) {
  TrajectorySummary s;
  s.final_step = trajectory.final_state.step;
  s.final_state = trajectory.final_state.z;
  s.spread = spread(trajectory.final_state.z);
  s.seed = trajectory.seed;
  s.replication = trajectory.replication;
  const WeightedNetwork net = build_network(trajectory.weights);
  if (net.irreducible()) s.z_tilde = perron_component(decompose(net).v1, trajectory.final_state.z);
  return s;
}

Json to_json(const TrajectorySummary& s) {
  return {{"final_step", s.final_step},
          {"final_state", vector_to_json(s.final_state)},
          {"z_tilde", s.z_tilde ? Json(*s.z_tilde) : Json(nullptr)},
          {"spread", s.spread},
          {"seed", s.seed},
          {"replication", s.replication}};
}

TrajectorySummary trajectory_summary_from_json(const Json& j) {
  only_keys(j, {"final_step", "final_state", "z_tilde", "spread", "seed", "replication"}, "trajectory summary");
  TrajectorySummary s;
  s.final_step = get<long>(j, "final_step");
  s.final_state = vector_from_json(field(j, "final_state"));
  s.z_tilde = get_opt<double>(j, "z_tilde");
  s.spread = get<double>(j, "spread");
  s.seed = get<std::uint64_t>(j, "seed");
  s.replication = get_or<std::uint64_t>(j, "replication", 0);
  return s;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const auto n = trajectory.z0.size();
  out << "n";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",Z_" << i;
  out << '\n';
  for (const auto& snap : trajectory.recorded) {
    out << snap.step;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(snap.z(i));
    out << '\n';
  }
}

Json to_json(const NetworkSpec& spec) {
  Json out{{"generator", spec.generator}};
  if (spec.generator == "mean-field") {
    out["n"] = spec.n;
    out["alpha"] = spec.alpha;
  } else if (spec.generator == "cycle") {
    out["n"] = spec.n;
  } else if (spec.generator == "special-vertex") {
    out["n"] = spec.n;
    out["p"] = spec.p;
  } else if (spec.generator == "matrix") {
    out["weights"] = matrix_to_json(spec.weights);
  } else if (spec.blocks) {
    Json leaders = Json::array();
    for (const auto& b : spec.blocks->leader_blocks) leaders.push_back(matrix_to_json(b));
    Json couplings = Json::array();
    for (const auto& b : spec.blocks->coupling_blocks) couplings.push_back(matrix_to_json(b));
    out["leaders"] = leaders;
    out["couplings"] = couplings;
    out["follower"] = spec.blocks->follower_block ? matrix_to_json(*spec.blocks->follower_block) : Json(nullptr);
  }
  return out;
}

NetworkSpec network_spec_from_json(const Json& j) {
  only_keys(j, {"generator", "n", "alpha", "p", "weights", "leaders", "follower", "couplings"}, "network spec");
  NetworkSpec s;
  s.generator = get<std::string>(j, "generator");
  s.n = get_or<int>(j, "n", s.n);
  s.alpha = get_or<double>(j, "alpha", s.alpha);
  s.p = get_or<double>(j, "p", s.p);
  if (s.generator == "matrix") s.weights = matrix_from_json(field(j, "weights"));
  if (s.generator == "blocks") {
    BlockSpec b;
    for (const auto& m : field(j, "leaders")) b.leader_blocks.push_back(matrix_from_json(m));
    if (j.contains("follower") && !j.at("follower").is_null()) b.follower_block = matrix_from_json(j.at("follower"));
    if (j.contains("couplings"))
      for (const auto& m : j.at("couplings")) b.coupling_blocks.push_back(matrix_from_json(m));
    s.blocks = std::move(b);
  }
  return s;
}

Json to_json(const CheckSpec& check) {
  Json out{{"kind", check_kind(check)}};
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MartingaleCheck>) {
          out["at"] = c.at;
          out["max_standard_errors"] = c.max_standard_errors;
        } else if constexpr (std::is_same_v<T, SynchronizationCheck>) {
          out["early"] = c.early;
          out["late"] = c.late;
          out["max_median_spread"] = c.max_median_spread;
        } else if constexpr (std::is_same_v<T, SyncCltCheck>) {
          out["n"] = c.n;
          out["j"] = c.j;
          out["k"] = c.k;
          out["variance_ratio"] = range_to_json(c.variance_ratio);
          if (c.max_ks) out["max_ks"] = *c.max_ks;
          if (c.rate_relative_tolerance) out["rate_relative_tolerance"] = *c.rate_relative_tolerance;
        } else if constexpr (std::is_same_v<T, ConvergenceCltCheck>) {
          out["n"] = c.n;
          out["proxy"] = c.proxy;
          out["stability"] = c.stability;
          out["ratio"] = range_to_json(c.ratio);
        } else if constexpr (std::is_same_v<T, TestCalibrationCheck>) {
          out["n"] = c.n;
          out["hypothesized"] = to_json(c.hypothesized);
          out["significance"] = c.significance;
          if (c.size) out["size"] = range_to_json(*c.size);
          if (c.mean_statistic) out["mean_statistic"] = range_to_json(*c.mean_statistic);
          if (c.max_ks_uniform) out["max_ks_uniform"] = *c.max_ks_uniform;
        } else if constexpr (std::is_same_v<T, CiCoverageCheck>) {
          out["n"] = c.n;
          out["proxy"] = c.proxy;
          out["level"] = c.level;
          out["coverage"] = range_to_json(c.coverage);
        } else if constexpr (std::is_same_v<T, ForcingCheck>) {
          out["at"] = c.at;
          out["max_deviation"] = c.max_deviation;
          out["max_spread"] = c.max_spread;
        } else if constexpr (std::is_same_v<T, ReducibleCheck>) {
          out["at"] = c.at;
          out["margin"] = c.margin;
          out["max_block_spread"] = c.max_block_spread;
        } else {
          out["at"] = c.at;
          out["interior_low"] = c.interior_low;
          out["interior_high"] = c.interior_high;
          out["min_interior_fraction"] = c.min_interior_fraction;
          out["bins"] = c.bins;
          out["max_interior_bin_mass"] = c.max_interior_bin_mass;
        }
      },
      check);
  return out;
}

CheckSpec check_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "martingale") {
    only_keys(j, {"kind", "at", "max_standard_errors"}, kind);
    MartingaleCheck c;
    c.at = get_or(j, "at", c.at);
    c.max_standard_errors = get_or(j, "max_standard_errors", c.max_standard_errors);
    return c;
  }
  if (kind == "synchronization") {
    only_keys(j, {"kind", "early", "late", "max_median_spread"}, kind);
    SynchronizationCheck c;
    c.early = get_or(j, "early", c.early);
    c.late = get_or(j, "late", c.late);
    c.max_median_spread = get_or(j, "max_median_spread", c.max_median_spread);
    return c;
  }
  if (kind == "sync_clt") {
    only_keys(j, {"kind", "n", "j", "k", "variance_ratio", "max_ks", "rate_relative_tolerance"}, kind);
    SyncCltCheck c;
    c.n = get<long>(j, "n");
    c.j = get_or(j, "j", c.j);
    c.k = get_or(j, "k", c.k);
    if (auto r = range_opt(j, "variance_ratio")) c.variance_ratio = *r;
    c.max_ks = get_opt<double>(j, "max_ks");
    c.rate_relative_tolerance = get_opt<double>(j, "rate_relative_tolerance");
    return c;
  }
  if (kind == "convergence_clt") {
    only_keys(j, {"kind", "n", "proxy", "stability", "ratio"}, kind);
    ConvergenceCltCheck c;
    c.n = get<long>(j, "n");
    c.proxy = get_or(j, "proxy", c.proxy);
    c.stability = get_or(j, "stability", c.stability);
    if (auto r = range_opt(j, "ratio")) c.ratio = *r;
    return c;
  }
  if (kind == "test_calibration") {
    only_keys(j, {"kind", "n", "hypothesized", "significance", "size", "mean_statistic", "max_ks_uniform"}, kind);
    TestCalibrationCheck c;
    c.n = get<long>(j, "n");
    c.hypothesized = network_spec_from_json(field(j, "hypothesized"));
    c.significance = get_or(j, "significance", c.significance);
    c.size = range_opt(j, "size");
    c.mean_statistic = range_opt(j, "mean_statistic");
    c.max_ks_uniform = get_opt<double>(j, "max_ks_uniform");
    return c;
  }
  if (kind == "ci_coverage") {
    only_keys(j, {"kind", "n", "proxy", "level", "coverage"}, kind);
    CiCoverageCheck c;
    c.n = get<long>(j, "n");
    c.proxy = get_or(j, "proxy", c.proxy);
    c.level = get_or(j, "level", c.level);
    if (auto r = range_opt(j, "coverage")) c.coverage = *r;
    return c;
  }
  if (kind == "forcing") {
    only_keys(j, {"kind", "at", "max_deviation", "max_spread"}, kind);
    ForcingCheck c;
    c.at = get_or(j, "at", c.at);
    c.max_deviation = get_or(j, "max_deviation", c.max_deviation);
    c.max_spread = get_or(j, "max_spread", c.max_spread);
    return c;
  }
  if (kind == "reducible") {
    only_keys(j, {"kind", "at", "margin", "max_block_spread"}, kind);
    ReducibleCheck c;
    c.at = get_or(j, "at", c.at);
    c.margin = get_or(j, "margin", c.margin);
    c.max_block_spread = get_or(j, "max_block_spread", c.max_block_spread);
    return c;
  }
  if (kind == "limit_distribution") {
    only_keys(j,
              {"kind", "at", "interior_low", "interior_high", "min_interior_fraction", "bins",
               "max_interior_bin_mass"},
              kind);
    LimitDistributionCheck c;
    c.at = get_or(j, "at", c.at);
    c.interior_low = get_or(j, "interior_low", c.interior_low);
    c.interior_high = get_or(j, "interior_high", c.interior_high);
    c.min_interior_fraction = get_or(j, "min_interior_fraction", c.min_interior_fraction);
    c.bins = get_or(j, "bins", c.bins);
    c.max_interior_bin_mass = get_or(j, "max_interior_bin_mass", c.max_interior_bin_mass);
    if (c.bins < 3) bad("limit_distribution needs at least 3 bins");
    return c;
  }
  bad("unknown check kind '" + kind + "'");
}

Json to_json(const ExperimentConfig& config) {
  Json checks = Json::array();
  for (const auto& c : config.checks) checks.push_back(to_json(c));
  Json out{{"name", config.name},
           {"network", to_json(config.network)},
           {"gamma", config.gamma},
           {"c", config.c},
           {"n0", config.schedule().offset()},
           {"z0", vector_to_json(config.z0)},
           {"horizon", config.horizon},
           {"replications", config.replications},
           {"seed", config.seed},
           {"checkpoints", config.checkpoints},
           {"degenerate_delta", config.degenerate_delta},
           {"checks", checks}};
  out["forcing"] = config.forcing ? Json{{"rho", config.forcing->rho}, {"q", config.forcing->q}} : Json(nullptr);
  return out;
}

ExperimentConfig config_from_json(const Json& j) {
  only_keys(j,
            {"name", "network", "gamma", "c", "n0", "z0", "horizon", "replications", "seed", "forcing", "checkpoints",
             "degenerate_delta", "checks"},
            "experiment");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name);
  c.network = network_spec_from_json(field(j, "network"));
  c.gamma = get_or(j, "gamma", c.gamma);
  c.c = get_or(j, "c", c.c);
  c.n0 = get_opt<long>(j, "n0");
  const Json& z0 = field(j, "z0");
  if (z0.is_number()) {
    c.z0 = Vector::Constant(c.network.build().size(), z0.get<double>());
  } else {
    c.z0 = vector_from_json(z0);
  }
  c.horizon = get_or(j, "horizon", c.horizon);
  c.replications = get_or(j, "replications", c.replications);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("forcing") && !j.at("forcing").is_null()) {
    const Json& f = j.at("forcing");
    only_keys(f, {"rho", "q"}, "forcing");
    c.forcing = ForcingVariant{get<double>(f, "rho"), get<double>(f, "q")};
  }
  c.checkpoints = get_or<std::vector<long>>(j, "checkpoints", {});
  c.degenerate_delta = get_or(j, "degenerate_delta", c.degenerate_delta);
  if (j.contains("checks"))
    for (const auto& check : j.at("checks")) c.checks.push_back(check_from_json(check));
  c.validate();
  return c;
}

std::vector<ExperimentConfig> suite_from_json(const Json& j) {
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    only_keys(j, {"experiments"}, "suite");
    for (const auto& e : j.at("experiments")) out.push_back(config_from_json(e));
  } else {
    out.push_back(config_from_json(j));
  }
  return out;
}

Json to_json(const EnsembleSummary& s) {
  Json states = Json::array();
  for (const auto& m : s.states) states.push_back(matrix_to_json(m));
  Json terminal = Json::array();
  for (double z : s.terminal_z_tilde) terminal.push_back(number(z));
  Json spreads = Json::array();
  for (double z : s.terminal_spread) spreads.push_back(number(z));
  return {{"name", s.name},
          {"replications", s.replications},
          {"checkpoints", s.checkpoints},
          {"states", states},
          {"terminal_z_tilde", terminal},
          {"terminal_spread", spreads},
          {"mean_z_tilde", number(s.mean_z_tilde)},
          {"var_z_tilde", number(s.var_z_tilde)},
          {"mean_spread", number(s.mean_spread)},
          {"var_spread", number(s.var_spread)}};
}

EnsembleSummary ensemble_summary_from_json(const Json& j) {
  only_keys(j,
            {"name", "replications", "checkpoints", "states", "terminal_z_tilde", "terminal_spread", "mean_z_tilde",
             "var_z_tilde", "mean_spread", "var_spread"},
            "ensemble summary");
  EnsembleSummary s;
  s.name = get<std::string>(j, "name");
  s.replications = get<long>(j, "replications");
  s.checkpoints = get<std::vector<long>>(j, "checkpoints");
  for (const auto& m : field(j, "states")) s.states.push_back(matrix_from_json(m));
  for (const auto& z : field(j, "terminal_z_tilde")) s.terminal_z_tilde.push_back(as_number(z));
  for (const auto& z : field(j, "terminal_spread")) s.terminal_spread.push_back(as_number(z));
  s.mean_z_tilde = as_number(field(j, "mean_z_tilde"));
  s.var_z_tilde = as_number(field(j, "var_z_tilde"));
  s.mean_spread = as_number(field(j, "mean_spread"));
  s.var_spread = as_number(field(j, "var_spread"));
  if (s.states.size() != s.checkpoints.size()) bad("states and checkpoints differ in length");
  return s;
}

Json to_json(const CheckReport& r) {
  Json metrics = Json::array();
  for (const auto& m : r.metrics) {
    Json jm{{"name", m.name}, {"observed", number(m.observed)}, {"pass", m.pass}};
    jm["expected"] = m.expected ? number(*m.expected) : Json(nullptr);
    jm["bounds"] = m.bounds ? range_to_json(*m.bounds) : Json(nullptr);
    metrics.push_back(std::move(jm));
  }
  return {{"experiment", r.experiment}, {"kind", r.kind},         {"passed", r.passed},
          {"used", r.used},             {"excluded", r.excluded}, {"metrics", metrics}};
}

CheckReport check_report_from_json(const Json& j) {
  only_keys(j, {"experiment", "kind", "passed", "used", "excluded", "metrics"}, "check report");
  CheckReport r;
  r.experiment = get<std::string>(j, "experiment");
  r.kind = get<std::string>(j, "kind");
  r.passed = get<bool>(j, "passed");
  r.used = get<long>(j, "used");
  r.excluded = get<long>(j, "excluded");
  for (const auto& jm : field(j, "metrics")) {
    Metric m;
    m.name = get<std::string>(jm, "name");
    m.observed = as_number(field(jm, "observed"));
    m.pass = get<bool>(jm, "pass");
    if (jm.contains("expected") && !jm.at("expected").is_null()) m.expected = as_number(jm.at("expected"));
    m.bounds = range_opt(jm, "bounds");
    r.metrics.push_back(std::move(m));
  }
  return r;
}

void write_report_csv(std::ostream& out, const CheckReport& report) {
  for (std::size_t i = 0; i < report.table_header.size(); ++i) out << (i ? "," : "") << report.table_header[i];
  out << '\n';
  for (const auto& row : report.table_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace rsp
