#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lrr/cli_config.hpp"
#include "lrr/concentration.hpp"
#include "lrr/io.hpp"
#include "lrr/linalg.hpp"
#include "lrr/nets.hpp"
#include "lrr/prob.hpp"
#include "lrr/recovery.hpp"
#include "lrr/rng.hpp"
#include "lrr/sensing.hpp"
#include "lrr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using lrr::Index;
using lrr::Matrix;
using lrr::Vector;

namespace {

/// Tracks every file an experiment creates so a failed run can remove its
/// partial outputs.
struct Outputs {
  fs::path dir;
  std::vector<fs::path> written;

  explicit Outputs(const fs::path& d) : dir(d) { fs::create_directories(dir); }

  fs::path file(const std::string& name) {
    fs::path p = dir / name;
    written.push_back(p);
    return p;
  }

  void discard() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

void write_json_out(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot open " + path.string() + " for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw std::invalid_argument("write failed: " + path.string());
  }
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot open " + path.string() + " for writing");
  }
  return out;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

void check_params(const json& params, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required) {
  for (const auto& [key, value] : params.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("unknown parameter '" + key + "'");
    }
  }
  for (const auto& key : required) {
    if (!params.contains(key)) {
      throw std::invalid_argument("missing parameter '" + key + "'");
    }
  }
}

long p_int(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number_integer()) {
    throw std::invalid_argument(std::string("parameter '") + key +
                                "' must be an integer");
  }
  return p[key].get<long>();
}

long p_int_or(const json& p, const char* key, long def) {
  return p.contains(key) ? p_int(p, key) : def;
}

double p_num(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number()) {
    throw std::invalid_argument(std::string("parameter '") + key +
                                "' must be a number");
  }
  return p[key].get<double>();
}

double p_num_or(const json& p, const char* key, double def) {
  return p.contains(key) ? p_num(p, key) : def;
}

std::string p_str(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_string()) {
    throw std::invalid_argument(std::string("parameter '") + key +
                                "' must be a string");
  }
  return p[key].get<std::string>();
}

std::vector<double> p_fvec(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_array() || p[key].empty()) {
    throw std::invalid_argument(std::string("parameter '") + key +
                                "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : p[key]) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("parameter '") + key +
                                  "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<long> p_ivec(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_array() || p[key].empty()) {
    throw std::invalid_argument(std::string("parameter '") + key +
                                "' must be a non-empty array of integers");
  }
  std::vector<long> out;
  for (const auto& v : p[key]) {
    if (!v.is_number_integer()) {
      throw std::invalid_argument(std::string("parameter '") + key +
                                  "' must contain only integers");
    }
    out.push_back(v.get<long>());
  }
  return out;
}

Vector column_vector(const Matrix& m, const std::string& what) {
  if (m.cols() != 1) {
    throw std::invalid_argument(what + ": expected a single-column CSV");
  }
  return m.col(0);
}

void write_tail_csv(std::ofstream& out, const lrr::TailReport& rep,
                    std::uint64_t seed) {
  out << "t,empirical,bound,trials,seed\n";
  for (std::size_t i = 0; i < rep.thresholds.size(); ++i) {
    out << lrr::format_float(rep.thresholds[i]) << ','
        << lrr::format_float(rep.empirical[i]) << ','
        << lrr::format_float(rep.bound[i]) << ',' << rep.trials << ',' << seed
        << '\n';
  }
}

json tail_report_json(const lrr::TailReport& rep) {
  json j;
  j["thresholds"] = rep.thresholds;
  j["empirical"] = rep.empirical;
  j["bound"] = rep.bound;
  j["trials"] = rep.trials;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommand runners. Each writes its CSVs plus report.json and returns the
// tolerance constants that belong in the manifest.

json run_caratheodory(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"points", "weights", "terms"}, {"points", "terms"});
  lrr::PointSet ps = lrr::read_point_set_csv(p_str(cfg.params, "points"));
  const long n_points = static_cast<long>(ps.points.size());
  Vector weights;
  if (cfg.params.contains("weights")) {
    weights = column_vector(lrr::read_matrix_csv(p_str(cfg.params, "weights")),
                            "weights");
  } else {
    weights = Vector::Constant(n_points, 1.0 / static_cast<double>(n_points));
  }
  const long terms = p_int(cfg.params, "terms");
  lrr::RngStream root(cfg.seed);
  std::ofstream csv = open_csv(out.file("caratheodory.csv"));
  csv << "rep,err\n";
  double sum_sq = 0.0;
  for (long rep = 0; rep < cfg.trials; ++rep) {
    lrr::RngStream s = root.fork(static_cast<std::uint64_t>(rep));
    const lrr::CaratheodoryResult res =
        lrr::approx_caratheodory(ps, weights, terms, s);
    csv << rep << ',' << lrr::format_float(res.err) << '\n';
    sum_sq += res.err * res.err;
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(cfg.trials));
  const double rad = lrr::radius(ps);
  json report;
  report["rms_error"] = rms;
  report["radius"] = rad;
  report["terms"] = terms;
  report["radius_over_sqrt_terms"] = rad / std::sqrt(static_cast<double>(terms));
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_montecarlo(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"integrand", "dim"}, {"integrand", "dim"});
  const std::string integrand = p_str(cfg.params, "integrand");
  const int dim = static_cast<int>(p_int(cfg.params, "dim"));
  if (dim < 1) throw std::invalid_argument("dim must be positive");
  std::function<double(lrr::RngStream&)> sampler;
  double exact = 0.0;
  double f_l2 = 0.0;
  const double d = static_cast<double>(dim);
  if (integrand == "norm-sq") {
    sampler = [dim](lrr::RngStream& s) {
      return lrr::gaussian_vector(s, dim).squaredNorm();
    };
    exact = d;
    f_l2 = std::sqrt(d * d + 2.0 * d);
  } else if (integrand == "cos-sum") {
    sampler = [dim](lrr::RngStream& s) {
      return std::cos(lrr::gaussian_vector(s, dim).sum());
    };
    exact = std::exp(-d / 2.0);
    f_l2 = std::sqrt(0.5 * (1.0 + std::exp(-2.0 * d)));
  } else {
    throw std::invalid_argument("integrand must be 'norm-sq' or 'cos-sum'");
  }
  lrr::RngStream root(cfg.seed);
  const lrr::MonteCarloResult res =
      lrr::monte_carlo_integrate(sampler, cfg.trials, root, f_l2);
  std::ofstream csv = open_csv(out.file("montecarlo.csv"));
  csv << "estimate,exact,abs_error,rms_bound,samples\n";
  csv << lrr::format_float(res.estimate) << ',' << lrr::format_float(exact) << ','
      << lrr::format_float(std::abs(res.estimate - exact)) << ','
      << lrr::format_float(res.rms_bound.value()) << ',' << cfg.trials << '\n';
  json report;
  report["estimate"] = res.estimate;
  report["exact"] = exact;
  report["abs_error"] = std::abs(res.estimate - exact);
  report["rms_bound"] = res.rms_bound.value();
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_chi2_tails(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"m", "eps"}, {"m", "eps"});
  const int m = static_cast<int>(p_int(cfg.params, "m"));
  const double eps = p_num(cfg.params, "eps");
  lrr::RngStream root(cfg.seed);
  const lrr::TailReport rep =
      lrr::chi2_tail_experiment(m, eps, cfg.trials, root, cfg.threads);
  std::ofstream csv = open_csv(out.file("chi2.csv"));
  write_tail_csv(csv, rep, cfg.seed);
  json report = tail_report_json(rep);
  report["slack"] = lrr::tail_slack(rep.bound.front(), rep.trials);
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_jl(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"points", "eps", "m"}, {"points", "eps"});
  lrr::PointSet ps = lrr::read_point_set_csv(p_str(cfg.params, "points"));
  const double eps = p_num(cfg.params, "eps");
  const long m = p_int_or(cfg.params, "m",
                          lrr::jl_min_dim(static_cast<long>(ps.points.size()), eps));
  lrr::RngStream root(cfg.seed);
  const lrr::JlResult res = lrr::jl_embed(ps, eps, static_cast<int>(m), root);
  lrr::write_point_set_csv(out.file("embedded.csv"), res.embedded);
  json report;
  report["m"] = m;
  report["eps"] = eps;
  report["max_distortion"] = res.max_distortion;
  report["success"] = res.success;
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_nets(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"ambient", "n", "k", "r", "eps", "cap"},
               {"ambient", "n", "eps"});
  const std::string ambient = p_str(cfg.params, "ambient");
  const int n = static_cast<int>(p_int(cfg.params, "n"));
  const int k = static_cast<int>(p_int_or(cfg.params, "k", 0));
  const int r = static_cast<int>(p_int_or(cfg.params, "r", 0));
  const double eps = p_num(cfg.params, "eps");
  const long cap = p_int_or(cfg.params, "cap", 1000000);
  lrr::RngStream root(cfg.seed);
  lrr::Net net;
  double bound = 0.0;
  if (ambient == "sphere") {
    net = lrr::sphere_net(n, eps, root, cap);
    bound = lrr::net_cardinality_bound(eps, n);
  } else if (ambient == "ball") {
    net = lrr::ball_net(n, eps, root, cap);
    bound = lrr::net_cardinality_bound(eps, n);
  } else if (ambient == "stiefel") {
    net = lrr::stiefel_net(n, k, eps, root, cap);
    bound = lrr::net_cardinality_bound(eps, static_cast<double>(n) * k);
  } else if (ambient == "lowrank") {
    net = lrr::lowrank_net(n, k, r, eps, root, cap);
    bound = lrr::net_cardinality_bound(eps / 5.0,
                                       static_cast<double>(r) * (n + k + 1));
  } else {
    throw std::invalid_argument(
        "ambient must be one of sphere, ball, stiefel, lowrank");
  }
  lrr::write_net_csv(out.file("net.csv"), net);
  out.file("net.csv.json"); // sidecar written by write_net_csv
  json report;
  report["ambient"] = ambient;
  report["count"] = net.elements.size();
  report["cardinality_bound"] = finite_or_string(bound);
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_rip_sparse(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"rows", "cols", "k"}, {"rows", "cols", "k"});
  const int rows = static_cast<int>(p_int(cfg.params, "rows"));
  const int cols = static_cast<int>(p_int(cfg.params, "cols"));
  const int k = static_cast<int>(p_int(cfg.params, "k"));
  if (rows < 1 || cols < 1) throw std::invalid_argument("rows, cols must be positive");
  lrr::RngStream root(cfg.seed);
  std::ofstream csv = open_csv(out.file("rip_sparse.csv"));
  csv << "trial,delta\n";
  double max_delta = 0.0;
  long below_third = 0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (long t = 0; t < cfg.trials; ++t) {
    lrr::RngStream s = root.fork(static_cast<std::uint64_t>(t));
    Matrix a(rows, cols);
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) a(i, j) = scale * s.next_gaussian();
    const double delta = lrr::sparse_rip_constant(a, k);
    csv << t << ',' << lrr::format_float(delta) << '\n';
    max_delta = std::max(max_delta, delta);
    if (delta < 1.0 / 3.0) ++below_third;
  }
  json report;
  report["max_delta"] = max_delta;
  report["frac_below_one_third"] =
      static_cast<double>(below_third) / static_cast<double>(cfg.trials);
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_rip_matrix(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"n", "cols", "r", "m", "probes", "delta", "eps"},
               {"n", "cols", "r", "m"});
  const int n = static_cast<int>(p_int(cfg.params, "n"));
  const int cols = static_cast<int>(p_int(cfg.params, "cols"));
  const int r = static_cast<int>(p_int(cfg.params, "r"));
  const long m = p_int(cfg.params, "m");
  const long probes = p_int_or(cfg.params, "probes", 200);
  const double delta = p_num_or(cfg.params, "delta", 0.25);
  const double eps = p_num_or(cfg.params, "eps", 0.01);
  lrr::RngStream root(cfg.seed);
  const lrr::GaussianMap map =
      lrr::gaussian_map_new(root, static_cast<int>(m), n, cols);
  const double estimate = lrr::matrix_rip_estimate(map, r, probes, root);
  std::ofstream csv = open_csv(out.file("rip_matrix.csv"));
  csv << "m,estimate\n";
  csv << m << ',' << lrr::format_float(estimate) << '\n';
  json report;
  report["estimate"] = estimate;
  report["suggested_m"] = lrr::matrix_rip_suggested_m(n, cols, r, delta, eps);
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json nsp_report_json(const lrr::NspReport& rep) {
  json j;
  j["violated"] = rep.violated;
  j["margin"] = finite_or_string(rep.margin);
  j["budget_used"] = rep.budget_used;
  return j;
}

json run_nsp(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"matrix", "k", "budget"}, {"matrix", "k"});
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "matrix"));
  const int k = static_cast<int>(p_int(cfg.params, "k"));
  const long budget = p_int_or(cfg.params, "budget", 10000);
  lrr::RngStream root(cfg.seed);
  const lrr::NspReport rep = lrr::nsp_falsify(a, k, budget, root);
  if (rep.witness) {
    lrr::write_matrix_csv(out.file("witness.csv"), *rep.witness);
  }
  write_json_out(out.file("report.json"), nsp_report_json(rep));
  return json{{"tie_tolerance", 1e-12}};
}

json run_rank_nsp(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"operator", "map", "r", "budget"}, {"r"});
  const bool has_op = cfg.params.contains("operator");
  const bool has_map = cfg.params.contains("map");
  if (has_op == has_map) {
    throw std::invalid_argument("provide exactly one of 'operator' or 'map'");
  }
  std::optional<lrr::Measurement> meas;
  if (has_op) {
    meas.emplace(lrr::read_sampling_operator_json(p_str(cfg.params, "operator")));
  } else {
    meas.emplace(lrr::read_gaussian_map_json(p_str(cfg.params, "map")));
  }
  const int r = static_cast<int>(p_int(cfg.params, "r"));
  const long budget = p_int_or(cfg.params, "budget", 10000);
  lrr::RngStream root(cfg.seed);
  const lrr::NspReport rep = lrr::rank_nsp_falsify(*meas, r, budget, root);
  if (rep.witness) {
    lrr::write_matrix_csv(out.file("witness.csv"), *rep.witness);
  }
  write_json_out(out.file("report.json"), nsp_report_json(rep));
  return json{{"tie_tolerance", 1e-12}};
}

json run_complete(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params,
               {"matrix", "operator", "y", "basis", "m", "step", "tol_residual",
                "tol_change", "max_iter"},
               {});
  lrr::SolverConfig sc;
  sc.step = p_num_or(cfg.params, "step", sc.step);
  sc.tol_residual = p_num_or(cfg.params, "tol_residual", sc.tol_residual);
  sc.tol_change = p_num_or(cfg.params, "tol_change", sc.tol_change);
  sc.max_iter = p_int_or(cfg.params, "max_iter", sc.max_iter);

  std::optional<Matrix> truth;
  if (cfg.params.contains("matrix")) {
    truth = lrr::read_matrix_csv(p_str(cfg.params, "matrix"));
  }
  lrr::RngStream root(cfg.seed);
  std::optional<lrr::Measurement> meas;
  if (cfg.params.contains("operator")) {
    meas.emplace(lrr::read_sampling_operator_json(p_str(cfg.params, "operator")));
  } else {
    if (!truth || !cfg.params.contains("basis") || !cfg.params.contains("m")) {
      throw std::invalid_argument(
          "without 'operator', completion needs 'matrix', 'basis', and 'm'");
    }
    if (p_str(cfg.params, "basis") != "entry") {
      throw std::invalid_argument("only the 'entry' basis can be sampled here");
    }
    if (truth->rows() != truth->cols()) {
      throw std::invalid_argument("entry sampling needs a square matrix");
    }
    const int n = static_cast<int>(truth->rows());
    lrr::SamplingOperator op = lrr::sample_operator(
        lrr::OperatorBasis::entry(n), p_int(cfg.params, "m"), true, root);
    lrr::write_sampling_operator_json(out.file("operator.json"), op);
    meas.emplace(std::move(op));
  }
  Vector y;
  if (cfg.params.contains("y")) {
    y = column_vector(lrr::read_matrix_csv(p_str(cfg.params, "y")), "y");
  } else if (truth) {
    y = meas->measure(*truth);
  } else {
    throw std::invalid_argument("provide 'y' or 'matrix' to define the data");
  }
  const lrr::RecoveryReport rep = lrr::complete(*meas, y, sc);
  lrr::write_matrix_csv(out.file("solution.csv"), rep.solution);
  json report;
  report["iterations"] = rep.iterations;
  report["constraint_residual"] = rep.constraint_residual;
  report["objective"] = rep.objective;
  report["converged"] = rep.converged;
  if (truth) {
    const double denom = std::max(1e-300, truth->norm());
    report["rel_error"] = (rep.solution - *truth).norm() / denom;
  }
  write_json_out(out.file("report.json"), report);
  return json{{"step", sc.step},
              {"tol_residual", sc.tol_residual},
              {"tol_change", sc.tol_change},
              {"max_iter", sc.max_iter}};
}

json run_golf(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"matrix", "beta", "rounds", "batch"}, {"matrix"});
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "matrix"));
  const double beta = p_num_or(cfg.params, "beta", 1.0);
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("golfing needs a square symmetric matrix");
  }
  const int n = static_cast<int>(a.rows());
  const lrr::OperatorBasis basis = lrr::OperatorBasis::entry(n);
  const lrr::TangentProjector p = lrr::tangent_projector_at(a);
  const int r = static_cast<int>(p.u_basis.cols());
  const lrr::CoherenceReport coh = lrr::coherence(basis, a, p);
  const double nu = std::max(coh.mu1, coh.mu2 * coh.mu2);
  const long rounds = p_int_or(cfg.params, "rounds", lrr::golfing_rounds(n, r));
  const long batch = p_int_or(cfg.params, "batch",
                              lrr::golfing_batch_size(nu, r, n, rounds, beta));
  lrr::RngStream root(cfg.seed);
  const std::vector<long> batch_sizes(static_cast<std::size_t>(rounds), batch);
  const lrr::DualCertificate cert =
      lrr::golfing_certificate(basis, a, p, batch_sizes, root);
  const lrr::CertificateCheck check = lrr::verify_certificate(cert, basis, a, p);
  std::ofstream csv = open_csv(out.file("golf.csv"));
  csv << "round,batch_size,residual_norm\n";
  for (std::size_t i = 0; i < cert.residual_norms.size(); ++i) {
    csv << (i + 1) << ',' << cert.batch_sizes[i] << ','
        << lrr::format_float(cert.residual_norms[i]) << '\n';
  }
  lrr::write_matrix_csv(out.file("y.csv"), cert.y);
  json report;
  report["nu"] = nu;
  report["rank"] = r;
  report["rounds"] = rounds;
  report["batch_size"] = batch;
  report["cond_tangent"] = cert.cond_tangent;
  report["cond_complement"] = cert.cond_complement;
  report["in_range"] = check.in_range;
  report["cond_ii"] = check.cond_ii;
  report["cond_iii"] = check.cond_iii;
  report["range_gap"] = check.range_gap;
  write_json_out(out.file("report.json"), report);
  return json{{"range_check_rel_tol", 1e-8},
              {"cond_ii_threshold", 1.0 / (2.0 * n * n)},
              {"cond_iii_threshold", 0.5}};
}

json run_tangent_conc(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"matrix", "m", "ts"}, {"matrix", "m", "ts"});
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "matrix"));
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("tangent concentration needs a square matrix");
  }
  const int n = static_cast<int>(a.rows());
  const lrr::OperatorBasis basis = lrr::OperatorBasis::entry(n);
  const lrr::TangentProjector p = lrr::tangent_projector_at(a);
  const long m = p_int(cfg.params, "m");
  const std::vector<double> ts = p_fvec(cfg.params, "ts");
  lrr::RngStream root(cfg.seed);
  const lrr::TailReport rep = lrr::tangent_operator_concentration(
      basis, p, m, cfg.trials, ts, root, cfg.threads);
  std::ofstream csv = open_csv(out.file("tangent_conc.csv"));
  write_tail_csv(csv, rep, cfg.seed);
  write_json_out(out.file("report.json"), tail_report_json(rep));
  return json{{"power_iterations", 200}, {"power_tolerance", 1e-10}};
}

json run_lie(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"a", "b", "ns"}, {"a", "b", "ns"});
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "a"));
  const Matrix b = lrr::read_matrix_csv(p_str(cfg.params, "b"));
  const std::vector<long> ns = p_ivec(cfg.params, "ns");
  const std::vector<double> errors = lrr::lie_product_errors(a, b, ns);
  std::ofstream csv = open_csv(out.file("lie.csv"));
  csv << "n,error\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    csv << ns[i] << ',' << lrr::format_float(errors[i]) << '\n';
  }
  json report;
  report["ns"] = ns;
  report["errors"] = errors;
  write_json_out(out.file("report.json"), report);
  return json::object();
}

json run_golden_thompson(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"a", "b"}, {"a", "b"});
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "a"));
  const Matrix b = lrr::read_matrix_csv(p_str(cfg.params, "b"));
  const auto [lhs, rhs] = lrr::golden_thompson_gap(a, b);
  std::ofstream csv = open_csv(out.file("golden_thompson.csv"));
  csv << "lhs,rhs,gap\n";
  csv << lrr::format_float(lhs) << ',' << lrr::format_float(rhs) << ','
      << lrr::format_float(rhs - lhs) << '\n';
  json report;
  report["lhs"] = lhs;
  report["rhs"] = rhs;
  report["gap"] = rhs - lhs;
  write_json_out(out.file("report.json"), report);
  return json{{"violation_rel_tol", 1e-9}};
}

json run_lieb_probe(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"h", "a", "b"}, {"h", "a", "b"});
  const Matrix h = lrr::read_matrix_csv(p_str(cfg.params, "h"));
  const Matrix a = lrr::read_matrix_csv(p_str(cfg.params, "a"));
  const Matrix b = lrr::read_matrix_csv(p_str(cfg.params, "b"));
  const double gap = lrr::lieb_concavity_probe(h, a, b);
  std::ofstream csv = open_csv(out.file("lieb.csv"));
  csv << "gap\n" << lrr::format_float(gap) << '\n';
  json report;
  report["gap"] = gap;
  write_json_out(out.file("report.json"), report);
  return json{{"violation_rel_tol", 1e-9}};
}

json run_mat_bernstein(const lrr::ExperimentConfig& cfg, Outputs& out) {
  check_params(cfg.params, {"ensemble", "n", "weight", "m", "ts"},
               {"ensemble", "m", "ts"});
  const std::string kind = p_str(cfg.params, "ensemble");
  lrr::MatrixEnsemble ensemble;
  if (kind == "dyad") {
    ensemble = lrr::dyad_ensemble(static_cast<int>(p_int(cfg.params, "n")));
  } else if (kind == "rademacher" || kind == "gaussian") {
    const Matrix b = lrr::read_matrix_csv(p_str(cfg.params, "weight"));
    ensemble = kind == "rademacher" ? lrr::rademacher_ensemble(b)
                                    : lrr::gaussian_ensemble(b);
  } else {
    throw std::invalid_argument(
        "ensemble must be one of rademacher, gaussian, dyad");
  }
  const long m = p_int(cfg.params, "m");
  const std::vector<double> ts = p_fvec(cfg.params, "ts");
  lrr::RngStream root(cfg.seed);
  const lrr::BernsteinTailReport rep = lrr::bernstein_tail_experiment(
      ensemble, m, ts, cfg.trials, root, cfg.threads);
  std::ofstream csv = open_csv(out.file("bernstein.csv"));
  csv << "t,empirical,bound_theo_bern1,bound_lieb,trials,n,m,seed\n";
  for (std::size_t i = 0; i < rep.thresholds.size(); ++i) {
    csv << lrr::format_float(rep.thresholds[i]) << ','
        << lrr::format_float(rep.empirical[i]) << ','
        << lrr::format_float(rep.bound_theo[i]) << ','
        << lrr::format_float(rep.bound_lieb[i]) << ',' << rep.trials << ','
        << rep.n << ',' << rep.m << ',' << cfg.seed << '\n';
  }
  json report;
  report["thresholds"] = rep.thresholds;
  report["empirical"] = rep.empirical;
  report["bound_theo_bern1"] = rep.bound_theo;
  report["bound_lieb"] = rep.bound_lieb;
  report["v0_sq"] = rep.params.v0_sq;
  report["c"] = rep.params.c;
  report["sigma_sq"] = rep.params.sigma_sq;
  report["k_bound"] = rep.params.k_bound;
  report["empirical_samples"] = rep.params.empirical_samples;
  write_json_out(out.file("report.json"), report);
  return json{{"param_samples_when_empirical", 2000}};
}

using Runner = std::function<json(const lrr::ExperimentConfig&, Outputs&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"caratheodory", run_caratheodory},
      {"montecarlo", run_montecarlo},
      {"chi2-tails", run_chi2_tails},
      {"jl", run_jl},
      {"nets", run_nets},
      {"rip-sparse", run_rip_sparse},
      {"rip-matrix", run_rip_matrix},
      {"nsp", run_nsp},
      {"rank-nsp", run_rank_nsp},
      {"complete", run_complete},
      {"golf", run_golf},
      {"tangent-conc", run_tangent_conc},
      {"lie", run_lie},
      {"golden-thompson", run_golden_thompson},
      {"lieb-probe", run_lieb_probe},
      {"mat-bernstein", run_mat_bernstein},
  };
  return table;
}

// ---------------------------------------------------------------------------
// Flag table: every subcommand parameter is declared once and mapped onto
// the params object of ExperimentConfig, so flag runs and --config runs go
// through the same validation.

struct OptSpec {
  const char* key;
  char kind; // 's' string, 'i' integer, 'f' float, 'F' float list, 'I' int list
  const char* def; // nullptr: omitted when not given
  const char* desc;
};

const std::map<std::string, std::vector<OptSpec>>& sub_specs() {
  static const std::map<std::string, std::vector<OptSpec>> table = {
      {"caratheodory",
       {{"points", 's', nullptr, "point set CSV, one point per line"},
        {"weights", 's', nullptr, "weights CSV (single column)"},
        {"terms", 'i', nullptr, "sampled terms per repetition"}}},
      {"montecarlo",
       {{"integrand", 's', nullptr, "norm-sq | cos-sum"},
        {"dim", 'i', nullptr, "sampling dimension"}}},
      {"chi2-tails",
       {{"m", 'i', nullptr, "degrees of freedom"},
        {"eps", 'f', nullptr, "relative deviation"}}},
      {"jl",
       {{"points", 's', nullptr, "point set CSV"},
        {"eps", 'f', nullptr, "target distortion"},
        {"m", 'i', nullptr, "embedding dimension (default: certified minimum)"}}},
      {"nets",
       {{"ambient", 's', nullptr, "sphere | ball | stiefel | lowrank"},
        {"n", 'i', nullptr, "dimension"},
        {"k", 'i', "0", "rows (stiefel) / columns (lowrank)"},
        {"r", 'i', "0", "rank cap (lowrank)"},
        {"eps", 'f', nullptr, "net resolution"},
        {"cap", 'i', "1000000", "cardinality cap"}}},
      {"rip-sparse",
       {{"rows", 'i', nullptr, "measurement count"},
        {"cols", 'i', nullptr, "signal dimension"},
        {"k", 'i', nullptr, "sparsity order"}}},
      {"rip-matrix",
       {{"n", 'i', nullptr, "matrix rows"},
        {"cols", 'i', nullptr, "matrix columns"},
        {"r", 'i', nullptr, "rank"},
        {"m", 'i', nullptr, "measurement count"},
        {"probes", 'i', "200", "random rank-r probes"},
        {"delta", 'f', "0.25", "target isometry defect"},
        {"eps", 'f', "0.01", "failure budget"}}},
      {"nsp",
       {{"matrix", 's', nullptr, "measurement matrix CSV"},
        {"k", 'i', nullptr, "support size"},
        {"budget", 'i', "10000", "objective evaluations"}}},
      {"rank-nsp",
       {{"operator", 's', nullptr, "sampling operator JSON"},
        {"map", 's', nullptr, "gaussian map JSON"},
        {"r", 'i', nullptr, "rank"},
        {"budget", 'i', "10000", "objective evaluations"}}},
      {"complete",
       {{"matrix", 's', nullptr, "ground truth CSV"},
        {"operator", 's', nullptr, "sampling operator JSON"},
        {"y", 's', nullptr, "measured values CSV (single column)"},
        {"basis", 's', nullptr, "operator basis to sample (entry)"},
        {"m", 'i', nullptr, "sample count when sampling here"},
        {"step", 'f', "1.0", "proximal step"},
        {"tol_residual", 'f', "1e-9", "relative constraint tolerance"},
        {"tol_change", 'f', "1e-10", "relative change tolerance"},
        {"max_iter", 'i', "5000", "iteration cap"}}},
      {"golf",
       {{"matrix", 's', nullptr, "symmetric matrix CSV"},
        {"beta", 'f', "1.0", "failure exponent"},
        {"rounds", 'i', nullptr, "round count (default: ceil(log2(2 n^2 sqrt r)))"},
        {"batch", 'i', nullptr, "per-round samples (default: 64 nu r n (...))"}}},
      {"tangent-conc",
       {{"matrix", 's', nullptr, "square matrix CSV fixing the tangent space"},
        {"m", 'i', nullptr, "samples per draw"},
        {"ts", 'F', nullptr, "thresholds in (0, 2)"}}},
      {"lie",
       {{"a", 's', nullptr, "left matrix CSV"},
        {"b", 's', nullptr, "right matrix CSV"},
        {"ns", 'I', nullptr, "product lengths"}}},
      {"golden-thompson",
       {{"a", 's', nullptr, "symmetric matrix CSV"},
        {"b", 's', nullptr, "symmetric matrix CSV"}}},
      {"lieb-probe",
       {{"h", 's', nullptr, "symmetric matrix CSV"},
        {"a", 's', nullptr, "positive definite matrix CSV"},
        {"b", 's', nullptr, "positive definite matrix CSV"}}},
      {"mat-bernstein",
       {{"ensemble", 's', nullptr, "rademacher | gaussian | dyad"},
        {"n", 'i', nullptr, "dimension (dyad)"},
        {"weight", 's', nullptr, "weight matrix CSV (weighted kinds)"},
        {"m", 'i', nullptr, "summands per trial"},
        {"ts", 'F', nullptr, "thresholds"}}},
  };
  return table;
}

const char* sub_description(const std::string& name) {
  static const std::map<std::string, const char*> table = {
      {"caratheodory", "sparsify a convex combination by random sampling"},
      {"montecarlo", "Monte Carlo mean estimation error scaling"},
      {"chi2-tails", "empirical vs analytic chi-square norm tails"},
      {"jl", "random projection embedding with distortion audit"},
      {"nets", "epsilon-nets on spheres, balls, and low-rank sets"},
      {"rip-sparse", "exact sparse isometry constants of a Gaussian matrix"},
      {"rip-matrix", "rank-restricted isometry probe of a Gaussian map"},
      {"nsp", "search for sparse null space property violations"},
      {"rank-nsp", "search for rank null space property violations"},
      {"complete", "nuclear norm matrix completion via splitting"},
      {"golf", "build and verify a dual certificate by golfing"},
      {"tangent-conc", "tangent space sampling operator concentration"},
      {"lie", "Lie product approximation error decay"},
      {"golden-thompson", "trace exponential product inequality check"},
      {"lieb-probe", "trace functional concavity probe"},
      {"mat-bernstein", "matrix Bernstein tail curves for random ensembles"},
  };
  return table.at(name);
}

struct FlagStore {
  std::map<std::string, std::string> strings;
  std::map<std::string, long> ints;
  std::map<std::string, double> floats;
  std::map<std::string, std::vector<double>> float_lists;
  std::map<std::string, std::vector<long>> int_lists;
  std::map<std::string, CLI::Option*> options;
};

void register_params(CLI::App* sub, const std::string& name,
                     const std::vector<OptSpec>& specs, FlagStore& store) {
  for (const OptSpec& spec : specs) {
    // CLI11 treats the one-letter long option --h as clashing with the short
    // help flag, so this subcommand keeps --help but loses the -h alias.
    if (std::string(spec.key) == "h") {
      sub->set_help_flag("--help", "print help and exit");
    }
  }
  for (const OptSpec& spec : specs) {
    const std::string id = name + "/" + spec.key;
    const std::string flag = std::string("--") + spec.key;
    CLI::Option* opt = nullptr;
    switch (spec.kind) {
      case 's':
        opt = sub->add_option(flag, store.strings[id], spec.desc);
        break;
      case 'i':
        opt = sub->add_option(flag, store.ints[id], spec.desc);
        break;
      case 'f':
        opt = sub->add_option(flag, store.floats[id], spec.desc);
        break;
      case 'F':
        opt = sub->add_option(flag, store.float_lists[id], spec.desc)
                  ->delimiter(',');
        break;
      case 'I':
        opt = sub->add_option(flag, store.int_lists[id], spec.desc)
                  ->delimiter(',');
        break;
    }
    store.options[id] = opt;
  }
}

json collect_params(const std::string& name, const std::vector<OptSpec>& specs,
                    const FlagStore& store) {
  json params = json::object();
  for (const OptSpec& spec : specs) {
    const std::string id = name + "/" + spec.key;
    const bool given = store.options.at(id)->count() > 0;
    if (!given && spec.def == nullptr) continue;
    switch (spec.kind) {
      case 's':
        params[spec.key] = given ? store.strings.at(id) : std::string(spec.def);
        break;
      case 'i':
        params[spec.key] = given ? store.ints.at(id) : std::stol(spec.def);
        break;
      case 'f':
        params[spec.key] = given ? store.floats.at(id) : std::stod(spec.def);
        break;
      case 'F':
        params[spec.key] = store.float_lists.at(id);
        break;
      case 'I':
        params[spec.key] = store.int_lists.at(id);
        break;
    }
  }
  return params;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank matrix recovery and concentration experiment harness"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON experiment config; overrides all flags");
  std::uint64_t seed = 0;
  long trials = 1;
  int threads = 1;
  std::string out_dir = ".";
  FlagStore store;
  for (const auto& [name, specs] : sub_specs()) {
    CLI::App* sub = app.add_subcommand(name, sub_description(name));
    sub->fallthrough();
    sub->add_option("--seed", seed, "root seed");
    sub->add_option("--trials", trials, "trial count");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--out", out_dir, "output directory");
    register_params(sub, name, specs, store);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  lrr::ExperimentConfig cfg;
  try {
    const std::vector<CLI::App*> picked = app.get_subcommands();
    if (!config_path.empty()) {
      cfg = lrr::load_config(config_path);
      if (!picked.empty() && picked.front()->get_name() != cfg.subcommand) {
        throw std::invalid_argument("config subcommand '" + cfg.subcommand +
                                    "' does not match the command line");
      }
    } else {
      if (picked.empty()) {
        std::cerr << "error: no subcommand given (see --help)\n";
        return 1;
      }
      cfg.subcommand = picked.front()->get_name();
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.threads = threads;
      cfg.out = out_dir;
      cfg.params =
          collect_params(cfg.subcommand, sub_specs().at(cfg.subcommand), store);
    }
    if (cfg.trials < 1) throw std::invalid_argument("trials must be positive");
    if (cfg.threads < 1) throw std::invalid_argument("threads must be positive");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  const auto it = runners().find(cfg.subcommand);
  if (it == runners().end()) {
    std::cerr << "error: unknown subcommand '" << cfg.subcommand << "'\n";
    return 1;
  }

  std::optional<Outputs> out;
  try {
    out.emplace(cfg.out);
    const auto start = std::chrono::steady_clock::now();
    const json tolerances = it->second(cfg, *out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json manifest;
    manifest["config"] = lrr::config_to_json(cfg);
    manifest["version"] = LRR_VERSION;
    manifest["wall_time_seconds"] = wall;
    manifest["rng"] = {{"seed", cfg.seed},
                       {"scheme", "counter-based stream; trial t uses the child "
                                  "stream fork(t) of RngStream(seed, 0)"}};
    manifest["tolerances"] = tolerances;
    write_json_out(out->file("manifest.json"), manifest);
    return 0;
  } catch (const lrr::NumericalError& e) {
    if (out) out->discard();
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    if (out) out->discard();
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
