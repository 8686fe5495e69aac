// resetgeo: geometric complexity of stochastic maps and quantum channels.
//
// Subcommands: analyze, path, sweep, protocol-check, decompose-search,
// quantum-analyze, quantum-sweep. Single analyses print JSON, sweeps print CSV
// (12 significant digits, '.' decimal); --out redirects the main payload to a
// file. Exit codes: 0 clean, 1 usage/parse/input errors, 2 when a report
// carries violation = true (an inequality the library promises failed to hold).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resetgeo/classical_geometry.hpp"
#include "resetgeo/core_maps.hpp"
#include "resetgeo/decomposition.hpp"
#include "resetgeo/io.hpp"
#include "resetgeo/parallel.hpp"
#include "resetgeo/quantum_geometry.hpp"
#include "resetgeo/random_ensembles.hpp"
#include "resetgeo/scaling_paths.hpp"

using namespace resetgeo;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 12345;
  std::string out;
  std::string format;  // "" = subcommand default, else json|csv
  double floor = kProbabilityFloor;
  double tol = 1e-11;
};

void emit_main(const GlobalOpts& g, const std::string& payload) {
  if (g.out.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + g.out);
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

// maps with a row sum under the floor get blended toward the uniform map so
// every reported quantity stays finite; the blend weight is d * floor, the
// smallest that lifts a zero row sum to the floor
StochasticMap floor_surrogate(const StochasticMap& T, double floor, bool& applied) {
  applied = false;
  if (row_sums(T).r.minCoeff() >= floor) return T;
  applied = true;
  const double s = std::min(1.0, T.dim * std::max(floor, 1e-300));
  Matrix mix = (1.0 - s) * T.entries + (s / T.dim) * Matrix::Ones(T.dim, T.dim);
  return validate_map(mix);
}

UndesiredSet undesired_from_flag(int dim, std::vector<int> one_based) {
  if (one_based.empty()) one_based.push_back(dim);  // default: the last state
  for (int& i : one_based) --i;
  return make_undesired_set(dim, std::move(one_based));
}

Json classical_report(const StochasticMap& T_in, const UndesiredSet& u, double floor) {
  bool floored = false;
  const StochasticMap T = floor_surrogate(T_in, floor, floored);
  const auto br = complexity_bracket(T, floor);
  const auto tm = tradeoff_margin(T, u, floor);
  Json rep;
  rep["dim"] = T.dim;
  rep["ell"] = br.ell;
  rep["lower"] = br.lower;
  rep["upper"] = br.upper;
  rep["diverged"] = ell(T_in, floor) == std::numeric_limits<double>::infinity();
  rep["floor_applied"] = floored;
  rep["epsilon"] = tm.epsilon;
  rep["margin"] = tm.margin;
  rep["margin_sharp"] = tm.margin_sharp;
  rep["entropic_bound"] = entropic_bound(T);
  Json uset = Json::array();
  for (int i : u.indices) uset.push_back(i + 1);
  rep["undesired"] = uset;
  rep["violation"] = !tm.holds;
  return rep;
}

Json quantum_report(const KrausChannel& ch, const ProjectorQ& pi, double floor) {
  DensityOperator phi = reduced_output(ch);
  bool floored = false;
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(phi.rho);
    if (es.eigenvalues().minCoeff() < floor) {
      floored = true;
      const double s = std::min(1.0, ch.dim * std::max(floor, 1e-300));
      phi.rho = (1.0 - s) * phi.rho +
                (s / ch.dim) * CMatrix::Identity(ch.dim, ch.dim);
    }
  }
  const double l = quantum_ell_of_phi(phi.rho, floor);
  const double eps = ch.dim * (pi.pi * phi.rho).trace().real();
  const double margin = eps * std::exp(l);
  const double s_out = von_neumann_entropy(phi.rho);
  Json rep;
  rep["dim"] = ch.dim;
  rep["ell"] = l;
  rep["lower"] = l;
  rep["upper"] = (std::sqrt(static_cast<double>(ch.dim)) + 1.0) * l;
  rep["floor_applied"] = floored;
  rep["epsilon"] = eps;
  rep["margin"] = margin;
  rep["entropy_bound"] = s_out > 0.0
                             ? std::log(std::log(static_cast<double>(ch.dim))) - std::log(s_out)
                             : std::numeric_limits<double>::infinity();
  rep["violation"] = !(margin >= 1.0 - 1e-12);
  return rep;
}

ProjectorQ default_projector(int dim) {
  // |1><1| in 0-based labels: the second basis state
  CMatrix pi = CMatrix::Zero(dim, dim);
  pi(1, 1) = 1.0;
  return ProjectorQ{dim, std::move(pi)};
}

int finish_report(const GlobalOpts& g, Json rep) {
  const bool violated = rep.value("violation", false);
  emit_main(g, rep.dump(2) + "\n");
  return violated ? 2 : 0;
}

std::vector<double> grid_values(const std::vector<double>& values, double lo, double hi,
                                int points) {
  if (!values.empty()) return values;
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs a nonempty grid");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  return g;
}

std::string rows_payload(const GlobalOpts& g, const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows) {
  if (g.format == "json") {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json obj;
      for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
  CsvWriter csv(header);
  for (const auto& row : rows) csv.add_row(row);
  return csv.str();
}

// ---- subcommand bodies ----

int cmd_analyze(const GlobalOpts& g, const std::string& file, std::vector<int> undesired) {
  const StochasticMap T = parse_map(load_json_file(file));
  const UndesiredSet u = undesired_from_flag(T.dim, std::move(undesired));
  return finish_report(g, classical_report(T, u, g.floor));
}

int cmd_path(const GlobalOpts& g, const std::string& file, int K, int iters, double mix) {
  const StochasticMap T = parse_map(load_json_file(file));
  const int d = T.dim;

  std::vector<std::string> header{"t"};
  for (int n = 1; n <= d; ++n) header.push_back("r_" + std::to_string(n));
  header.push_back("segment_speed");

  Json summary;
  CsvWriter csv(header);
  const double l = ell(T, g.floor);
  if (l < 1e-15) {  // already at the uniform target: a single-point path
    std::vector<double> row{0.0};
    const RowSumVector r = row_sums(T);
    for (int n = 0; n < d; ++n) row.push_back(r.r(n));
    row.push_back(0.0);
    csv.add_row(row);
    summary["length"] = 0.0;
    summary["c_hat"] = 0.0;
    summary["segments"] = 0;
  } else {
    const auto schedule = log_linear_schedule(T, K, g.floor);
    const MapPath path = constrained_path(T, schedule, mix, g.tol);
    for (int k = 0; k <= K; ++k) {
      std::vector<double> row{path.t[k]};
      for (int n = 0; n < d; ++n) row.push_back(path.r[k].r(n));
      row.push_back(k == 0 ? 0.0 : path.segment_speed[k - 1]);
      csv.add_row(row);
    }
    const auto est = geodesic_upper_estimate(T, K, iters, g.floor);
    summary["length"] = path_length(path, g.floor);
    summary["c_hat"] = est.length;
    summary["seed_length"] = est.initial_length;
    summary["segments"] = K;
    const auto br = complexity_bracket(T, g.floor);
    summary["ell"] = br.ell;
    summary["upper"] = br.upper;
    summary["violation"] =
        !(br.ell <= est.length + 1e-9 && est.length <= br.upper + 1e-6);
  }

  if (g.out.empty()) {
    std::fwrite(csv.str().data(), 1, csv.str().size(), stdout);
    std::cerr << summary.dump(2) << "\n";
  } else {
    emit_main(g, csv.str());
    std::cout << summary.dump(2) << "\n";
  }
  return summary.value("violation", false) ? 2 : 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& kind, const std::vector<double>& values,
              double lo, double hi, int points, std::vector<int> dims, int count) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  if (kind == "two-level") {
    const auto grid = grid_values(values, lo, hi, points);
    header = {"wtau", "C", "C_minus_wtau", "ell", "upper", "epsilon", "margin", "entropic_bound"};
    rows.assign(grid.size(), {});
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      const double wt = grid[i];
      const StochasticMap T = two_level_map(wt);
      const auto br = complexity_bracket(T, g.floor);
      const auto tm = tradeoff_margin(T, make_undesired_set(2, {1}), g.floor);
      const double c = two_level_complexity(wt);
      rows[i] = {wt, c, c - wt, br.ell, br.upper, tm.epsilon, tm.margin, entropic_bound(T)};
    });
  } else if (kind == "random") {
    if (dims.empty()) dims = {2, 3, 4};
    header = {"index", "dim", "ell", "upper", "c_hat", "epsilon", "margin", "margin_sharp",
              "entropic_bound"};
    rows.assign(count, {});
    parallel_for(count, [&](int i) {
      Rng rng(mix_seed(g.seed, static_cast<std::uint64_t>(i)));
      const int d = dims[i % dims.size()];
      const StochasticMap T = random_map(rng, d);
      const UndesiredSet u = random_undesired_set(rng, d);
      const auto br = complexity_bracket(T, g.floor);
      const auto tm = tradeoff_margin(T, u, g.floor);
      const double c_hat = geodesic_upper_estimate(T, 32, 300, g.floor).length;
      rows[i] = {static_cast<double>(i), static_cast<double>(d), br.ell, br.upper,
                 c_hat, tm.epsilon, tm.margin, tm.margin_sharp, entropic_bound(T)};
    });
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown sweep kind: " + kind);
  }

  emit_main(g, rows_payload(g, header, rows));
  return 0;
}

int cmd_quantum_sweep(const GlobalOpts& g, const std::string& kind,
                      const std::vector<double>& values, double lo, double hi, int points,
                      std::vector<int> dims, int count) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  if (kind == "swap") {
    const auto grid = grid_values(values, lo, hi, points);
    header = {"kappa", "C_swap", "ell", "upper", "epsilon", "margin", "entropy_bound"};
    rows.assign(grid.size(), {});
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      const double kappa = grid[i];
      const KrausChannel ch = swap_channel(kappa);
      const Json rep = quantum_report(ch, default_projector(2), g.floor);
      rows[i] = {kappa,          swap_complexity(kappa),      rep["ell"].get<double>(),
                 rep["upper"].get<double>(), rep["epsilon"].get<double>(),
                 rep["margin"].get<double>(), rep["entropy_bound"].get<double>()};
    });
  } else if (kind == "random") {
    if (dims.empty()) dims = {2, 3, 4};
    header = {"index", "dim", "n_kraus", "ell", "upper", "epsilon", "margin", "entropy_bound"};
    rows.assign(count, {});
    parallel_for(count, [&](int i) {
      Rng rng(mix_seed(g.seed, static_cast<std::uint64_t>(i)));
      const int d = dims[i % dims.size()];
      const int nk = rng.uniform_int(1, d * d);
      const KrausChannel ch = random_kraus_channel(rng, d, nk);
      const ProjectorQ pi = random_projector(rng, d);
      const Json rep = quantum_report(ch, pi, g.floor);
      rows[i] = {static_cast<double>(i),       static_cast<double>(d),
                 static_cast<double>(nk),      rep["ell"].get<double>(),
                 rep["upper"].get<double>(),   rep["epsilon"].get<double>(),
                 rep["margin"].get<double>(),  rep["entropy_bound"].get<double>()};
    });
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown quantum sweep kind: " + kind);
  }

  emit_main(g, rows_payload(g, header, rows));
  return 0;
}

int cmd_protocol_check(const GlobalOpts& g, const std::string& file, double gamma) {
  const ProtocolSequence seq = parse_protocols(load_json_file(file));
  const int d = seq.dim;

  double theta = 0.0;
  int n_unit = 0;
  for (const auto& p : seq.protocols) {
    const double rate = escape_rate(p.rates);
    if (rate > gamma + 1e-12) {
      throw Error(ErrorCode::RateExceedsGamma,
                  "escape rate " + std::to_string(rate) + " exceeds gamma " +
                      std::to_string(gamma));
    }
    theta += p.duration;
    n_unit += static_cast<int>(std::ceil(p.duration - 1e-12));
  }

  const StochasticMap T = map_from_protocols(seq);
  const double l = ell(T, g.floor);
  const double sd = std::sqrt(static_cast<double>(d));
  const double logd = std::log(static_cast<double>(d));
  // per-unit-time cap ln(d e^gamma), accumulated over the total duration
  const double length_cap = sd * std::max(gamma * theta, logd);
  const double c_hat = (sd + 1.0) * l;  // bracket upper estimate
  const double n_min = protocol_lower_bound(c_hat, d, gamma);

  Json rep;
  rep["dim"] = d;
  rep["N"] = static_cast<int>(seq.protocols.size());
  rep["N_unit"] = n_unit;
  rep["theta"] = theta;
  rep["gamma"] = gamma;
  rep["ell"] = l;
  rep["c_hat"] = c_hat;
  rep["N_min"] = n_min;
  rep["length_cap"] = length_cap;
  rep["violation"] = !(l <= length_cap + 1e-9 && n_unit + 1e-9 >= n_min);
  return finish_report(g, rep);
}

int cmd_decompose_search(const GlobalOpts& g, const std::string& file, int depth, double grid,
                         bool filter, std::int64_t budget) {
  const StochasticMap T = parse_map(load_json_file(file));
  const auto verdict = det_obstruction(T);
  const auto res = residual_search(T, depth, grid, filter, budget);
  Json rep;
  rep["det"] = T.entries.determinant();
  rep["verdict"] = verdict == Obstruction::Blocked ? "blocked" : "inconclusive";
  rep["depth"] = depth;
  rep["grid"] = grid;
  rep["residual"] = res.residual;
  rep["nodes_visited"] = res.nodes_visited;
  return finish_report(g, rep);
}

int cmd_quantum_analyze(const GlobalOpts& g, const std::string& file,
                        const std::string& projector_file) {
  const KrausChannel ch = parse_channel(load_json_file(file));
  ProjectorQ pi = projector_file.empty() ? default_projector(ch.dim)
                                         : parse_projector(load_json_file(projector_file));
  if (pi.dim != ch.dim) throw Error(ErrorCode::DimMismatch, "projector dim differs from channel");
  return finish_report(g, quantum_report(ch, pi, g.floor));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "resetgeo: complexity brackets, trade-off margins, constrained paths, and\n"
      "decomposability searches for column-stochastic maps and quantum channels.\n"
      "Random ensembles: stochastic maps draw each column from a flat Dirichlet\n"
      "(normalized -ln of uniforms); Kraus sets come from a stacked complex\n"
      "Gaussian thin-QR so sum K^dag K = I; projectors take a Gaussian-QR\n"
      "subspace of rank 1..d-1. Fixed --seed gives byte-identical output."};
  app.require_subcommand(1);
  app.fallthrough();  // let --seed/--out/... appear after the subcommand name

  GlobalOpts g;
  app.add_option("--seed", g.seed, "ensemble seed (default 12345)");
  app.add_option("--out", g.out, "write the main payload (CSV or JSON) to this file");
  app.add_option("--format", g.format, "payload format for sweeps: csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--floor", g.floor, "probability floor below which row sums count as zero");
  app.add_option("--tol", g.tol, "scaling-solver marginal tolerance");

  // analyze
  std::string an_file;
  std::vector<int> an_undesired;
  auto* an = app.add_subcommand("analyze", "complexity bracket, trade-off margin, entropic bound "
                                           "for a map file");
  an->add_option("map", an_file, "JSON map file {\"dim\", \"rows\"}")->required();
  an->add_option("--undesired", an_undesired,
                 "1-based undesired state indices (default: the last state)");

  // path
  std::string pa_file;
  int pa_k = 64, pa_iters = 500;
  double pa_mix = 0.5;
  auto* pa = app.add_subcommand("path", "constrained path CSV plus a geodesic upper estimate");
  pa->add_option("map", pa_file, "JSON map file")->required();
  pa->add_option("--segments", pa_k, "number of path segments (default 64)");
  pa->add_option("--iters", pa_iters, "knot-optimizer iterations (default 500)");
  pa->add_option("--mix", pa_mix, "uniform-mixing weight of the interpolation base (default 0.5)");

  // sweep
  std::string sw_kind = "two-level";
  std::vector<double> sw_values;
  double sw_lo = 0.25, sw_hi = 4.0;
  int sw_points = 0, sw_count = 50;
  std::vector<int> sw_dims;
  auto* sw = app.add_subcommand("sweep", "classical sweeps: two-level wtau grid or a random "
                                         "Dirichlet ensemble");
  sw->add_option("--kind", sw_kind, "two-level | random")->check(CLI::IsMember({"two-level", "random"}));
  sw->add_option("--values", sw_values, "explicit wtau grid")->delimiter(',');
  sw->add_option("--min", sw_lo, "grid start (with --points)");
  sw->add_option("--max", sw_hi, "grid end (with --points)");
  sw->add_option("--points", sw_points, "linspace point count");
  sw->add_option("--dims", sw_dims, "dimensions for --kind random (default 2,3,4)")->delimiter(',');
  sw->add_option("--count", sw_count, "ensemble size for --kind random (default 50)");

  // protocol-check
  std::string pc_file;
  double pc_gamma = 1.0;
  auto* pc = app.add_subcommand("protocol-check", "length cap and protocol-count bound for a "
                                                  "protocol sequence file");
  pc->add_option("protocols", pc_file, "JSON protocol file {\"dim\", \"protocols\"}")->required();
  pc->add_option("--gamma", pc_gamma, "escape-rate budget (default 1.0)");

  // decompose-search
  std::string ds_file;
  int ds_depth = 3;
  double ds_grid = 0.2;
  bool ds_filter = false;
  std::int64_t ds_budget = 100000000;
  auto* ds = app.add_subcommand("decompose-search", "determinant obstruction plus bounded "
                                                    "best-approximation search");
  ds->add_option("map", ds_file, "JSON map file")->required();
  ds->add_option("--depth", ds_depth, "max primitive count (<= 5)");
  ds->add_option("--grid", ds_grid, "alpha/beta grid step (>= 0.05)");
  ds->add_flag("--filter", ds_filter, "restrict primitives to alpha + beta <= 1");
  ds->add_option("--budget", ds_budget, "interior-node budget (default 1e8)");

  // quantum-analyze
  std::string qa_file, qa_proj;
  auto* qa = app.add_subcommand("quantum-analyze", "quantum bracket, trade-off margin, entropy "
                                                   "bound for a Kraus channel file");
  qa->add_option("channel", qa_file, "JSON channel file {\"dim\", \"kraus\"}")->required();
  qa->add_option("--projector", qa_proj, "JSON projector file (default |1><1|)");

  // quantum-sweep
  std::string qs_kind = "swap";
  std::vector<double> qs_values;
  double qs_lo = 0.05, qs_hi = 0.95;
  int qs_points = 0, qs_count = 50;
  std::vector<int> qs_dims;
  auto* qs = app.add_subcommand("quantum-sweep", "quantum sweeps: swap-channel kappa grid or a "
                                                 "random Kraus ensemble");
  qs->add_option("--kind", qs_kind, "swap | random")->check(CLI::IsMember({"swap", "random"}));
  qs->add_option("--values", qs_values, "explicit kappa grid")->delimiter(',');
  qs->add_option("--min", qs_lo, "grid start (with --points)");
  qs->add_option("--max", qs_hi, "grid end (with --points)");
  qs->add_option("--points", qs_points, "linspace point count");
  qs->add_option("--dims", qs_dims, "dimensions for --kind random (default 2,3,4)")->delimiter(',');
  qs->add_option("--count", qs_count, "ensemble size for --kind random (default 50)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // pin usage errors to exit 1, --help to 0
  }

  try {
    if (an->parsed()) return cmd_analyze(g, an_file, an_undesired);
    if (pa->parsed()) return cmd_path(g, pa_file, pa_k, pa_iters, pa_mix);
    if (sw->parsed()) return cmd_sweep(g, sw_kind, sw_values, sw_lo, sw_hi, sw_points, sw_dims,
                                       sw_count);
    if (pc->parsed()) return cmd_protocol_check(g, pc_file, pc_gamma);
    if (ds->parsed()) return cmd_decompose_search(g, ds_file, ds_depth, ds_grid, ds_filter,
                                                  ds_budget);
    if (qa->parsed()) return cmd_quantum_analyze(g, qa_file, qa_proj);
    if (qs->parsed()) return cmd_quantum_sweep(g, qs_kind, qs_values, qs_lo, qs_hi, qs_points,
                                               qs_dims, qs_count);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
