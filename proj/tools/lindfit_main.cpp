// Copyright 2026 lindfit contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lindfit/gates.hpp"
#include "lindfit/gateset.hpp"
#include "lindfit/io.hpp"
#include "lindfit/logsearch.hpp"
#include "lindfit/protocols.hpp"
#include "lindfit/tomosim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lindfit;

namespace {

std::uint64_t parse_shots(const std::string& s) {
  if (s == "inf") return kInfiniteShots;
  return std::stoull(s);
}

// "kind@target:strength" comma-separated; target in {0, 1, both}
std::vector<NoiseModel> parse_noise_spec(const std::string& spec) {
  std::vector<NoiseModel> out;
  if (spec.empty()) return out;
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string term = spec.substr(pos, comma - pos);
    pos = comma + 1;
    const size_t at = term.find('@');
    const size_t colon = term.find(':');
    if (at == std::string::npos || colon == std::string::npos || colon < at)
      throw ParseError("noise term '" + term + "' is not kind@target:strength");
    NoiseModel nm;
    const auto kind = noise_kind_from_name(term.substr(0, at));
    if (!kind) throw ParseError("unknown noise kind in '" + term + "'");
    nm.kind = *kind;
    const std::string target = term.substr(at + 1, colon - at - 1);
    if (target == "both")
      nm.target = NoiseModel::kBothQubits;
    else
      nm.target = std::stoi(target);
    nm.strength = std::stod(term.substr(colon + 1));
    out.push_back(nm);
  }
  return out;
}

SearchOptions search_options_from(const io::RunConfig& rc) {
  SearchOptions o;
  o.m_max = rc.m_max;
  o.beta = rc.beta;
  o.depth = rc.depth;
  o.starts = rc.starts;
  o.seed = rc.seed;
  return o;
}

json decomposition_report(const Lindbladian& l, double gamma_threshold = 1e-6) {
  const CanonicalDecomposition dec = canonical_decomposition(l);
  int n_qubits = 0;
  while ((1 << n_qubits) < l.op.dim) ++n_qubits;
  const auto labels = pauli_labels(n_qubits);
  const double d = l.op.dim;

  json rep;
  json ham;
  for (size_t k = 1; k < labels.size(); ++k) {
    const double coeff = (pauli_string(labels[k]) * dec.hamiltonian).trace().real() / d;
    if (std::abs(coeff) > 1e-12) ham[labels[k]] = coeff;
  }
  rep["hamiltonian_pauli"] = std::move(ham);
  json jumps = json::array();
  for (const auto& jump : dec.jumps) {
    if (jump.rate <= gamma_threshold) continue;  // presentation filter
    json jj;
    jj["gamma"] = jump.rate;
    json expansion;
    for (size_t k = 1; k < labels.size(); ++k) {
      const Complex coeff = (pauli_string(labels[k]) * jump.op).trace() / d;
      if (std::abs(coeff) > 1e-9)
        expansion[labels[k]] = json::array({coeff.real(), coeff.imag()});
    }
    jj["pauli"] = std::move(expansion);
    jumps.push_back(std::move(jj));
  }
  rep["jumps"] = std::move(jumps);
  return rep;
}

json branch_to_json(const BranchVector& b) {
  json out = json::array();
  for (Eigen::Index i = 0; i < b.m.size(); ++i) out.push_back(b.m(i));
  return out;
}

FitResult run_fitter(const std::string& fitter, const SuperOp& e, const SuperOp& l0,
                     const SearchOptions& opts) {
  if (fitter == "convex") return convex_solve(e, opts);
  if (fitter == "ap") return alternating_projections(e, l0, opts);
  if (fitter == "auto") {
    if (auto_fitter(e) == FitterKind::Convex) return convex_solve(e, opts);
    return alternating_projections(e, l0, opts);
  }
  throw ParseError("unknown fitter '" + fitter + "'");
}

int cmd_fit(const std::string& input, const std::string& gate_name,
            const std::optional<std::string>& truth_path, const io::RunConfig& rc,
            const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const io::MatrixFile mf = io::read_matrix_file(input);
  if (mf.role != "transfer")
    throw ParseError("cmd_fit expects a transfer MatrixFile, got role '" + mf.role + "'");
  const SuperOp e(mf.data, mf.dim);

  SuperOp l0 = SuperOp(CMat::Zero(mf.dim * mf.dim, mf.dim * mf.dim), mf.dim);
  std::optional<SuperOp> e_ideal;
  if (!gate_name.empty()) {
    const Gate g = make_gate(gate_name);
    l0 = ideal_generator(g).op;
    e_ideal = ideal_transfer(g);
  }

  SearchOptions opts = search_options_from(rc);
  const FitResult fit = run_fitter(rc.fitter, e, l0, opts);

  io::MatrixFile lf;
  lf.dim = mf.dim;
  lf.role = "lindbladian";
  lf.data = fit.L_est.op.mat;
  lf.metadata["residual"] = std::to_string(fit.residual);
  if (!gate_name.empty()) lf.metadata["gate"] = gate_name;
  io::write_matrix_file(out_dir / "L.json", lf);

  json rep;
  rep["config"] = io::to_json(rc);
  rep["branch"] = branch_to_json(fit.branch);
  rep["iterations_used"] = fit.iterations_used;
  json dist;
  dist["e_to_expL"] = fit.residual;
  if (e_ideal) dist["e_to_ideal"] = fro_dist(e, *e_ideal);
  if (truth_path) {
    const io::MatrixFile tf = io::read_matrix_file(*truth_path);
    const SuperOp e_star(tf.data, tf.dim);
    dist["e_to_e_star"] = fro_dist(e, e_star);
    const auto [s1, s2] = success_criteria(fit.L_est, e, e_star);
    rep["success"] = json{{"success1", s1}, {"success2", s2}};
  }
  rep["distances"] = std::move(dist);
  rep["decomposition"] = decomposition_report(fit.L_est);
  io::write_json(out_dir / "report.json", rep);
  std::cout << "fit: residual " << fit.residual << " -> "
            << (out_dir / "report.json").string() << "\n";
  return 0;
}

int cmd_simulate(const std::string& gates_arg, const std::string& noise_spec, double noise_norm,
                 bool spam, const io::RunConfig& rc, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  std::vector<std::string> labels;
  {
    size_t pos = 0;
    while (pos < gates_arg.size()) {
      size_t comma = gates_arg.find(',', pos);
      if (comma == std::string::npos) comma = gates_arg.size();
      labels.push_back(gates_arg.substr(pos, comma - pos));
      pos = comma + 1;
    }
  }
  if (labels.empty()) throw ParseError("no gate given");

  std::vector<Lindbladian> l_stars;
  std::vector<SuperOp> e_stars;
  int dim = 0;
  Rng pool_rng(derive_seed(rc.seed, 0xBEEF));
  for (size_t i = 0; i < labels.size(); ++i) {
    const Gate g = make_gate(labels[i]);
    dim = g.dim;
    const Lindbladian li = ideal_generator(g);
    std::vector<NoiseModel> noise;
    if (noise_spec == "pool")
      noise = gateset_gate_noise(pool_rng);
    else
      noise = parse_noise_spec(noise_spec);
    if (noise_norm > 0 && !noise.empty()) noise = calibrate_noise(noise, li, noise_norm);
    l_stars.push_back(noise.empty() ? li : make_noise(noise, li));
    e_stars.push_back(SuperOp(expm(l_stars.back().op.mat), g.dim));
  }

  int n_qubits = 0;
  while ((1 << n_qubits) < dim) ++n_qubits;
  const FiducialSet fid = pauli_fiducials(n_qubits);
  const FiducialSet fid_used =
      spam ? apply_spam(fid, SpamConfig{}, derive_seed(rc.seed, 0x5AA5)) : fid;

  TomographyBundle bundle = simulate_gateset(e_stars, fid_used, labels, rc.shots,
                                             rc.gram_shots, derive_seed(rc.seed, 0xB0B0));
  for (const auto& l : l_stars) bundle.truth->l_star.push_back(l.op.mat);
  io::write_bundle(out_dir / "bundle.json", bundle);

  // per-gate artifacts: ideal/true transfer matrices and the plain-QPT
  // estimate that assumes ideal fiducials
  for (size_t i = 0; i < labels.size(); ++i) {
    const std::string tag = labels.size() == 1 ? "" : "_" + std::to_string(i);
    io::MatrixFile f;
    f.dim = dim;
    f.metadata["gate"] = labels[i];
    f.metadata["seed"] = std::to_string(rc.seed);

    f.role = "transfer";
    f.data = ideal_transfer(make_gate(labels[i])).mat;
    io::write_matrix_file(out_dir / ("E_ideal" + tag + ".json"), f);
    f.data = e_stars[i].mat;
    io::write_matrix_file(out_dir / ("E_star" + tag + ".json"), f);

    SuperOp est = linear_inversion(bundle.probs[i], fid);
    if (rc.shots != kInfiniteShots) est = project_to_cptp(est);
    f.data = est.mat;
    io::write_matrix_file(out_dir / ("E_tomo" + tag + ".json"), f);

    f.role = "lindbladian";
    f.data = l_stars[i].op.mat;
    io::write_matrix_file(out_dir / ("L_star" + tag + ".json"), f);
  }
  std::cout << "simulate: wrote bundle with " << labels.size() << " gate(s) to "
            << out_dir.string() << "\n";
  return 0;
}

int cmd_gateset_fit(const std::string& bundle_path, const io::RunConfig& rc,
                    const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const TomographyBundle bundle = io::read_bundle(bundle_path);

  std::vector<Lindbladian> l_ideal;
  std::vector<SuperOp> e_ideal;
  for (const auto& label : bundle.gate_labels) {
    const Gate g = make_gate(label);
    l_ideal.push_back(ideal_generator(g));
    e_ideal.push_back(ideal_transfer(g));
  }
  const FiducialSet fid = pauli_fiducials(bundle.dim == 4 ? 2 : 1);

  FlipFlopConfig cfg;
  cfg.order =
      rc.order == "gauge-first" ? FlipFlopOrder::GaugeFirst : FlipFlopOrder::LindbladFirst;
  cfg.iterations = rc.iterations;
  cfg.t = rc.t;
  cfg.slack = rc.slack;
  cfg.search = search_options_from(rc);
  if (rc.fitter == "convex")
    cfg.fitters.assign(bundle.gate_labels.size(), FitterKind::Convex);
  else if (rc.fitter == "ap")
    cfg.fitters.assign(bundle.gate_labels.size(), FitterKind::AlternatingProjections);

  const FlipFlopResult res = flip_flop(bundle, l_ideal, e_ideal, fid.prep, cfg);

  io::MatrixFile f;
  f.dim = bundle.dim;
  f.role = "prep";
  f.data = res.b;
  io::write_matrix_file(out_dir / "B.json", f);
  f.role = "meas";
  f.data = res.a;
  io::write_matrix_file(out_dir / "A.json", f);
  for (size_t i = 0; i < res.ls.size(); ++i) {
    f.role = "lindbladian";
    f.data = res.ls[i].op.mat;
    f.metadata["gate"] = bundle.gate_labels[i];
    io::write_matrix_file(out_dir / ("L_" + std::to_string(i) + ".json"), f);
  }

  json rep;
  rep["config"] = io::to_json(rc);
  rep["gates"] = bundle.gate_labels;
  rep["h_history"] = res.h_history;
  rep["fidelity_trace"] = res.fidelity_trace;
  rep["iterations_run"] = res.iterations_run;
  rep["gauge_stalled"] = res.gauge_stalled;
  rep["fit_failures"] = res.fit_failures;
  const double fmax_est = f_max(res.b, res.ls, bundle);
  rep["f_max"] = fmax_est;
  json table = json::array();
  const CMat gram_inv = bundle.gram.inverse();
  for (size_t i = 0; i < res.ls.size(); ++i) {
    const CMat e_i = res.b * gram_inv * bundle.probs[i].cast<Complex>() * res.b.inverse();
    json row;
    row["gate"] = bundle.gate_labels[i];
    row["e_to_ideal"] = (e_i - e_ideal[i].mat).norm();
    row["e_to_expL"] = (e_i - expm(res.ls[i].op.mat)).norm();
    row["f_avg"] = avg_gate_fidelity(e_ideal[i], SuperOp(expm(res.ls[i].op.mat), bundle.dim));
    table.push_back(std::move(row));
  }
  rep["distances"] = std::move(table);
  if (bundle.truth && !bundle.truth->l_star.empty()) {
    std::vector<Lindbladian> l_star;
    for (const auto& l : bundle.truth->l_star)
      l_star.push_back(Lindbladian{SuperOp(l, bundle.dim), 1e-6});
    const double fmax_truth = f_max(bundle.truth->b_star, l_star, bundle);
    rep["f_max_truth"] = fmax_truth;
    rep["success"] = fmax_est <= fmax_truth;
  }
  json decs = json::array();
  for (const auto& l : res.ls) decs.push_back(decomposition_report(l));
  rep["decompositions"] = std::move(decs);
  io::write_json(out_dir / "report.json", rep);
  std::cout << "gateset-fit: f_max " << fmax_est << " -> "
            << (out_dir / "report.json").string() << "\n";
  return 0;
}

int cmd_bench(const std::string& suite, int instances, const io::RunConfig& rc,
              const fs::path& out_dir) {
  fs::create_directories(out_dir);
  using Clock = std::chrono::steady_clock;
  json cells = json::array();

  auto run_cell = [&](const std::string& gate_name, int nm_idx, const std::string& fitter) {
    const Gate g = make_gate(gate_name);
    const Lindbladian li = ideal_generator(g);
    int s1 = 0, s2 = 0;
    const auto t0 = Clock::now();
    for (int inst = 0; inst < instances; ++inst) {
      Rng rng(derive_seed(rc.seed, 100 + nm_idx, inst));
      auto noise = benchmark_noise_model(nm_idx, rng);
      noise = calibrate_noise(noise, li, rng.uniform(0.089, 0.355));
      const QptInstance q =
          simulate_qpt(g, noise, rc.shots, derive_seed(rc.seed, 200 + nm_idx, inst));
      SearchOptions opts = search_options_from(rc);
      opts.seed = derive_seed(rc.seed, 300 + nm_idx, inst);
      const FitResult fit = run_fitter(fitter, q.e, li.op, opts);
      const auto [a, b] = success_criteria(fit.L_est, q.e, q.e_star);
      s1 += a;
      s2 += b;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::cerr << gate_name << " / " << benchmark_noise_name(nm_idx) << ": " << secs << " s\n";
    json cell;
    cell["gate"] = gate_name;
    cell["noise"] = benchmark_noise_name(nm_idx);
    cell["success1"] = s1;
    cell["success2"] = s2;
    cell["instances"] = instances;
    std::cout << gate_name << " / " << benchmark_noise_name(nm_idx) << ": S1 " << s1 << "/"
              << instances << "  S2 " << s2 << "/" << instances << "\n";
    cells.push_back(std::move(cell));
  };

  if (suite == "table1-convex") {
    for (const char* gname : {"sqrtX@I", "T@I", "I@I"})
      for (int nm = 0; nm < kBenchmarkNoiseModelCount; ++nm) {
        // overrotation is a no-op on the identity gate; skip that cell
        if (std::string(gname) == "I@I" && nm == 0) continue;
        run_cell(gname, nm, "convex");
      }
  } else if (suite == "table1-ap") {
    for (const char* gname : {"CNOT", "ISWAP", "X@H"})
      for (int nm = 0; nm < kBenchmarkNoiseModelCount; ++nm) run_cell(gname, nm, "ap");
  } else if (suite == "cnot-contrast") {
    const Gate g = make_gate("CNOT");
    const Lindbladian li = ideal_generator(g);
    std::vector<NoiseModel> noise = {{NoiseKind::CoherentZ, 0.11, 0},
                                     {NoiseKind::CoherentZ, 0.09, 1},
                                     {NoiseKind::CoherentZ, 0.06, NoiseModel::kBothQubits},
                                     {NoiseKind::Dephasing, 0.05, 0}};
    noise = calibrate_noise(noise, li, 0.25);
    const QptInstance q = simulate_qpt(g, noise, rc.shots, derive_seed(rc.seed, 7));
    SearchOptions opts = search_options_from(rc);
    const FitResult cs = convex_solve(q.e, opts);
    const FitResult ap = alternating_projections(q.e, li.op, opts);
    const double zero_knowledge = fro_dist(q.e, ideal_transfer(g));
    json cell;
    cell["floor"] = q.floor_dist;
    cell["e_to_ideal"] = zero_knowledge;
    cell["convex_residual"] = cs.residual;
    cell["ap_residual"] = ap.residual;
    cell["convex_fails"] = cs.residual > zero_knowledge;
    cell["ap_success1"] = ap.residual <= q.floor_dist;
    cells.push_back(cell);
    std::cout << "convex residual " << cs.residual << " vs zero-knowledge " << zero_knowledge
              << "; AP residual " << ap.residual << " vs floor " << q.floor_dist << "\n";
  } else if (suite == "threshold-sweep") {
    const Gate g = make_gate("CNOT");
    const Lindbladian li = ideal_generator(g);
    for (int step = 0; step < instances; ++step) {
      const double target = 0.05 + (0.45 - 0.05) * step / std::max(1, instances - 1);
      auto noise = calibrate_noise(threshold_sweep_model(), li, target);
      const QptInstance q = simulate_qpt(g, noise, rc.shots, derive_seed(rc.seed, 400, step));
      SearchOptions opts = search_options_from(rc);
      opts.seed = derive_seed(rc.seed, 500, step);
      const FitResult ap = alternating_projections(q.e, li.op, opts);
      const auto [s1, s2] = success_criteria(ap.L_est, q.e, q.e_star);
      const double f = avg_gate_fidelity(ideal_transfer(g), q.e_star);
      json cell;
      cell["noise_norm"] = target;
      cell["f_avg"] = f;
      cell["success1"] = s1;
      cell["residual"] = ap.residual;
      cell["floor"] = q.floor_dist;
      cells.push_back(cell);
      std::cout << "|L*-Lideal| " << target << "  F_avg " << f << "  S1 " << s1 << "\n";
    }
  } else if (suite == "identity-sweep") {
    const Gate g = make_gate("I@I");
    const Lindbladian li = ideal_generator(g);
    for (int step = 0; step < instances; ++step) {
      const double target = 0.1 + 1.7 * step / std::max(1, instances - 1);
      for (int nm : {1, 5, 7}) {
        Rng rng(derive_seed(rc.seed, 600 + nm, step));
        auto noise = calibrate_noise(benchmark_noise_model(nm, rng), li, target);
        const QptInstance q =
            simulate_qpt(g, noise, rc.shots, derive_seed(rc.seed, 700 + nm, step));
        SearchOptions opts = search_options_from(rc);
        const FitResult fit = convex_solve(q.e, opts);
        const auto [s1, s2] = success_criteria(fit.L_est, q.e, q.e_star);
        json cell;
        cell["noise"] = benchmark_noise_name(nm);
        cell["noise_norm"] = target;
        cell["f_avg"] = avg_gate_fidelity(ideal_transfer(g), q.e_star);
        cell["residual"] = fit.residual;
        cell["success1"] = s1;
        cells.push_back(cell);
        std::cout << benchmark_noise_name(nm) << " @ " << target << ": residual "
                  << fit.residual << " S1 " << s1 << "\n";
      }
    }
  } else if (suite == "flipflop") {
    int wins = 0;
    for (int inst = 0; inst < instances; ++inst) {
      const GateSetCase c = make_gateset_case(derive_seed(rc.seed, 800, inst));
      FlipFlopConfig cfg;
      cfg.iterations = rc.iterations;
      cfg.t = rc.t;
      cfg.slack = rc.slack;
      cfg.search = search_options_from(rc);
      cfg.search.seed = derive_seed(rc.seed, 900, inst);
      const FlipFlopResult res =
          flip_flop(c.bundle, c.l_ideal, c.e_ideal, c.fid_ideal.prep, cfg);
      const double fmax_est = f_max(res.b, res.ls, c.bundle);
      const double fmax_truth = f_max(c.fid_star.prep, c.l_star, c.bundle);
      const bool win = fmax_est <= fmax_truth;
      wins += win;
      json cell;
      cell["instance"] = inst;
      cell["f_max"] = fmax_est;
      cell["f_max_truth"] = fmax_truth;
      cell["success"] = win;
      cell["gauge_stalled"] = res.gauge_stalled;
      cells.push_back(cell);
      std::cout << "case " << inst << ": f_max " << fmax_est << " vs truth " << fmax_truth
                << (win ? "  PASS" : "  fail") << "\n";
    }
    std::cout << "flipflop wins: " << wins << "/" << instances << "\n";
  }

  json rep;
  rep["suite"] = suite;
  rep["config"] = io::to_json(rc);
  rep["cells"] = std::move(cells);
  io::write_json(out_dir / "bench.json", rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindbladian fitting for quantum process tomography"};
  app.require_subcommand(1);

  io::RunConfig rc;
  std::string input, gate, noise_spec, bundle_path, out = "out", suite = "table1-convex";
  std::string shots_arg = "10000", gram_shots_arg = "100000";
  std::optional<std::string> truth_path;
  double noise_norm = -1.0;
  bool spam = false;
  int instances = 5;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", rc.seed, "random seed");
    cmd->add_option("--out", out, "output directory");
  };
  auto add_fit_opts = [&](CLI::App* cmd) {
    cmd->add_option("--fitter", rc.fitter, "convex | ap | auto")
        ->check(CLI::IsMember({"convex", "ap", "auto"}));
    cmd->add_option("--beta", rc.beta, "eigenvalue clustering precision (<0: auto)");
    cmd->add_option("--m-max", rc.m_max, "max branch shift magnitude");
    cmd->add_option("--starts", rc.starts, "perturbed starts per branch");
    cmd->add_option("--depth", rc.depth, "max core-iteration depth");
  };

  auto* fit = app.add_subcommand("fit", "fit a Lindbladian to a transfer MatrixFile");
  fit->add_option("--input", input, "transfer MatrixFile")->required();
  fit->add_option("--gate", gate, "ideal gate name (initial guess and distance column)");
  fit->add_option("--truth", truth_path, "ground-truth transfer MatrixFile (synthetic runs)");
  add_fit_opts(fit);
  add_common(fit);

  auto* sim = app.add_subcommand("simulate", "generate a synthetic tomography bundle");
  sim->add_option("--gate", gate, "gate name, or comma list for a gate set")->required();
  sim->add_option("--noise", noise_spec,
                  "noise terms kind@target:strength[,...]; 'pool' draws per gate");
  sim->add_option("--noise-norm", noise_norm, "calibrate aggregate |L*-L_ideal| to this value");
  sim->add_option("--shots", shots_arg, "shots per setting, or 'inf'");
  sim->add_option("--gram-shots", gram_shots_arg, "shots for the Gram matrix, or 'inf'");
  sim->add_flag("--spam", spam, "apply random SPAM errors to the fiducials");
  add_common(sim);

  auto* gsf = app.add_subcommand("gateset-fit", "SPAM-robust joint fit of a bundle");
  gsf->add_option("--bundle", bundle_path, "bundle JSON")->required();
  gsf->add_option("--order", rc.order, "lindblad-first | gauge-first")
      ->check(CLI::IsMember({"lindblad-first", "gauge-first"}));
  gsf->add_option("--iterations", rc.iterations, "flip-flop iterations");
  gsf->add_option("--t", rc.t, "LogSumExp sharpness");
  gsf->add_option("--slack", rc.slack, "physicality slack");
  add_fit_opts(gsf);
  add_common(gsf);

  auto* bench = app.add_subcommand("bench", "synthetic benchmark suites");
  bench->add_option("--suite", suite,
                    "table1-convex | table1-ap | cnot-contrast | threshold-sweep | "
                    "identity-sweep | flipflop")
      ->check(CLI::IsMember({"table1-convex", "table1-ap", "cnot-contrast", "threshold-sweep",
                             "identity-sweep", "flipflop"}));
  bench->add_option("--instances", instances, "instances per cell");
  bench->add_option("--shots", shots_arg, "shots per setting, or 'inf'");
  bench->add_option("--iterations", rc.iterations, "flip-flop iterations");
  bench->add_option("--t", rc.t, "LogSumExp sharpness");
  bench->add_option("--slack", rc.slack, "physicality slack");
  add_fit_opts(bench);
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rc.shots = parse_shots(shots_arg);
    rc.gram_shots = parse_shots(gram_shots_arg);
    if (fit->parsed()) return cmd_fit(input, gate, truth_path, rc, out);
    if (sim->parsed()) return cmd_simulate(gate, noise_spec, noise_norm, spam, rc, out);
    if (gsf->parsed()) return cmd_gateset_fit(bundle_path, rc, out);
    if (bench->parsed()) return cmd_bench(suite, instances, rc, out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoCandidateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
