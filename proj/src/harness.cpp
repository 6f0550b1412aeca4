// Copyright 2026 The syndeepc Authors
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

#include "syndeepc/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() == n) return v;
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]);
  throw ConfigError(std::string(what) + " must have 1 or " + std::to_string(n) + " entries, got " +
                    std::to_string(v.size()));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Stacks columns first..first+count-1 of `signal` into one vector.
Eigen::VectorXd stack_columns(const Eigen::MatrixXd& signal, Eigen::Index first,
                              Eigen::Index count) {
  Eigen::VectorXd out(signal.rows() * count);
  for (Eigen::Index k = 0; k < count; ++k) out.segment(k * signal.rows(), signal.rows()) =
      signal.col(first + k);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const char* where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw ConfigError(std::string(where) + ": bad number `" + s + "`");
  }
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const Config& cfg) {
  ExperimentConfig e;
  e.system = cfg.get("system.kind");
  if (e.system != "quadcopter" && e.system != "double-integrator" && e.system != "file") {
    throw ConfigError("system.kind must be quadcopter, double-integrator or file");
  }
  e.model_file = cfg.get("system.model_file");
  if (e.system == "file" && e.model_file.empty()) {
    throw ConfigError("system.kind = file needs system.model_file");
  }
  e.Ts = cfg.get_double("system.Ts");
  e.Ki = static_cast<int>(cfg.get_int("horizon.Ki"));
  e.K = static_cast<int>(cfg.get_int("horizon.K"));
  e.N = static_cast<int>(cfg.get_int("data.N"));
  e.seed = cfg.get_u64("run.seed");

  const std::string noise = cfg.get("noise.kind");
  if (noise == "none") {
    e.noise = NoiseModel::none();
  } else if (noise == "gaussian") {
    const double sigma = cfg.get("noise.sigma").empty()
                             ? std::sqrt(cfg.get_double("noise.variance"))
                             : cfg.get_double("noise.sigma");
    if (!(sigma >= 0.0)) throw ConfigError("noise: sigma/variance must be nonnegative");
    e.noise = NoiseModel::gaussian(sigma, e.seed);
  } else {
    throw ConfigError("noise.kind must be none or gaussian");
  }

  e.input_lower = to_vector(cfg.get_list("input.lower"));
  e.input_upper = to_vector(cfg.get_list("input.upper"));
  e.c = cfg.get_double("cost.c");
  e.rho = cfg.get_double("cost.rho");
  e.output_weights = to_vector(cfg.get_list("cost.weights"));
  e.reference_kind = cfg.get("reference.kind");
  if (e.reference_kind != "figure8" && e.reference_kind != "constant") {
    throw ConfigError("reference.kind must be figure8 or constant");
  }
  e.period = cfg.get_double("reference.period");
  e.amplitude = cfg.get_double("reference.amplitude");
  e.altitude = cfg.get_double("reference.altitude");
  e.reference_value = to_vector(cfg.get_list("reference.value"));
  e.eps_beta = cfg.get_double("robust.eps_beta");
  const std::string mode = cfg.get("robust.mode");
  if (mode == "robust") {
    e.mode = RunMode::kRobust;
  } else if (mode == "softened") {
    e.mode = RunMode::kSoftened;
  } else if (mode == "deterministic") {
    e.mode = RunMode::kDeterministic;
  } else {
    throw ConfigError("robust.mode must be robust, softened or deterministic");
  }

  const long S = cfg.get_int("compress.S");
  if (S < 0) throw ConfigError("compress.S must be nonnegative (0 disables compression)");
  if (S > 0) {
    CompressionConfig cc;
    cc.S = static_cast<int>(S);
    cc.ground_norm = parse_ground_norm(cfg.get("compress.norm"));
    cc.init = parse_init_kind(cfg.get("compress.init"));
    if (cc.init == InitKind::kProvided) {
      throw ConfigError("compress.init = provided is only available through the library");
    }
    cc.max_outer_iters = static_cast<int>(cfg.get_int("compress.max_iters"));
    cc.outer_tol = cfg.get_double("compress.tol");
    cc.gamma = cfg.get_double("compress.gamma");
    cc.hull_guard = cfg.get_bool("compress.hull_guard");
    cc.seed = e.seed;
    e.compression = cc;
  }
  e.steps = static_cast<int>(cfg.get_int("run.steps"));
  for (double s : cfg.get_list("sweep.S")) {
    if (s != std::floor(s) || s < 1) throw ConfigError("sweep.S entries must be positive integers");
    e.sweep_S.push_back(static_cast<int>(s));
  }
  e.jobs = static_cast<int>(cfg.get_int("sweep.jobs"));
  if (e.jobs < 1) throw ConfigError("sweep.jobs must be at least 1");
  e.output_dir = cfg.get("output.dir");
  e.config_hash = cfg.hash();
  if (e.Ki < 1 || e.K < 1) throw ConfigError("horizon.Ki and horizon.K must be at least 1");
  if (e.steps < 1) throw ConfigError("run.steps must be at least 1");
  if (!(e.c > 0.0)) throw ConfigError("cost.c must be positive");
  if (!(e.rho >= 0.0)) throw ConfigError("cost.rho must be nonnegative");
  if (!(e.eps_beta >= 0.0)) throw ConfigError("robust.eps_beta must be nonnegative");
  if (e.reference_kind == "figure8" && (!(e.period > 0.0) || !(e.amplitude > 0.0))) {
    throw ConfigError("figure8 reference needs positive period and amplitude");
  }
  return e;
}

SystemRealization ExperimentConfig::plant() const {
  if (system == "quadcopter") return quadcopter_model(Ts);
  if (system == "double-integrator") return double_integrator_model(Ts);
  return load_model_file(model_file);
}

InputBox ExperimentConfig::box(int m) const {
  InputBox b{broadcast(input_lower, m, "input.lower"), broadcast(input_upper, m, "input.upper")};
  b.validate(m);
  return b;
}

void ExperimentConfig::validate(const SystemRealization& sys) const {
  sys.validate();
  box(sys.m());
  const long need = min_data_length(sys.m(), sys.n(), Ki, K);
  if (N < need) {
    throw ConfigError("data.N = " + std::to_string(N) + " is below the minimum " +
                      std::to_string(need) + " for persistency of excitation");
  }
  if (output_weights.size() != 0) {
    broadcast(output_weights, sys.l(), "cost.weights");
    if ((output_weights.array() < 0.0).any()) throw ConfigError("cost.weights must be >= 0");
  }
  if (reference_kind == "constant") broadcast(reference_value, sys.l(), "reference.value");
  if (compression) compression->validate(static_cast<Eigen::Index>(sys.m() + sys.l()) * (Ki + K),
                                         N - (Ki + K) + 1);
}

Eigen::MatrixXd figure8_reference(double Ts, double period, double amplitude, double altitude,
                                  int length, int l) {
  if (!(period > 0.0) || !(amplitude > 0.0)) {
    throw ConfigError("figure8_reference: period and amplitude must be positive");
  }
  if (length < 0 || l < 1) throw ConfigError("figure8_reference: bad length or channel count");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(l, length);
  const double w = 2.0 * std::numbers::pi / period;
  for (int k = 0; k < length; ++k) {
    // Reduce the phase exactly when the period is a whole number of samples.
    const double steps_per_period = period / Ts;
    const double kk = std::nearbyint(steps_per_period) == steps_per_period
                          ? std::fmod(static_cast<double>(k), steps_per_period)
                          : static_cast<double>(k);
    const double t = kk * Ts;
    r(0, k) = amplitude * std::sin(w * t);
    if (l > 1) r(1, k) = amplitude * std::sin(2.0 * w * t) / 2.0;
    if (l > 2) r(2, k) = altitude;
  }
  return r;
}

Eigen::MatrixXd reference_signal(const ExperimentConfig& cfg, int l, int length) {
  if (cfg.reference_kind == "figure8") {
    return figure8_reference(cfg.Ts, cfg.period, cfg.amplitude, cfg.altitude, length, l);
  }
  const Eigen::VectorXd v = broadcast(cfg.reference_value, l, "reference.value");
  return v.replicate(1, length);
}

Eigen::VectorXd tracking_weights(const ExperimentConfig& cfg, int l) {
  if (cfg.output_weights.size() != 0) return broadcast(cfg.output_weights, l, "cost.weights");
  if (cfg.reference_kind == "constant") return Eigen::VectorXd::Ones(l);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(l);
  w.head(std::min(l, 3)).setOnes();
  return w;
}

TrainingData collect_training_data(const ExperimentConfig& cfg, const SystemRealization& sys) {
  cfg.validate(sys);
  const InputBox box = cfg.box(sys.m());
  std::mt19937_64 rng(cfg.seed);
  Eigen::MatrixXd u(sys.m(), cfg.N);
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    for (int i = 0; i < sys.m(); ++i) {
      u(i, k) = std::uniform_real_distribution<double>(box.lower[i], box.upper[i])(rng);
    }
  }
  TrainingData td;
  td.excitation = is_persistently_exciting(u, sys.n() + cfg.Ki + cfg.K);
  if (!td.excitation.exciting) {
    throw SolverError("training inputs are not persistently exciting: rank " +
                      std::to_string(td.excitation.rank) + " < " +
                      std::to_string(td.excitation.required_rank) + " (" +
                      td.excitation.reason + "); try another seed");
  }
  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  td.trajectory = simulate(sys, Eigen::VectorXd::Zero(sys.n()), u, noise);
  td.H = io_hankel(td.trajectory.inputs, td.trajectory.outputs, cfg.Ki + cfg.K);
  td.blocks = split_blocks(td.H, sys.m(), sys.l(), cfg.Ki, cfg.K);
  return td;
}

std::vector<int> RunLog::tracked() const {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    if (weights[j] > 0.0) out.push_back(static_cast<int>(j));
  return out;
}

Eigen::MatrixXd RunLog::errors() const {
  const std::vector<int> tr = tracked();
  Eigen::MatrixXd e(tr.size(), records.size());
  for (std::size_t k = 0; k < records.size(); ++k)
    for (std::size_t j = 0; j < tr.size(); ++j)
      e(j, k) = std::abs(records[k].y[tr[j]] - records[k].reference[tr[j]]);
  return e;
}

double RunLog::total_cost() const {
  double total = 0.0;
  for (const StepRecord& r : records) {
    total += r.u.lpNorm<1>() +
             c * (weights.array() * (r.y - r.reference).array().abs()).sum();
  }
  return total;
}

double RunLog::mean_solve_time() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const StepRecord& r : records) s += r.solve_time;
  return s / static_cast<double>(records.size());
}

RunLog run_receding_horizon(const ExperimentConfig& cfg) {
  const SystemRealization sys = cfg.plant();
  const TrainingData td = collect_training_data(cfg, sys);
  const int m = sys.m(), l = sys.l(), Ki = cfg.Ki, K = cfg.K;
  const InputBox box = cfg.box(m);

  RunLog log;
  log.c = cfg.c;
  log.weights = tracking_weights(cfg, l);
  Provenance& prov = log.provenance;
  prov.config_hash = cfg.config_hash;
  prov.seed = cfg.seed;
  prov.eps_beta = cfg.eps_beta;

  // Offline step, executed once.
  HankelBlocks blocks = td.blocks;
  if (cfg.compression) {
    const auto t0 = std::chrono::steady_clock::now();
    const SyntheticDataset ds = compress(td.H, *cfg.compression);
    prov.offline_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++prov.compress_runs;
    blocks = split_blocks(ds.atoms, m, l, Ki, K);
    prov.dataset = "synthetic";
    prov.eta = ds.eta;
  }
  log.dataset = restack(blocks);
  prov.columns = static_cast<int>(blocks.cols());
  prov.eps_bar = ambiguity_radius(cfg.eps_beta, prov.eta);

  const Eigen::MatrixXd ref = reference_signal(cfg, l, cfg.steps + K);
  std::mt19937_64 rng(cfg.seed + 1);
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(sys.q());
  if (cfg.noise.kind == NoiseKind::kGaussianIid) sigma = broadcast(cfg.noise.stddev, sys.q(), "noise");
  auto draw_noise = [&]() {
    Eigen::VectorXd v(sys.q());
    std::normal_distribution<double> nd;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = sigma[i] * nd(rng);
    return v;
  };

  // Warm-up at the input closest to zero to fill the first window.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.n());
  Eigen::MatrixXd past_u(m, Ki), past_y(l, Ki);
  const Eigen::VectorXd u_rest = Eigen::VectorXd::Zero(m).cwiseMax(box.lower).cwiseMin(box.upper);
  for (int i = 0; i < Ki; ++i) {
    const StepResult s = step(sys, x, u_rest, draw_noise());
    past_u.col(i) = u_rest;
    past_y.col(i) = s.y;
    x = s.x_next;
  }
  auto window = [&]() {
    return InitialWindow{stack_columns(past_u, 0, Ki), stack_columns(past_y, 0, Ki)};
  };

  CostSpec cost;
  cost.c = cfg.c;
  cost.rho = cfg.rho;
  cost.output_weights = log.weights;
  cost.reference = stack_columns(ref, 0, K);
  const InitialWindow w0 = window();
  std::optional<DeepcProgram> program;
  switch (cfg.mode) {
    case RunMode::kRobust:
      program.emplace(blocks, w0, cost, box, Consistency::kSoft, prov.eps_bar);
      break;
    case RunMode::kSoftened:
      program.emplace(blocks, w0, cost, box, Consistency::kSoft);
      break;
    case RunMode::kDeterministic:
      program.emplace(blocks, w0, cost, box, Consistency::kHard);
      break;
  }

  log.records.reserve(cfg.steps);
  for (int k = 0; k < cfg.steps; ++k) {
    StepRecord rec;
    rec.k = k;
    rec.window = window();
    program->set_window(rec.window);
    program->set_reference(stack_columns(ref, k, K));
    const ControlSolution sol = program->solve();
    if (!sol.ok()) {
      std::string where;
      if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        where = (std::filesystem::path(cfg.output_dir) /
                 ("failed_step_" + std::to_string(k) + ".lp")).string();
        std::ofstream dump(where);
        write_lp_text(dump, program->lp());
        where = "; problem written to " + where;
      }
      throw SolverError("receding horizon: step " + std::to_string(k) + " solve failed (" +
                        (sol.status == LpStatus::kInfeasible ? "infeasible"
                         : sol.status == LpStatus::kUnbounded ? "unbounded"
                                                              : "iteration limit") +
                        ")" + where);
    }
    rec.u = sol.u_star.head(m);
    const StepResult s = step(sys, x, rec.u, draw_noise());
    rec.y = s.y;
    rec.reference = ref.col(k);
    rec.objective = sol.objective;
    rec.solve_time = sol.solve_time;
    rec.iterations = sol.iterations;
    x = s.x_next;
    if (Ki > 1) {
      past_u.leftCols(Ki - 1) = past_u.rightCols(Ki - 1).eval();
      past_y.leftCols(Ki - 1) = past_y.rightCols(Ki - 1).eval();
    }
    past_u.col(Ki - 1) = rec.u;
    past_y.col(Ki - 1) = rec.y;
    log.records.push_back(std::move(rec));
  }
  return log;
}

void write_runlog_csv(std::ostream& os, const RunLog& log) {
  if (log.records.empty()) throw ConfigError("write_runlog_csv: empty log");
  const Eigen::Index m = log.records[0].u.size(), l = log.records[0].y.size();
  os << "# c=" << fmt(log.c) << " weights=";
  for (Eigen::Index j = 0; j < log.weights.size(); ++j) os << (j ? ";" : "") << fmt(log.weights[j]);
  os << '\n' << "k";
  for (Eigen::Index i = 0; i < m; ++i) os << ",u_" << i + 1;
  for (Eigen::Index i = 0; i < l; ++i) os << ",y_" << i + 1;
  for (Eigen::Index i = 0; i < l; ++i) os << ",r_" << i + 1;
  const std::vector<int> tr = log.tracked();
  for (int j : tr) os << ",e_" << j + 1;
  os << ",objective,solve_time,iterations\n";
  for (const StepRecord& r : log.records) {
    os << r.k;
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << fmt(r.u[i]);
    for (Eigen::Index i = 0; i < l; ++i) os << ',' << fmt(r.y[i]);
    for (Eigen::Index i = 0; i < l; ++i) os << ',' << fmt(r.reference[i]);
    for (int j : tr) os << ',' << fmt(r.y[j] - r.reference[j]);
    os << ',' << fmt(r.objective) << ',' << fmt(r.solve_time) << ',' << r.iterations << '\n';
  }
}

RunLog read_runlog_csv(std::istream& is) {
  RunLog log;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# c=", 0) != 0) {
    throw ConfigError("runlog: missing `# c=... weights=...` line");
  }
  {
    const auto sp = line.find(" weights=");
    if (sp == std::string::npos) throw ConfigError("runlog: missing weights");
    log.c = parse_number(line.substr(4, sp - 4), "runlog c");
    const auto ws = split(line.substr(sp + 9), ';');
    log.weights.resize(static_cast<Eigen::Index>(ws.size()));
    for (std::size_t j = 0; j < ws.size(); ++j) log.weights[j] = parse_number(ws[j], "runlog weights");
  }
  if (!std::getline(is, line)) throw ConfigError("runlog: missing header");
  const auto head = split(line, ',');
  Eigen::Index m = 0, l = 0, ne = 0;
  for (const auto& h : head) {
    if (h.rfind("u_", 0) == 0) ++m;
    if (h.rfind("y_", 0) == 0) ++l;
    if (h.rfind("e_", 0) == 0) ++ne;
  }
  const std::size_t width = 1 + m + 2 * l + ne + 3;
  if (head.empty() || head[0] != "k" || head.size() != width || l != log.weights.size()) {
    throw ConfigError("runlog: malformed header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != width) throw ConfigError("runlog: ragged row");
    StepRecord r;
    std::size_t p = 0;
    r.k = static_cast<int>(parse_number(f[p++], "runlog"));
    r.u.resize(m);
    r.y.resize(l);
    r.reference.resize(l);
    for (Eigen::Index i = 0; i < m; ++i) r.u[i] = parse_number(f[p++], "runlog");
    for (Eigen::Index i = 0; i < l; ++i) r.y[i] = parse_number(f[p++], "runlog");
    for (Eigen::Index i = 0; i < l; ++i) r.reference[i] = parse_number(f[p++], "runlog");
    p += ne;
    r.objective = parse_number(f[p++], "runlog");
    r.solve_time = parse_number(f[p++], "runlog");
    r.iterations = static_cast<long>(parse_number(f[p++], "runlog"));
    log.records.push_back(std::move(r));
  }
  return log;
}

void write_meta(std::ostream& os, const Provenance& p) {
  os << "config_hash=" << p.config_hash << '\n'
     << "dataset=" << p.dataset << '\n'
     << "columns=" << p.columns << '\n'
     << "eta=" << fmt(p.eta) << '\n'
     << "eps_beta=" << fmt(p.eps_beta) << '\n'
     << "eps_bar=" << fmt(p.eps_bar) << '\n'
     << "seed=" << p.seed << '\n'
     << "compress_runs=" << p.compress_runs << '\n'
     << "offline_time=" << fmt(p.offline_time) << '\n';
}

Provenance read_meta(std::istream& is) {
  Provenance p;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string k = line.substr(0, eq), v = line.substr(eq + 1);
    if (k == "config_hash") p.config_hash = v;
    else if (k == "dataset") p.dataset = v;
    else if (k == "columns") p.columns = static_cast<int>(parse_number(v, "meta"));
    else if (k == "eta") p.eta = parse_number(v, "meta");
    else if (k == "eps_beta") p.eps_beta = parse_number(v, "meta");
    else if (k == "eps_bar") p.eps_bar = parse_number(v, "meta");
    else if (k == "seed") p.seed = static_cast<std::uint64_t>(std::stoull(v));
    else if (k == "compress_runs") p.compress_runs = static_cast<int>(parse_number(v, "meta"));
    else if (k == "offline_time") p.offline_time = parse_number(v, "meta");
  }
  return p;
}

Comparison compare_runs(const std::vector<const RunLog*>& logs,
                        const std::vector<std::string>& names) {
  if (logs.empty()) throw ConfigError("compare_runs: no logs");
  if (names.size() != logs.size()) throw ConfigError("compare_runs: one name per log");
  const RunLog& base = *logs[0];
  Comparison cmp;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const RunLog& g = *logs[i];
    if (g.tracked() != base.tracked()) {
      throw ConfigError("compare_runs: `" + names[i] + "` tracks different channels");
    }
    const std::size_t common = std::min(g.records.size(), base.records.size());
    for (std::size_t k = 0; k < common; ++k) {
      if (g.records[k].reference.size() != base.records[k].reference.size() ||
          (g.records[k].reference - base.records[k].reference).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("compare_runs: `" + names[i] + "` has a different reference at step " +
                          std::to_string(k));
      }
    }
    RunSummary s;
    s.name = names[i];
    s.steps = static_cast<int>(g.records.size());
    s.tracked = g.tracked();
    const Eigen::MatrixXd e = g.errors();
    s.mean_abs_error = e.cols() ? Eigen::VectorXd(e.rowwise().mean())
                                : Eigen::VectorXd::Zero(e.rows());
    s.max_abs_error = e.cols() ? Eigen::VectorXd(e.rowwise().maxCoeff())
                               : Eigen::VectorXd::Zero(e.rows());
    s.total_cost = g.total_cost();
    s.mean_solve_time = g.mean_solve_time();
    s.dataset = g.provenance.dataset;
    s.columns = g.provenance.columns;
    s.eta = g.provenance.eta;
    s.eps_bar = g.provenance.eps_bar;
    cmp.runs.push_back(std::move(s));
    cmp.logs.push_back(&g);
  }
  return cmp;
}

void write_comparison_csv(std::ostream& os, const Comparison& cmp) {
  const RunSummary& b = cmp.runs.at(0);
  os << "name,steps,dataset,columns,eta,eps_bar,total_cost,mean_solve_time";
  for (int j : b.tracked) os << ",mean_abs_e_" << j + 1;
  for (int j : b.tracked) os << ",max_abs_e_" << j + 1;
  os << ",delta_total_cost,delta_mean_solve_time\n";
  for (const RunSummary& s : cmp.runs) {
    os << s.name << ',' << s.steps << ',' << s.dataset << ',' << s.columns << ',' << fmt(s.eta)
       << ',' << fmt(s.eps_bar) << ',' << fmt(s.total_cost) << ',' << fmt(s.mean_solve_time);
    for (Eigen::Index j = 0; j < s.mean_abs_error.size(); ++j) os << ',' << fmt(s.mean_abs_error[j]);
    for (Eigen::Index j = 0; j < s.max_abs_error.size(); ++j) os << ',' << fmt(s.max_abs_error[j]);
    os << ',' << fmt(s.total_cost - b.total_cost) << ','
       << fmt(s.mean_solve_time - b.mean_solve_time) << '\n';
  }
}

void write_series_csv(std::ostream& os, const Comparison& cmp) {
  os << 'k';
  std::size_t rows = 0;
  for (std::size_t i = 0; i < cmp.runs.size(); ++i) {
    for (int j : cmp.runs[i].tracked) os << ',' << cmp.runs[i].name << "_e_" << j + 1;
    os << ',' << cmp.runs[i].name << "_solve_time";
    rows = std::max(rows, cmp.logs[i]->records.size());
  }
  os << '\n';
  std::vector<Eigen::MatrixXd> errs;
  for (const RunLog* g : cmp.logs) errs.push_back(g->errors());
  for (std::size_t k = 0; k < rows; ++k) {
    os << k;
    for (std::size_t i = 0; i < cmp.runs.size(); ++i) {
      const bool has = k < cmp.logs[i]->records.size();
      for (Eigen::Index j = 0; j < errs[i].rows(); ++j) {
        os << ',';
        if (has) os << fmt(errs[i](j, static_cast<Eigen::Index>(k)));
      }
      os << ',';
      if (has) os << fmt(cmp.logs[i]->records[k].solve_time);
    }
    os << '\n';
  }
}

void write_eta_curve_csv(std::ostream& os, const std::vector<EtaPoint>& curve) {
  os << "S,eta,wall_time,iterations,ok,error\n";
  for (const EtaPoint& p : curve) {
    std::string err = p.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ' ';
    os << p.S << ',' << fmt(p.eta) << ',' << fmt(p.wall_time) << ',' << p.iterations << ','
       << (p.ok ? 1 : 0) << ',' << err << '\n';
  }
}

}  // namespace syndeepc
