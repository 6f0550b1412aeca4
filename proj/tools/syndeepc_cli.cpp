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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "syndeepc/error.hpp"
#include "syndeepc/harness.hpp"

namespace fs = std::filesystem;
using namespace syndeepc;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

Config resolve(const Common& c) {
  Config cfg = c.config_path.empty() ? Config::defaults() : Config::load(c.config_path);
  for (const std::string& o : c.overrides) cfg.apply_override(o);
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

void save_config(const Config& cfg, const fs::path& dir) {
  auto os = open_out(dir / "config.txt");
  cfg.write(os);
}

CompressionConfig compression_settings(const Config& cfg, const ExperimentConfig& e) {
  if (e.compression) return *e.compression;
  Config tmp = cfg;
  tmp.set("compress.S", "1");
  return *ExperimentConfig::from(tmp).compression;
}

int cmd_simulate(const Config& cfg) {
  const ExperimentConfig e = ExperimentConfig::from(cfg);
  const SystemRealization sys = e.plant();
  const TrainingData td = collect_training_data(e, sys);
  const fs::path dir = e.output_dir;
  {
    auto os = open_out(dir / "trajectory.csv");
    write_trajectory_csv(os, td.trajectory);
  }
  save_config(cfg, dir);
  std::cout << "N=" << e.N << " columns=" << td.blocks.cols() << " input rank "
            << td.excitation.rank << "/" << td.excitation.required_rank << "\n"
            << "wrote " << (dir / "trajectory.csv").string() << "\n";
  return 0;
}

int cmd_compress(const Config& cfg) {
  const ExperimentConfig e = ExperimentConfig::from(cfg);
  if (!e.compression) throw ConfigError("compress needs compress.S > 0");
  const SystemRealization sys = e.plant();
  const TrainingData td = collect_training_data(e, sys);
  const SyntheticDataset ds = compress(td.H, *e.compression);
  const fs::path dir = e.output_dir;
  fs::create_directories(dir);
  save_synthetic((dir / "synthetic.csv").string(), ds);
  save_config(cfg, dir);
  std::cout << "R=" << td.H.cols() << " S=" << ds.atoms.cols() << " eta=" << std::setprecision(10)
            << ds.eta << " iterations=" << ds.iterations << "\n";
  for (const std::string& ev : ds.events) std::cout << "note: " << ev << "\n";
  return 0;
}

int cmd_run(const Config& cfg) {
  const ExperimentConfig e = ExperimentConfig::from(cfg);
  const RunLog log = run_receding_horizon(e);
  const fs::path dir = e.output_dir;
  {
    auto os = open_out(dir / "runlog.csv");
    write_runlog_csv(os, log);
  }
  {
    auto os = open_out(dir / "meta.txt");
    write_meta(os, log.provenance);
  }
  save_config(cfg, dir);
  const Comparison cmp = compare_runs({&log}, {"run"});
  const RunSummary& s = cmp.runs[0];
  std::cout << "dataset=" << s.dataset << " columns=" << s.columns << " eta=" << s.eta
            << " eps_bar=" << s.eps_bar << "\n"
            << "steps=" << s.steps << " total_cost=" << s.total_cost
            << " mean_solve_time=" << s.mean_solve_time << "s\n";
  for (std::size_t j = 0; j < s.tracked.size(); ++j) {
    std::cout << "  channel " << s.tracked[j] + 1 << ": mean |e|=" << s.mean_abs_error[j]
              << " max |e|=" << s.max_abs_error[j] << "\n";
  }
  return 0;
}

int cmd_sweep(const Config& cfg) {
  const ExperimentConfig e = ExperimentConfig::from(cfg);
  const SystemRealization sys = e.plant();
  const TrainingData td = collect_training_data(e, sys);
  const auto curve = eta_curve(td.H, e.sweep_S, compression_settings(cfg, e), e.jobs);
  const fs::path dir = e.output_dir;
  {
    auto os = open_out(dir / "eta_curve.csv");
    write_eta_curve_csv(os, curve);
  }
  save_config(cfg, dir);
  bool all_ok = true;
  for (const EtaPoint& p : curve) {
    std::cout << "S=" << p.S << " eta=" << std::setprecision(10) << p.eta
              << " time=" << p.wall_time << "s" << (p.ok ? "" : " FAILED: " + p.error) << "\n";
    all_ok = all_ok && p.ok;
  }
  return all_ok ? 0 : 3;
}

int cmd_compare(const Config& cfg, const std::vector<std::string>& runs) {
  if (runs.empty()) throw ConfigError("compare needs at least one run directory");
  std::vector<RunLog> logs;
  std::vector<std::string> names;
  for (const std::string& r : runs) {
    std::ifstream in(fs::path(r) / "runlog.csv");
    if (!in) throw ConfigError("cannot read " + (fs::path(r) / "runlog.csv").string());
    RunLog log = read_runlog_csv(in);
    std::ifstream meta(fs::path(r) / "meta.txt");
    if (meta) log.provenance = read_meta(meta);
    logs.push_back(std::move(log));
    names.push_back(fs::path(r).filename().string());
  }
  std::vector<const RunLog*> ptrs;
  for (const RunLog& g : logs) ptrs.push_back(&g);
  const Comparison cmp = compare_runs(ptrs, names);
  const fs::path dir = cfg.get("output.dir");
  {
    auto os = open_out(dir / "comparison.csv");
    write_comparison_csv(os, cmp);
  }
  {
    auto os = open_out(dir / "series.csv");
    write_series_csv(os, cmp);
  }
  write_comparison_csv(std::cout, cmp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"syndeepc: data-driven predictive control with compressed datasets"};
  app.require_subcommand(1);
  Common common;
  std::vector<std::string> run_dirs;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config_path, "key = value configuration file");
    sub->allow_extras();
    return sub;
  };
  auto* simulate = add_common(app.add_subcommand("simulate", "collect training data"));
  auto* comp = add_common(app.add_subcommand("compress", "offline dataset compression"));
  auto* run = add_common(app.add_subcommand("run", "receding-horizon control run"));
  auto* sweep = add_common(app.add_subcommand("sweep", "eta(S) curve"));
  auto* compare = add_common(app.add_subcommand("compare", "compare run directories"));
  compare->add_option("runs", run_dirs, "run output directories");
  app.footer("Any configuration key can be overridden with --section.key=value.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    for (CLI::App* sub : {simulate, comp, run, sweep, compare}) {
      if (!sub->parsed()) continue;
      for (const std::string& extra : sub->remaining()) {
        if (extra.rfind("--", 0) != 0 || extra.find('=') == std::string::npos) {
          throw ConfigError("unexpected argument `" + extra + "` (use --key=value)");
        }
        common.overrides.push_back(extra);
      }
      const Config cfg = resolve(common);
      if (sub == simulate) return cmd_simulate(cfg);
      if (sub == comp) return cmd_compress(cfg);
      if (sub == run) return cmd_run(cfg);
      if (sub == sweep) return cmd_sweep(cfg);
      return cmd_compare(cfg, run_dirs);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
