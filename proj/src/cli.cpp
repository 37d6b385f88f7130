#include "syndec/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "syndec/ci.hpp"
#include "syndec/corpus.hpp"
#include "syndec/decomposition.hpp"
#include "syndec/io.hpp"

namespace syndec::cli {

namespace {

using nlohmann::json;

/// Where a subcommand gets its problem instance from: a channel file, the
/// example registry, or a seeded random draw.
struct InstanceOptions {
  std::string file;
  std::string example;
  bool random = false;
  std::vector<int> cardinalities{2, 2};
  int output_cardinality = 2;
  unsigned long long seed = 1;
};

struct CommonOptions {
  double tol = 1e-10;
  long max_cycles = 100000;
  double base = 2.0;
  bool as_json = false;
  bool as_csv = false;
  std::string out_path;
};

void add_instance_flags(CLI::App* cmd, InstanceOptions& opt) {
  cmd->add_option("file", opt.file, "JSON channel file to load");
  cmd->add_option("--example", opt.example, "named instance from the registry (see `examples`)");
  cmd->add_flag("--random", opt.random, "draw a random instance instead of loading one");
  cmd->add_option("--cards", opt.cardinalities,
                  "input cardinalities for --random (default 2 2)");
  cmd->add_option("--output-card", opt.output_cardinality,
                  "output cardinality for --random (default 2)");
  cmd->add_option("--seed", opt.seed, "random seed for --random (default 1)");
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--tol", opt.tol, "solver convergence tolerance (default 1e-10)");
  cmd->add_option("--max-cycles", opt.max_cycles, "solver cycle budget (default 100000)");
  cmd->add_option("--base", opt.base, "logarithm base for reported quantities (default 2)");
  cmd->add_flag("--json", opt.as_json, "emit JSON");
  cmd->add_flag("--csv", opt.as_csv, "emit CSV");
  cmd->add_option("-o,--output", opt.out_path, "write to this file instead of stdout");
}

ChannelFile load_instance(const InstanceOptions& opt) {
  const int sources = (opt.file.empty() ? 0 : 1) + (opt.example.empty() ? 0 : 1) +
                      (opt.random ? 1 : 0);
  if (sources != 1) {
    throw validation_error("choose exactly one instance source: FILE, --example, or --random");
  }
  if (!opt.file.empty()) return parse_channel_file(opt.file);
  if (!opt.example.empty()) {
    NamedExample ex = example(opt.example);
    return {std::move(ex.p), std::move(ex.k)};
  }
  const ChannelSpace space(opt.cardinalities, opt.output_cardinality);
  auto [p, k] = random_channel(space, opt.seed);
  return {std::move(p), std::move(k)};
}

/// Writes `text` to opt.out_path if set, else to `out`.
void emit(const CommonOptions& opt, std::ostream& out, const std::string& text) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) throw validation_error("cannot write file: " + opt.out_path);
  f << text;
  if (!f) throw validation_error("failed while writing file: " + opt.out_path);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_decompose(const InstanceOptions& inst, const CommonOptions& opt, std::ostream& out) {
  const ChannelFile instance = load_instance(inst);
  const SolverConfig config{opt.tol, opt.max_cycles, 0.0, false};
  const DecompositionProfile profile =
      decompose(instance.input, instance.channel, config, opt.base);

  if (opt.as_csv) {
    std::ostringstream csv;
    csv << "level,divergence,iterations,residual,hit_boundary\n";
    for (std::size_t i = 0; i < profile.d.size(); ++i) {
      const ProjectionResult& level = profile.per_level[i + 1];
      csv << (i + 1) << ',' << fmt(profile.d[i]) << ',' << level.iterations << ','
          << fmt(level.residual) << ',' << (level.hit_boundary ? 1 : 0) << '\n';
    }
    emit(opt, out, csv.str());
    return 0;
  }

  json doc;
  doc["base"] = profile.base;
  doc["mutual_information"] = profile.total_mutual_information;
  doc["d"] = profile.d;
  doc["sum_residual"] = profile.sum_residual;
  json levels = json::array();
  for (std::size_t i = 0; i < profile.per_level.size(); ++i) {
    const ProjectionResult& level = profile.per_level[i];
    levels.push_back({{"level", i},
                      {"iterations", level.iterations},
                      {"residual", level.residual},
                      {"output_deviation", level.output_deviation},
                      {"hit_boundary", level.hit_boundary}});
  }
  doc["levels"] = std::move(levels);
  doc["solver"] = {{"tolerance", config.tolerance},
                   {"max_cycles", config.max_cycles},
                   {"epsilon", config.epsilon}};
  emit(opt, out, doc.dump(2) + "\n");
  return 0;
}

int run_ci(const InstanceOptions& inst, const CommonOptions& opt, std::ostream& out) {
  const ChannelFile instance = load_instance(inst);
  const double ci = ci_measure(instance.input, instance.channel, opt.base);
  const double d2 = d2_via_polytope(instance.input, instance.channel, opt.base);
  const double mi = mutual_information(compose_joint(instance.input, instance.channel), opt.base);

  if (opt.as_csv) {
    std::ostringstream csv;
    csv << "mutual_information,ci,d2\n"
        << fmt(mi) << ',' << fmt(ci) << ',' << fmt(d2) << '\n';
    emit(opt, out, csv.str());
    return 0;
  }
  json doc;
  doc["base"] = opt.base;
  doc["mutual_information"] = mi;
  doc["ci"] = ci;
  doc["d2"] = d2;
  emit(opt, out, doc.dump(2) + "\n");
  return 0;
}

std::vector<double> linspace(double lo, double hi, int steps, const char* what) {
  if (steps < 2) throw validation_error(std::string(what) + " needs at least 2 steps");
  if (!(hi > lo)) throw validation_error(std::string(what) + " range must be increasing");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  }
  return grid;
}

struct SweepOptions {
  double alpha0 = 1.0;
  double beta0 = 0.7;
  double beta_min = 0.7;
  double beta_max = 3.0;
  int steps = 50;
};

int run_sweep(const SweepOptions& sweep, const CommonOptions& opt, std::ostream& out) {
  const std::vector<double> grid = linspace(sweep.beta_min, sweep.beta_max, sweep.steps, "sweep");
  const std::vector<SweepPoint> points = sweep_lower_bound(sweep.alpha0, sweep.beta0, grid);

  if (opt.as_json) {
    json doc = json::array();
    for (const SweepPoint& p : points) {
      doc.push_back({{"beta", p.beta},
                     {"alpha", p.alpha},
                     {"marginal_residual", p.marginal_residual},
                     {"mutual_information_bits", p.mutual_information},
                     {"lower_bound_bits", p.lower_bound}});
    }
    emit(opt, out, doc.dump(2) + "\n");
    return 0;
  }
  std::ostringstream csv;
  csv << "beta,alpha,marginal_residual,mutual_information_bits,lower_bound_bits\n";
  for (const SweepPoint& p : points) {
    csv << fmt(p.beta) << ',' << fmt(p.alpha) << ',' << fmt(p.marginal_residual) << ','
        << fmt(p.mutual_information) << ',' << fmt(p.lower_bound) << '\n';
  }
  emit(opt, out, csv.str());
  return 0;
}

struct HeatmapOptions {
  double alpha_min = 0.0;
  double alpha_max = 4.0;
  int alpha_steps = 41;
  double beta_min = 0.0;
  double beta_max = 3.0;
  int beta_steps = 31;
  std::vector<std::pair<double, double>> refs;
  std::string traces_path;
};

int run_heatmap(const HeatmapOptions& hm, const CommonOptions& opt, std::ostream& out) {
  const std::vector<double> alpha = linspace(hm.alpha_min, hm.alpha_max, hm.alpha_steps, "alpha");
  const std::vector<double> beta = linspace(hm.beta_min, hm.beta_max, hm.beta_steps, "beta");
  const HeatmapResult result = heatmap(alpha, beta, hm.refs);

  std::ostringstream csv;
  csv << "alpha,beta,mi_bits\n";
  for (std::size_t a = 0; a < result.alpha_grid.size(); ++a) {
    for (std::size_t b = 0; b < result.beta_grid.size(); ++b) {
      csv << fmt(result.alpha_grid[a]) << ',' << fmt(result.beta_grid[b]) << ','
          << fmt(result.mi[a * result.beta_grid.size() + b]) << '\n';
    }
  }
  emit(opt, out, csv.str());

  if (!hm.traces_path.empty()) {
    std::ofstream f(hm.traces_path);
    if (!f) throw validation_error("cannot write file: " + hm.traces_path);
    f << "ref_alpha,ref_beta,beta,alpha,residual\n";
    for (std::size_t r = 0; r < result.traces.size(); ++r) {
      for (const TracePoint& t : result.traces[r]) {
        f << fmt(hm.refs[r].first) << ',' << fmt(hm.refs[r].second) << ',' << fmt(t.beta) << ','
          << fmt(t.alpha) << ',' << fmt(t.residual) << '\n';
      }
    }
  }
  return 0;
}

int run_examples(const InstanceOptions& inst, const CommonOptions& opt, std::ostream& out) {
  if (!inst.example.empty()) {
    const NamedExample ex = example(inst.example);
    emit(opt, out, write_channel_text(ex.p, ex.k));
    return 0;
  }
  std::ostringstream list;
  for (const std::string& name : example_names()) {
    const NamedExample ex = example(name);
    list << name;
    if (ex.expected_d) {
      list << "  d = (";
      for (std::size_t i = 0; i < ex.expected_d->size(); ++i) {
        list << (i ? ", " : "") << fmt((*ex.expected_d)[i]);
      }
      list << ")";
    }
    if (!ex.notes.empty()) list << "  -- " << ex.notes;
    list << '\n';
  }
  emit(opt, out, list.str());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutual-information decomposition by interaction order"};
  app.require_subcommand(1);

  InstanceOptions dec_inst;
  CommonOptions dec_opt;
  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "split I(X:Y) into per-order contributions d_1..d_N");
  add_instance_flags(decompose_cmd, dec_inst);
  add_common_flags(decompose_cmd, dec_opt);

  InstanceOptions ci_inst;
  CommonOptions ci_opt;
  CLI::App* ci_cmd = app.add_subcommand(
      "ci", "compare the polytope synergy measures (ci and d2) on a two-input instance");
  add_instance_flags(ci_cmd, ci_inst);
  add_common_flags(ci_cmd, ci_opt);

  SweepOptions sweep_opt;
  CommonOptions sweep_common;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "marginal-matched mutual-information lower bound along a beta grid");
  sweep_cmd->add_option("--alpha0", sweep_opt.alpha0, "reference interaction strength (default 1)");
  sweep_cmd->add_option("--beta0", sweep_opt.beta0, "reference gain (default 0.7)");
  sweep_cmd->add_option("--beta-min", sweep_opt.beta_min, "grid start (default 0.7)");
  sweep_cmd->add_option("--beta-max", sweep_opt.beta_max, "grid end (default 3)");
  sweep_cmd->add_option("--steps", sweep_opt.steps, "grid points (default 50)");
  add_common_flags(sweep_cmd, sweep_common);

  HeatmapOptions hm_opt;
  CommonOptions hm_common;
  CLI::App* heatmap_cmd = app.add_subcommand(
      "heatmap", "mutual information of the gain family over an (alpha, beta) grid");
  heatmap_cmd->add_option("--alpha-min", hm_opt.alpha_min, "alpha grid start (default 0)");
  heatmap_cmd->add_option("--alpha-max", hm_opt.alpha_max, "alpha grid end (default 4)");
  heatmap_cmd->add_option("--alpha-steps", hm_opt.alpha_steps, "alpha grid points (default 41)");
  heatmap_cmd->add_option("--beta-min", hm_opt.beta_min, "beta grid start (default 0)");
  heatmap_cmd->add_option("--beta-max", hm_opt.beta_max, "beta grid end (default 3)");
  heatmap_cmd->add_option("--beta-steps", hm_opt.beta_steps, "beta grid points (default 31)");
  heatmap_cmd->add_option("--ref", hm_opt.refs,
                          "reference (alpha, beta) pair to trace across the grid; repeatable");
  heatmap_cmd->add_option("--traces", hm_opt.traces_path, "file for the matched-alpha traces");
  add_common_flags(heatmap_cmd, hm_common);

  InstanceOptions ex_inst;
  CommonOptions ex_opt;
  CLI::App* examples_cmd = app.add_subcommand(
      "examples", "list the registry, or dump one instance as a channel file");
  examples_cmd->add_option("--example", ex_inst.example, "name to dump as a channel file");
  examples_cmd->add_option("-o,--output", ex_opt.out_path, "write to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 64;
  }

  try {
    if (decompose_cmd->parsed()) return run_decompose(dec_inst, dec_opt, out);
    if (ci_cmd->parsed()) return run_ci(ci_inst, ci_opt, out);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opt, sweep_common, out);
    if (heatmap_cmd->parsed()) return run_heatmap(hm_opt, hm_common, out);
    if (examples_cmd->parsed()) return run_examples(ex_inst, ex_opt, out);
    err << app.help();
    return 64;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const infinite_divergence_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const solver_error& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace syndec::cli
