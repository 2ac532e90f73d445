// Copyright 2026 The qfmap Authors
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

// qfm: command-line front end for data generation, feature-map search,
// decomposition, simplification, evaluation and benchmarking.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qfm/qfm.hpp"

namespace {

using nlohmann::json;
using namespace qfm;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 0;
  long long shots = 0;
  unsigned threads = 0;
  std::string log_level = "warn";
  double C = 1000.0;
  std::string result_path;
};

struct DataOptions {
  std::string data;
  std::string train;
  std::string test;
  double train_fraction = data::kDefaultTrainFraction;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool required = true) {
  auto* grp = cmd->add_option_group("data", "Dataset input");
  auto* d = grp->add_option("--data", o.data, "CSV with all samples, split by --train-fraction")
                ->check(CLI::ExistingFile);
  auto* tr = grp->add_option("--train", o.train, "CSV with the training split")->check(CLI::ExistingFile);
  auto* te = grp->add_option("--test", o.test, "CSV with the test split")->check(CLI::ExistingFile);
  tr->needs(te);
  te->needs(tr);
  d->excludes(tr);
  d->excludes(te);
  if (required) grp->require_option(1, 2);
  cmd->add_option("--train-fraction", o.train_fraction, "Train share when splitting --data")
      ->check(CLI::Range(0.0, 1.0));
}

bool has_data(const DataOptions& o) { return !o.data.empty() || !o.train.empty(); }

data::Dataset load_data(const DataOptions& o, std::uint64_t seed) {
  if (!o.data.empty()) return data::split(data::load_csv(o.data), o.train_fraction, seed);
  return data::join(data::load_csv(o.train), data::load_csv(o.test));
}

json data_echo(const DataOptions& o) {
  json j;
  if (!o.data.empty()) {
    j["data"] = o.data;
    j["train_fraction"] = o.train_fraction;
  } else {
    j["train"] = o.train;
    j["test"] = o.test;
  }
  return j;
}

svm::SvmConfig svm_config(const Globals& g) {
  svm::SvmConfig c;
  c.C = g.C;
  c.seed = g.seed;
  return c;
}

json global_echo(const Globals& g) {
  return {{"seed", g.seed}, {"shots", g.shots}, {"threads", g.threads}, {"C", g.C}};
}

// "out.json" -> "out<suffix>"
std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

void emit(const Globals& g, const json& result) {
  if (g.result_path.empty())
    std::cout << result.dump(2) << '\n';
  else
    write_json_file(g.result_path, result);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

// gen-data ------------------------------------------------------------------

struct GenDataOptions {
  std::string kind = "moons";
  int n = data::kDefaultSamples;
  double noise = data::kDefaultMoonsNoise;
  double gap = data::kDefaultAdhocGap;
  double train_fraction = data::kDefaultTrainFraction;
  std::string out_train;
  std::string out_test;
};

int run_gen_data(const Globals& g, const GenDataOptions& o) {
  const auto full = o.kind == "moons" ? data::make_moons(o.n, o.noise, g.seed) : data::make_adhoc(o.n, o.gap, g.seed);
  const auto d = data::split(full, o.train_fraction, g.seed);
  {
    auto out = open_out(o.out_train);
    data::write_csv(out, d, d.train);
  }
  {
    auto out = open_out(o.out_test);
    data::write_csv(out, d, d.test);
  }
  json config{{"kind", o.kind}, {"n", o.n}, {"train_fraction", o.train_fraction}};
  if (o.kind == "moons") config["noise"] = o.noise;
  else config["gap"] = o.gap;
  config.update(global_echo(g));
  emit(g, {{"command", "gen-data"},
           {"config", config},
           {"train_path", o.out_train},
           {"test_path", o.out_test},
           {"train_size", d.train.size()},
           {"test_size", d.test.size()}});
  return kExitOk;
}

// train-ga ------------------------------------------------------------------

struct TrainGaOptions {
  ga::GaConfig ga;
  std::string mutation_mode = "flip";
  DataOptions data;
  std::string out;
  std::string history;
};

int run_train_ga(const Globals& g, TrainGaOptions o) {
  const auto d = load_data(o.data, g.seed);
  o.ga.seed = g.seed;
  o.ga.shots = g.shots;
  o.ga.threads = g.threads;
  o.ga.svm = svm_config(g);
  o.ga.mutation_mode = o.mutation_mode == "flip" ? ga::MutationMode::FlipOneBit : ga::MutationMode::Randomize;
  const auto r = ga::evolve(o.ga, d);

  save_feature_map(o.out, FeatureMap{r.best.circuit, FeatureTransform::None});
  const std::string history = o.history.empty() ? sibling(o.out, "_history.csv") : o.history;
  {
    auto out = open_out(history);
    out << "generation,best_fitness,mean_fitness,best_accuracy,best_cost\n";
    for (const auto& s : r.history)
      out << s.generation << ',' << s.best_fitness << ',' << s.mean_fitness << ',' << s.best_accuracy << ','
          << s.best_cost << '\n';
  }
  json config{{"population", o.ga.population}, {"genes", o.ga.genes},
              {"weight", o.ga.weight},         {"pool", o.ga.pool_size},
              {"mutation_prob", o.ga.mutation_prob}, {"mutation_mode", o.mutation_mode},
              {"generations", o.ga.generations}, {"qubits", o.ga.n_qubits}};
  config.update(global_echo(g));
  config.update(data_echo(o.data));
  emit(g, {{"command", "train-ga"},
           {"config", config},
           {"chromosome", ga::to_string(r.best.chromosome)},
           {"fitness", r.best.score.fitness},
           {"accuracy", r.best.score.accuracy},
           {"gate_cost", r.best.score.cost},
           {"circuit_path", o.out},
           {"history_path", history}});
  return kExitOk;
}

// train-ansatz --------------------------------------------------------------

struct TrainAnsatzOptions {
  std::string kind = "he";
  int depth = 1;
  int max_evals = 500;
  double rho_start = 0.5;
  double rho_end = 1e-3;
  DataOptions data;
  std::string out;
};

int run_train_ansatz(const Globals& g, const TrainAnsatzOptions& o) {
  const auto d = load_data(o.data, g.seed);
  vqc::AnsatzSpec spec{vqc::ansatz_kind_from_string(o.kind), o.depth, static_cast<int>(d.dimension())};
  vqc::TrainConfig t;
  t.optimizer = {o.rho_start, o.rho_end, o.max_evals};
  t.seed = g.seed;
  t.shots = g.shots;
  t.svm = svm_config(g);
  t.threads = g.threads == 0 ? default_threads() : g.threads;
  const auto r = vqc::train(spec, d, t);

  const std::string circuit_path = sibling(o.out, "_circuit.json");
  const std::string history_path = sibling(o.out, "_history.csv");
  save_feature_map(circuit_path, FeatureMap{r.circuit, FeatureTransform::None});
  {
    auto out = open_out(history_path);
    out << "iteration,theta_norm,objective\n";
    for (const auto& h : r.history) out << h.iteration << ',' << h.theta_norm << ',' << h.objective << '\n';
  }
  const int raw = gate_cost(r.circuit);
  const int simplified = gate_cost(simplify::peephole(r.circuit));
  json config{{"kind", o.kind}, {"max_evals", o.max_evals}, {"rho_start", o.rho_start}, {"rho_end", o.rho_end}};
  if (spec.kind == vqc::AnsatzKind::HardwareEfficient) config["depth"] = o.depth;
  config.update(global_echo(g));
  config.update(data_echo(o.data));
  const json result{{"command", "train-ansatz"},
                    {"config", config},
                    {"params", r.params},
                    {"accuracy", r.accuracy},
                    {"gate_cost", raw},
                    {"gate_cost_simplified", simplified},
                    {"evaluations", r.evals},
                    {"capped", r.capped},
                    {"circuit_path", circuit_path},
                    {"history_path", history_path}};
  write_json_file(o.out, result);
  emit(g, result);
  return kExitOk;
}

// decompose -----------------------------------------------------------------

CMatrix read_unitary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<Complex>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::erase(line, '"');
    std::erase(line, ' ');
    std::erase(line, '\r');
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "' in " + path, line_no);
      }
    }
    if (values.size() % 2 != 0) throw ParseError("expected re,im pairs in " + path, line_no);
    std::vector<Complex> row;
    for (std::size_t k = 0; k < values.size(); k += 2) row.emplace_back(values[k], values[k + 1]);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row width differs from the first row in " + path, line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows.front().size())
    throw ValidationError("unitary CSV must hold a square matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

struct DecomposeOptions {
  std::string unitary;
  std::string out;
  std::string report;
};

int run_decompose(const Globals& g, const DecomposeOptions& o) {
  const CMatrix u = read_unitary_csv(o.unitary);
  const Circuit c = udecomp::qsd(u);
  save_feature_map(o.out, FeatureMap{c, FeatureTransform::None});
  const CMatrix rebuilt = unitary_of(c, {});
  json report{{"qubits", c.n_qubits},
              {"gate_cost", gate_cost(c)},
              {"gate_cost_simplified", gate_cost(simplify::peephole(c))},
              {"gates", c.gates.size()},
              {"unitarity_error", unitarity_error(u)},
              {"reconstruction_error", phase_aligned_distance(rebuilt, u)}};
  if (!o.report.empty()) write_json_file(o.report, report);
  json config{{"unitary", o.unitary}};
  config.update(global_echo(g));
  emit(g, {{"command", "decompose"}, {"config", config}, {"circuit_path", o.out}, {"report", report}});
  return kExitOk;
}

// simplify ------------------------------------------------------------------

struct SimplifyOptions {
  std::string circuit;
  DataOptions data;
  std::string out;
  std::string report;
};

int run_simplify(const Globals& g, const SimplifyOptions& o) {
  const FeatureMap fm = load_feature_map(o.circuit);
  FeatureMap result_map;
  simplify::SimplifyReport report;
  if (has_data(o.data)) {
    const auto d = load_data(o.data, g.seed);
    std::tie(result_map, report) =
        simplify::ablate(fm, d, svm_config(g), g.threads == 0 ? default_threads() : g.threads);
  } else {
    auto [c, r] = simplify::simplify(fm.circuit);
    result_map = FeatureMap{std::move(c), fm.transform};
    report = std::move(r);
  }
  save_feature_map(o.out, result_map);
  const json rep = simplify::to_json(report);
  if (!o.report.empty()) write_json_file(o.report, rep);
  json config{{"circuit", o.circuit}, {"ablate", has_data(o.data)}};
  config.update(global_echo(g));
  if (has_data(o.data)) config.update(data_echo(o.data));
  emit(g, {{"command", "simplify"}, {"config", config}, {"circuit_path", o.out}, {"report", rep}});
  return kExitOk;
}

// eval ----------------------------------------------------------------------

struct EvalOptions {
  std::string circuit;
  DataOptions data;
  int resolution = 50;
  std::string grid;
};

int run_eval(const Globals& g, const EvalOptions& o) {
  const FeatureMap fm = load_feature_map(o.circuit);
  const auto d = load_data(o.data, g.seed);
  const auto prepared_dim = fm.prepare(d.features.front()).size();
  if (static_cast<int>(prepared_dim) < fm.circuit.feature_dimension())
    throw DimensionError("circuit reads " + std::to_string(fm.circuit.feature_dimension()) +
                         " features but the data has " + std::to_string(d.dimension()));
  const unsigned threads = g.threads == 0 ? default_threads() : g.threads;
  const QuantumKernel kernel{fm, g.shots, g.seed};
  const auto ev = fit_and_score(kernel, d, svm_config(g), threads);

  json result{{"command", "eval"},
              {"accuracy", ev.accuracy},
              {"gate_cost", gate_cost(fm.circuit)},
              {"support_vectors", ev.model.support_indices.size()},
              {"converged", ev.model.converged}};
  if (!o.grid.empty()) {
    if (d.dimension() != 2) throw DimensionError("decision grids need 2-feature data");
    if (o.resolution < 1) throw ValidationError("grid resolution must be >= 1");
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-lo[0], -lo[1]};
    for (const auto& x : d.features)
      for (int k = 0; k < 2; ++k) lo[k] = std::min(lo[k], x[k]), hi[k] = std::max(hi[k], x[k]);
    SampleList points;
    const int r = o.resolution;
    auto coord = [&](int k, int i) { return r == 1 ? 0.5 * (lo[k] + hi[k]) : lo[k] + (hi[k] - lo[k]) * i / (r - 1); };
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) points.push_back({coord(0, i), coord(1, j)});
    const auto values = svm::decision_values(ev.model, cross_gram(kernel, points, d.train_features(), threads));
    auto out = open_out(o.grid);
    out << "x,y,decision\n";
    for (std::size_t p = 0; p < points.size(); ++p)
      out << points[p][0] << ',' << points[p][1] << ',' << values[p] << '\n';
    result["grid_path"] = o.grid;
    result["grid_rows"] = points.size();
  }
  json config{{"circuit", o.circuit}, {"grid_resolution", o.resolution}};
  config.update(global_echo(g));
  config.update(data_echo(o.data));
  result["config"] = config;
  emit(g, result);
  return kExitOk;
}

// benchmark -----------------------------------------------------------------

struct BenchmarkOptions {
  bench::BenchmarkConfig cfg;
  int max_evals = 500;
  std::string out;
};

int run_benchmark(const Globals& g, BenchmarkOptions o) {
  o.cfg.seed = g.seed;
  o.cfg.shots = g.shots;
  o.cfg.threads = g.threads == 0 ? default_threads() : g.threads;
  o.cfg.svm = svm_config(g);
  o.cfg.optimizer.max_evals = o.max_evals;
  const auto rows = bench::run_benchmark(o.cfg);
  std::cerr << bench::render_table(rows);
  json config{{"data_seed", o.cfg.data_seed},
              {"samples", o.cfg.samples},
              {"moons_noise", o.cfg.moons_noise},
              {"adhoc_gap", o.cfg.adhoc_gap},
              {"ga_generations", o.cfg.ga.generations},
              {"ga_population", o.cfg.ga.population},
              {"ga_genes", o.cfg.ga.genes},
              {"max_evals", o.max_evals}};
  config.update(global_echo(g));
  const json result{{"command", "benchmark"}, {"config", config}, {"rows", bench::to_json(rows)}};
  if (!o.out.empty()) write_json_file(o.out, result);
  emit(g, result);
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.failed; }) ? kExitRuntime : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum feature-map toolkit: kernels, SVMs, circuit search and synthesis"};
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("--shots", g.shots, "Measurement shots per kernel entry (0 = exact)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--log-level", g.log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));
  app.add_option("--C", g.C, "SVM box constraint")->check(CLI::PositiveNumber);
  app.add_option("--result", g.result_path, "Write the result JSON here instead of stdout");

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a moons or ad hoc dataset");
  gen_cmd->add_option("--kind", gen.kind)->check(CLI::IsMember({"moons", "adhoc"}));
  gen_cmd->add_option("--n", gen.n, "Number of samples");
  gen_cmd->add_option("--noise", gen.noise, "Gaussian noise (moons)")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--gap", gen.gap, "Label margin (ad hoc)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--train-fraction", gen.train_fraction)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--out-train", gen.out_train)->required();
  gen_cmd->add_option("--out-test", gen.out_test)->required();

  TrainGaOptions tga;
  auto* ga_cmd = app.add_subcommand("train-ga", "Search feature maps with the genetic algorithm");
  ga_cmd->add_option("--population", tga.ga.population)->check(CLI::PositiveNumber);
  ga_cmd->add_option("--genes", tga.ga.genes)->check(CLI::PositiveNumber);
  ga_cmd->add_option("--weight", tga.ga.weight, "Accuracy penalty weight");
  ga_cmd->add_option("--pool", tga.ga.pool_size, "Mating pool size");
  ga_cmd->add_option("--mutation-prob", tga.ga.mutation_prob)->check(CLI::Range(0.0, 1.0));
  ga_cmd->add_option("--mutation-mode", tga.mutation_mode)->check(CLI::IsMember({"flip", "randomize"}));
  ga_cmd->add_option("--generations", tga.ga.generations)->check(CLI::NonNegativeNumber);
  ga_cmd->add_option("--qubits", tga.ga.n_qubits)->check(CLI::Range(1, kMaxQubits));
  add_data_options(ga_cmd, tga.data);
  ga_cmd->add_option("--out", tga.out, "Best circuit JSON")->required();
  ga_cmd->add_option("--history", tga.history, "Per-generation CSV (default: <out>_history.csv)");

  TrainAnsatzOptions tan;
  auto* an_cmd = app.add_subcommand("train-ansatz", "Train a variational feature map");
  an_cmd->add_option("--kind", tan.kind)->check(CLI::IsMember({"he", "ud"}));
  an_cmd->add_option("--depth", tan.depth, "HE depth")->check(CLI::PositiveNumber);
  an_cmd->add_option("--max-evals", tan.max_evals)->check(CLI::PositiveNumber);
  an_cmd->add_option("--rho-start", tan.rho_start)->check(CLI::PositiveNumber);
  an_cmd->add_option("--rho-end", tan.rho_end)->check(CLI::PositiveNumber);
  add_data_options(an_cmd, tan.data);
  an_cmd->add_option("--out", tan.out, "Parameters JSON; circuit and history are written beside it")->required();

  DecomposeOptions dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Compile a unitary with the Shannon decomposition");
  dec_cmd->add_option("--unitary", dec.unitary, "CSV of re,im cells")->required()->check(CLI::ExistingFile);
  dec_cmd->add_option("--out", dec.out, "Circuit JSON")->required();
  dec_cmd->add_option("--report", dec.report, "Reconstruction report JSON");

  SimplifyOptions sim;
  auto* sim_cmd = app.add_subcommand("simplify", "Reduce a circuit; with data, also ablate rotations");
  sim_cmd->add_option("--circuit", sim.circuit)->required()->check(CLI::ExistingFile);
  add_data_options(sim_cmd, sim.data, false);
  sim_cmd->add_option("--out", sim.out, "Simplified circuit JSON")->required();
  sim_cmd->add_option("--report", sim.report, "Report JSON");

  EvalOptions ev;
  auto* ev_cmd = app.add_subcommand("eval", "Train and score a QSVM for a circuit");
  ev_cmd->add_option("--circuit", ev.circuit)->required()->check(CLI::ExistingFile);
  add_data_options(ev_cmd, ev.data);
  ev_cmd->add_option("--resolution", ev.resolution, "Decision grid points per axis")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--grid", ev.grid, "Decision grid CSV");

  BenchmarkOptions bo;
  auto* bench_cmd = app.add_subcommand("benchmark", "Compare all methods on moons and ad hoc data");
  bench_cmd->add_option("--data-seed", bo.cfg.data_seed, "Seed for both datasets");
  bench_cmd->add_option("--samples", bo.cfg.samples)->check(CLI::Range(4, 100000));
  bench_cmd->add_option("--generations", bo.cfg.ga.generations)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--population", bo.cfg.ga.population)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-evals", bo.max_evals)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bo.out, "Result JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    log::set_level(log::level_from_string(g.log_level));
    if (g.threads != 0) set_default_threads(g.threads);
    if (gen_cmd->parsed()) return run_gen_data(g, gen);
    if (ga_cmd->parsed()) return run_train_ga(g, tga);
    if (an_cmd->parsed()) return run_train_ansatz(g, tan);
    if (dec_cmd->parsed()) return run_decompose(g, dec);
    if (sim_cmd->parsed()) return run_simplify(g, sim);
    if (ev_cmd->parsed()) return run_eval(g, ev);
    if (bench_cmd->parsed()) return run_benchmark(g, bo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
