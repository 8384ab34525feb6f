// Command-line surface: select-subsets, train, evaluate, sweep,
// inspect-model. Every flag can also come from the JSON config file; on a
// conflict the file wins and a warning is printed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "budgetdag/csv.hpp"
#include "budgetdag/graph_reduce.hpp"
#include "budgetdag/model_io.hpp"
#include "budgetdag/sweep.hpp"

using namespace budgetdag;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> train_csv;
  std::optional<std::string> test_csv;
  std::optional<int> label_column;
  std::optional<int> degree;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> output_dir;
  std::optional<std::string> backend;
  int threads = 0;

  void attach(CLI::App* cmd, bool config_required = true) {
    auto* opt = cmd->add_option("--config", config_path, "experiment config JSON");
    if (config_required) opt->required();
    cmd->add_option("--train-csv", train_csv, "training CSV path");
    cmd->add_option("--test-csv", test_csv, "test CSV path");
    cmd->add_option("--label-column", label_column, "label column index (-1: last)");
    cmd->add_option("--degree", degree, "polynomial degree");
    cmd->add_option("--seed", seed, "root seed");
    cmd->add_option("--mode", mode, "full-dag or subset-select");
    cmd->add_option("--output-dir", output_dir, "output directory");
    cmd->add_option("--backend", backend, "csl backend: filter-tree or memorizing");
    cmd->add_option("--threads", threads, "worker thread cap (0: library default)");
  }

  ExperimentConfig resolve() const {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    ExperimentConfig cfg;
    nlohmann::json file_keys;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
      std::ifstream in(config_path);
      in >> file_keys;
    }

    auto merge = [&](const char* key, const auto& flag, auto apply) {
      if (!flag.has_value()) return;
      if (file_keys.contains(key)) {
        std::cerr << "warning: " << key << " is set on the command line and in "
                  << config_path << "; the config file wins\n";
        return;
      }
      apply(*flag);
    };
    merge("train_csv", train_csv, [&](const std::string& v) { cfg.train_csv = v; });
    merge("test_csv", test_csv, [&](const std::string& v) { cfg.test_csv = v; });
    merge("label_column", label_column, [&](int v) { cfg.label_column = v; });
    merge("poly_degree", degree, [&](int v) { cfg.poly_degree = v; });
    merge("seed", seed, [&](std::uint64_t v) { cfg.seed = v; });
    merge("mode", mode, [&](const std::string& v) {
      if (v == "full-dag") {
        cfg.mode = RunMode::kFullDag;
      } else if (v == "subset-select") {
        cfg.mode = RunMode::kSubsetSelect;
      } else {
        throw ConfigError("unknown mode '" + v + "'");
      }
    });
    merge("output_dir", output_dir, [&](const std::string& v) { cfg.output_dir = v; });
    merge("csl_backend", backend, [&](const std::string& v) { cfg.csl_backend = v; });
    return cfg;
  }
};

TrainedModel train_model(const ExperimentConfig& cfg, double delta) {
  const IngestResult data = ingest(cfg);
  const AcquisitionDag dag = prepare_dag(cfg, data);
  PolyMap poly{cfg.poly_degree, {}, true, cfg.homogeneous};
  auto bank = std::make_shared<const ClassifierBank>(
      train_bank(data.train, dag, data.sensors, poly, cfg.optimizer));
  return train_at_delta(cfg, data, dag, bank, delta);
}

// Raw-CSV evaluation through the model's own standardizer.
int evaluate_cmd(const ExperimentConfig& cfg, const std::string& model_path,
                 const std::string& split, const std::string& traces_path) {
  const TrainedModel model = load_model(model_path);
  if (model.config.mode != cfg.mode)
    throw ConfigError("model was trained in " +
                      std::string(model.config.mode == RunMode::kFullDag ? "full-dag"
                                                                         : "subset-select") +
                      " mode but the config requests the other mode");

  Dataset train_raw = table_to_dataset(load_csv(cfg.train_csv, cfg.has_header),
                                       cfg.label_column);
  Dataset eval_raw;
  if (!cfg.test_csv.empty()) {
    eval_raw = split == "train"
                   ? std::move(train_raw)
                   : table_to_dataset(load_csv(cfg.test_csv, cfg.has_header), cfg.label_column);
  } else {
    auto [tr, te] = split_dataset(train_raw, cfg.split_fraction, cfg.seed);
    eval_raw = split == "train" ? std::move(tr) : std::move(te);
  }

  std::ofstream traces;
  if (!traces_path.empty()) {
    traces.open(traces_path);
    traces << "example,label,predicted,sensors_acquired,acquisition_cost,path\n";
  }

  const std::size_t n = eval_raw.size();
  double err = 0.0, cost = 0.0, sensors = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PathTrace t = model.infer_raw(eval_raw.x(i));
    err += t.predicted_label != eval_raw.y(i) ? 1.0 : 0.0;
    cost += t.acquisition_cost;
    sensors += static_cast<double>(t.final_sensors.count());
    if (traces.is_open()) {
      traces << i << "," << eval_raw.y(i) << "," << t.predicted_label << ","
             << t.final_sensors.count() << "," << format_double(t.acquisition_cost) << ",";
      for (Mask m : t.visited_units) traces << m << ">";
      traces << "SC\n";
    }
  }
  std::cout << "examples: " << n << "\n"
            << "error: " << format_double(err / n) << "\n"
            << "avg_cost: " << format_double(cost / n) << "\n"
            << "avg_sensors: " << format_double(sensors / n) << "\n"
            << "avg_loss: " << format_double(err / n + cost / n) << "\n";
  return 0;
}

int inspect_cmd(const std::string& model_path) {
  const TrainedModel model = load_model(model_path);
  const AcquisitionDag& dag = model.policy.dag();
  std::cout << "magic: " << kModelMagic << "\n"
            << "version: " << kModelFormatVersion << "\n"
            << "mode: " << (dag.kind() == AcquisitionDag::Kind::kFull ? "full-dag"
                                                                      : "subset-select")
            << "\n"
            << "delta: " << format_double(model.delta) << "\n"
            << "raw_sensors: " << dag.num_sensors() << "\n"
            << "units: " << dag.num_units() << "\n"
            << "nodes: " << dag.num_nodes() << "\n"
            << "edges: " << dag.num_edges() << "\n"
            << "bank_entries: " << model.policy.bank().entries().size() << "\n"
            << "classes: " << model.policy.bank().num_classes() << "\n"
            << "standardized_columns: " << model.standardizer.mean.size() << "\n";
  for (const DagUnit& u : dag.units())
    std::cout << "unit " << u.name << ": sensors " << u.sensors.to_string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"budgeted test-time classification over sensor-acquisition DAGs"};
  app.require_subcommand(1);

  CommonFlags select_flags, train_flags, eval_flags, sweep_flags;

  CLI::App* select = app.add_subcommand("select-subsets", "greedy sensor-subset selection");
  select_flags.attach(select);
  std::string select_out;
  select->add_option("--out", select_out, "write selected subsets JSON here");

  CLI::App* train = app.add_subcommand("train", "train bank and policies at one delta");
  train_flags.attach(train);
  double train_delta = 0.0;
  std::string train_out = "model.json";
  train->add_option("--delta", train_delta, "uniform sensor cost")->required();
  train->add_option("--out", train_out, "model output path");

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a saved model on a dataset");
  eval_flags.attach(evaluate);
  std::string eval_model, eval_split = "test", eval_traces;
  evaluate->add_option("--model", eval_model, "model file")->required();
  evaluate->add_option("--split", eval_split, "test or train")
      ->check(CLI::IsMember({"test", "train"}));
  evaluate->add_option("--dump-traces", eval_traces, "write per-example traces CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "budget sweep over the delta grid");
  sweep_flags.attach(sweep);

  CLI::App* inspect = app.add_subcommand("inspect-model", "describe a saved model");
  std::string inspect_model;
  inspect->add_option("--model", inspect_model, "model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (select->parsed()) {
      const ExperimentConfig cfg = select_flags.resolve();
      const IngestResult data = ingest(cfg);
      std::vector<SensorSubset> sigmas;
      prepare_dag(cfg, data, &sigmas);
      nlohmann::json out = nlohmann::json::array();
      for (const SensorSubset& s : sigmas)
        out.push_back({{"sensor_bits", s.bits()}, {"members", s.members()}});
      if (select_out.empty()) {
        std::cout << out.dump(2) << "\n";
      } else {
        std::ofstream f(select_out);
        f << out.dump(2) << "\n";
      }
    } else if (train->parsed()) {
      const ExperimentConfig cfg = train_flags.resolve();
      save_model(train_model(cfg, train_delta), train_out);
      std::cout << "wrote " << train_out << "\n";
    } else if (evaluate->parsed()) {
      return evaluate_cmd(eval_flags.resolve(), eval_model, eval_split, eval_traces);
    } else if (sweep->parsed()) {
      const ExperimentConfig cfg = sweep_flags.resolve();
      const BudgetCurve curve = run_sweep(cfg);
      std::cout << "wrote " << (fs::path(cfg.output_dir) / "curve.csv").string() << " ("
                << curve.rows.size() << " rows)\n";
    } else if (inspect->parsed()) {
      return inspect_cmd(inspect_model);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const TrainError& e) {
    std::cerr << "training failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
