#include "budgetdag/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "budgetdag/csv.hpp"

namespace budgetdag {

using nlohmann::json;

std::vector<double> ExperimentConfig::deltas(int num_sensors_hint) const {
  if (!sweep_deltas.empty()) return sweep_deltas;
  if (sweep_points < 1) throw ConfigError("config: sweep_points must be >= 1");
  const int m = num_sensors() > 0 ? num_sensors() : num_sensors_hint;
  if (m <= 0)
    throw ConfigError("config: default sweep grid needs a known sensor count");
  const double max_delta = static_cast<double>(m);
  std::vector<double> grid = {0.0};
  // Log-spaced over (0, M]: two decades up to the sensor count.
  const double lo = std::log10(max_delta / 100.0);
  const double hi = std::log10(max_delta);
  for (int i = 0; i < sweep_points; ++i) {
    const double t = sweep_points == 1 ? 1.0 : static_cast<double>(i) / (sweep_points - 1);
    grid.push_back(std::pow(10.0, lo + t * (hi - lo)));
  }
  grid.back() = max_delta;  // land exactly on M
  return grid;
}

namespace {

json config_to_json_value(const ExperimentConfig& c) {
  json groups = json::array();
  for (const SensorGroupConfig& g : c.sensors)
    groups.push_back({{"name", g.name}, {"columns", g.columns}, {"cost", g.cost}});
  return json{
      {"train_csv", c.train_csv},
      {"test_csv", c.test_csv},
      {"has_header", c.has_header},
      {"label_column", c.label_column},
      {"sensors", groups},
      {"sensors_per_column", c.sensors_per_column},
      {"poly_degree", c.poly_degree},
      {"homogeneous", c.homogeneous},
      {"mode", c.mode == RunMode::kFullDag ? "full-dag" : "subset-select"},
      {"subset_select",
       {{"t", c.subset_select.t},
        {"budget_units", c.subset_select.budget_units},
        {"append_full_subset", c.subset_select.append_full_subset},
        {"val_fraction", c.subset_select.val_fraction}}},
      {"sweep_deltas", c.sweep_deltas},
      {"sweep_points", c.sweep_points},
      {"seed", c.seed},
      {"split_fraction", c.split_fraction},
      {"output_dir", c.output_dir},
      {"optimizer",
       {{"lambda", c.optimizer.lambda},
        {"max_iters", c.optimizer.max_iters},
        {"tol", c.optimizer.tol}}},
      {"csl_backend", c.csl_backend},
      {"dag_cap", c.dag_cap},
  };
}

ExperimentConfig config_from_json_value(const json& j) {
  ExperimentConfig c;
  c.train_csv = j.value("train_csv", c.train_csv);
  c.test_csv = j.value("test_csv", c.test_csv);
  c.has_header = j.value("has_header", c.has_header);
  c.label_column = j.value("label_column", c.label_column);
  if (j.contains("sensors")) {
    for (const json& g : j.at("sensors")) {
      SensorGroupConfig group;
      group.name = g.value("name", "");
      group.columns = g.at("columns").get<std::vector<int>>();
      group.cost = g.value("cost", 1.0);
      c.sensors.push_back(std::move(group));
    }
  }
  c.sensors_per_column = j.value("sensors_per_column", c.sensors_per_column);
  c.poly_degree = j.value("poly_degree", c.poly_degree);
  c.homogeneous = j.value("homogeneous", c.homogeneous);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "full-dag") {
      c.mode = RunMode::kFullDag;
    } else if (mode == "subset-select") {
      c.mode = RunMode::kSubsetSelect;
    } else {
      throw ConfigError("config: unknown mode '" + mode + "'");
    }
  }
  if (j.contains("subset_select")) {
    const json& s = j.at("subset_select");
    c.subset_select.t = s.value("t", c.subset_select.t);
    c.subset_select.budget_units = s.value("budget_units", c.subset_select.budget_units);
    c.subset_select.append_full_subset =
        s.value("append_full_subset", c.subset_select.append_full_subset);
    c.subset_select.val_fraction = s.value("val_fraction", c.subset_select.val_fraction);
  }
  if (j.contains("sweep_deltas"))
    c.sweep_deltas = j.at("sweep_deltas").get<std::vector<double>>();
  c.sweep_points = j.value("sweep_points", c.sweep_points);
  c.seed = j.value("seed", c.seed);
  c.split_fraction = j.value("split_fraction", c.split_fraction);
  c.output_dir = j.value("output_dir", c.output_dir);
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    c.optimizer.lambda = o.value("lambda", c.optimizer.lambda);
    c.optimizer.max_iters = o.value("max_iters", c.optimizer.max_iters);
    c.optimizer.tol = o.value("tol", c.optimizer.tol);
  }
  c.csl_backend = j.value("csl_backend", c.csl_backend);
  c.dag_cap = j.value("dag_cap", c.dag_cap);
  return c;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_json_value(config).dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_json_value(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write " + path.string());
  out << config_to_json(config) << "\n";
}

void validate_config(const ExperimentConfig& c) {
  if (c.train_csv.empty()) throw ConfigError("config: train_csv is required");
  if (c.sensors.empty() && !c.sensors_per_column)
    throw ConfigError("config: list sensor groups or set sensors_per_column");
  if (!c.sensors.empty() && c.sensors_per_column)
    throw ConfigError("config: sensors_per_column conflicts with an explicit group list");
  std::set<int> seen;
  for (const SensorGroupConfig& g : c.sensors) {
    if (g.columns.empty())
      throw ConfigError("config: sensor group '" + g.name + "' has no columns");
    if (g.cost < 0.0)
      throw ConfigError("config: sensor group '" + g.name + "' has negative cost");
    for (int col : g.columns) {
      if (col < 0) throw ConfigError("config: negative column index in group '" + g.name + "'");
      if (!seen.insert(col).second)
        throw ConfigError("config: column " + std::to_string(col) +
                          " appears in more than one sensor group");
    }
  }
  for (double d : c.sweep_deltas)
    if (d < 0.0 || !std::isfinite(d))
      throw ConfigError("config: sweep deltas must be finite and non-negative");
  if (c.poly_degree < 1) throw ConfigError("config: poly_degree must be >= 1");
  if (c.split_fraction <= 0.0 || c.split_fraction >= 1.0)
    throw ConfigError("config: split_fraction must lie in (0,1)");
  if (c.csl_backend != "filter-tree" && c.csl_backend != "memorizing")
    throw ConfigError("config: csl_backend must be 'filter-tree' or 'memorizing'");
  if (c.mode == RunMode::kSubsetSelect) {
    const SubsetSelectConfig& s = c.subset_select;
    const int effective_t = s.t + (s.append_full_subset ? 1 : 0);
    if (s.t < 1 || effective_t > 8)
      throw ConfigError("config: subset count (plus appended full subset) must lie in 1..8");
    if (s.budget_units < 1) throw ConfigError("config: budget_units must be >= 1");
    if (s.val_fraction <= 0.0 || s.val_fraction >= 1.0)
      throw ConfigError("config: val_fraction must lie in (0,1)");
  }
}

IngestResult ingest(const ExperimentConfig& config) {
  validate_config(config);

  const CsvTable train_table = load_csv(config.train_csv, config.has_header);
  Dataset train = table_to_dataset(train_table, config.label_column);
  Dataset test;
  if (!config.test_csv.empty()) {
    test = table_to_dataset(load_csv(config.test_csv, config.has_header), config.label_column);
    if (test.features.cols != train.features.cols)
      throw DataError("ingest: train and test column counts differ");
    const int classes = std::max(train.num_classes, test.num_classes);
    train.num_classes = test.num_classes = classes;
  } else {
    std::tie(train, test) = split_dataset(train, config.split_fraction, config.seed);
  }

  IngestResult out;
  if (config.sensors_per_column) {
    for (std::size_t j = 0; j < train.features.cols; ++j)
      out.sensors.push_back({static_cast<int>(j), "f" + std::to_string(j),
                             {static_cast<int>(j)}, 1.0});
  } else {
    out.sensors.reserve(config.sensors.size());
    for (std::size_t m = 0; m < config.sensors.size(); ++m) {
      const SensorGroupConfig& g = config.sensors[m];
      for (int col : g.columns)
        if (static_cast<std::size_t>(col) >= train.features.cols)
          throw ConfigError("config: column " + std::to_string(col) + " in group '" + g.name +
                            "' outside feature width " + std::to_string(train.features.cols));
      out.sensors.push_back({static_cast<int>(m), g.name, g.columns, g.cost});
    }
  }

  out.standardizer = Standardizer::fit(train.features);
  out.standardizer.apply(train.features);
  out.standardizer.apply(test.features);
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

}  // namespace budgetdag
