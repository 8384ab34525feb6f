#include "budgetdag/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace budgetdag {

using nlohmann::json;

namespace {

json poly_to_json(const PolyMap& p) {
  return json{{"degree", p.degree},
              {"input_columns", p.input_columns},
              {"include_bias", p.include_bias},
              {"homogeneous", p.homogeneous}};
}

PolyMap poly_from_json(const json& j) {
  PolyMap p;
  p.degree = j.at("degree").get<int>();
  p.input_columns = j.at("input_columns").get<std::vector<int>>();
  p.include_bias = j.at("include_bias").get<bool>();
  p.homogeneous = j.at("homogeneous").get<bool>();
  return p;
}

json bank_to_json(const ClassifierBank& bank) {
  json entries = json::array();
  for (const auto& [bits, cls] : bank.entries()) {
    entries.push_back({{"sensor_bits", bits},
                       {"width", cls.sensors.width()},
                       {"poly", poly_to_json(cls.poly)},
                       {"class_ids", cls.class_ids},
                       {"heads", cls.heads},
                       {"binary_mode", cls.binary_mode},
                       {"majority_class", cls.majority_class}});
  }
  return json{{"num_classes", bank.num_classes()},
              {"majority_class", bank.majority_class()},
              {"entries", entries}};
}

ClassifierBank bank_from_json(const json& j) {
  ClassifierBank bank(j.at("num_classes").get<int>(), j.at("majority_class").get<int>());
  for (const json& e : j.at("entries")) {
    SubsetClassifier cls;
    cls.sensors = SensorSubset(e.at("sensor_bits").get<Mask>(), e.at("width").get<int>());
    cls.poly = poly_from_json(e.at("poly"));
    cls.class_ids = e.at("class_ids").get<std::vector<int>>();
    cls.heads = e.at("heads").get<std::vector<std::vector<double>>>();
    cls.binary_mode = e.at("binary_mode").get<bool>();
    cls.majority_class = e.at("majority_class").get<int>();
    bank.insert(std::move(cls));
  }
  return bank;
}

json csl_model_to_json(const CslModel& m) {
  if (const ConstantAction* c = m.get_if<ConstantAction>())
    return json{{"type", "constant"}, {"action", c->action}, {"k", c->k}};
  if (const FilterTree* t = m.get_if<FilterTree>()) {
    json levels = json::array();
    for (const auto& level : t->levels()) {
      json matches = json::array();
      for (const FilterTreeMatch& match : level)
        matches.push_back(
            {{"left", match.left}, {"right", match.right}, {"weights", match.weights}});
      levels.push_back(std::move(matches));
    }
    return json{{"type", "filter-tree"},
                {"k", t->num_actions()},
                {"poly", poly_to_json(t->poly())},
                {"levels", levels}};
  }
  const MemorizingPredictor* memo = m.get_if<MemorizingPredictor>();
  json table = json::array();
  for (const auto& [key, action] : memo->table())
    table.push_back({{"key", key}, {"action", action}});
  return json{{"type", "memorizing"},
              {"k", memo->num_actions()},
              {"fallback", memo->fallback()},
              {"table", table}};
}

CslModel csl_model_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant")
    return CslModel(ConstantAction{j.at("action").get<int>(), j.at("k").get<int>()});
  if (type == "filter-tree") {
    std::vector<std::vector<FilterTreeMatch>> levels;
    for (const json& level : j.at("levels")) {
      std::vector<FilterTreeMatch> matches;
      for (const json& m : level)
        matches.push_back({m.at("left").get<int>(), m.at("right").get<int>(),
                           m.at("weights").get<std::vector<double>>()});
      levels.push_back(std::move(matches));
    }
    return CslModel(
        FilterTree(j.at("k").get<int>(), poly_from_json(j.at("poly")), std::move(levels)));
  }
  if (type == "memorizing") {
    std::map<std::vector<double>, int> table;
    for (const json& row : j.at("table"))
      table.emplace(row.at("key").get<std::vector<double>>(), row.at("action").get<int>());
    return CslModel(
        MemorizingPredictor(j.at("k").get<int>(), std::move(table), j.at("fallback").get<int>()));
  }
  throw DataError("model: unknown policy type '" + type + "'");
}

}  // namespace

PathTrace TrainedModel::infer_raw(std::span<const double> x) const {
  std::vector<double> row(x.begin(), x.end());
  standardizer.apply(row);
  return policy.infer(row);
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  const AcquisitionDag& dag = model.policy.dag();
  json units = json::array();
  for (const DagUnit& u : dag.units())
    units.push_back({{"name", u.name}, {"sensor_bits", u.sensors.bits()}});

  json sensors = json::array();
  for (const SensorSpec& s : model.policy.sensors())
    sensors.push_back(
        {{"id", s.id}, {"name", s.name}, {"columns", s.columns}, {"cost", s.cost}});

  json policies = json::array();
  for (const CslModel& m : model.policy.node_models()) policies.push_back(csl_model_to_json(m));

  const json doc{
      {"magic", kModelMagic},
      {"version", kModelFormatVersion},
      {"config", nlohmann::json::parse(config_to_json(model.config))},
      {"delta", model.delta},
      {"standardizer", {{"mean", model.standardizer.mean}, {"scale", model.standardizer.scale}}},
      {"dag",
       {{"kind", dag.kind() == AcquisitionDag::Kind::kFull ? "full" : "union"},
        {"num_sensors", dag.num_sensors()},
        {"units", units}}},
      {"sensors", sensors},
      {"bank", bank_to_json(model.policy.bank())},
      {"policies", policies},
  };

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("model: cannot write " + tmp.string());
    out << doc.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("model: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw DataError("model: corrupt file " + path.string() + ": " + e.what());
  }

  try {
    if (!doc.contains("magic") || doc.at("magic").get<std::string>() != kModelMagic)
      throw DataError("model: " + path.string() + " is not a budgetdag model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw ConfigError("model: format version " + std::to_string(version) +
                        " is incompatible with this build (expected " +
                        std::to_string(kModelFormatVersion) + ")");

    TrainedModel model;
    model.config = config_from_json(doc.at("config").dump());
    model.delta = doc.at("delta").get<double>();
    model.standardizer.mean = doc.at("standardizer").at("mean").get<std::vector<double>>();
    model.standardizer.scale = doc.at("standardizer").at("scale").get<std::vector<double>>();

    const json& jd = doc.at("dag");
    const int num_sensors = jd.at("num_sensors").get<int>();
    std::vector<DagUnit> units;
    for (const json& u : jd.at("units"))
      units.push_back({u.at("name").get<std::string>(),
                       SensorSubset(u.at("sensor_bits").get<Mask>(), num_sensors)});
    const auto kind = jd.at("kind").get<std::string>() == "full" ? AcquisitionDag::Kind::kFull
                                                                 : AcquisitionDag::Kind::kUnion;
    AcquisitionDag dag(kind, std::move(units), num_sensors);

    std::vector<SensorSpec> sensors;
    for (const json& s : doc.at("sensors"))
      sensors.push_back({s.at("id").get<int>(), s.at("name").get<std::string>(),
                         s.at("columns").get<std::vector<int>>(), s.at("cost").get<double>()});

    auto bank = std::make_shared<ClassifierBank>(bank_from_json(doc.at("bank")));

    std::vector<CslModel> models;
    for (const json& p : doc.at("policies")) models.push_back(csl_model_from_json(p));
    if (static_cast<int>(models.size()) != dag.num_nodes())
      throw DataError("model: policy count does not match DAG node count");

    model.policy = PolicyModel(std::move(dag), std::move(bank), std::move(sensors),
                               std::move(models));
    return model;
  } catch (const json::exception& e) {
    throw DataError("model: corrupt file " + path.string() + ": " + e.what());
  }
}

}  // namespace budgetdag
