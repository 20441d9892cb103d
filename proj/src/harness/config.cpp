#include "rankfair/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rankfair/error.hpp"
#include "rankfair/random.hpp"

namespace rankfair::harness {

namespace {

using nlohmann::json;

std::vector<double> unit_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

template <typename T>
std::vector<T> as_list(const json& value, const char* key) {
  if (value.is_array()) return value.get<std::vector<T>>();
  if (value.is_number() || value.is_string()) return {value.get<T>()};
  throw Error(std::string("config key '") + key + "' must be a value or a list");
}

void require_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw Error(std::string("grid '") + name + "' is empty");
}

}  // namespace

void SweepConfig::validate() const {
  if (models.empty()) throw Error("model list is empty");
  if (algorithms.empty()) throw Error("algorithm list is empty");
  require_grid(fm, "fm");
  require_grid(gamma, "gamma");
  require_grid(density, "d");
  require_grid(k_grid, "k_grid");
  for (Model m : models) {
    if (uses_homophily(m)) {
      require_grid(h_MM, "hMM");
      require_grid(h_mm, "hmm");
    }
  }
  if (repetitions < 1) throw Error("repetitions must be at least 1");
  if (cot_size < 1 || topk < 1) throw Error("cot_size and topk must be at least 1");
  for (double k : k_grid)
    if (!(k > 0.0 && k <= 100.0)) throw Error("k grid values must lie in (0, 100]");
  if (!(beta >= 0.0)) throw Error("beta must be nonnegative");
  for (const auto& c : expand_cells(*this)) c.params.validate();
}

std::uint64_t cell_seed(std::uint64_t base_seed, const GeneratorParams& params, std::size_t rep) {
  return base_seed ^ stable_hash(params.canonical() + "|rep=" + std::to_string(rep));
}

std::vector<Cell> expand_cells(const SweepConfig& config) {
  std::vector<Cell> cells;
  const std::vector<double> none{0.0};
  for (Model model : config.models) {
    const bool homophily = uses_homophily(model);
    const bool activity = uses_activity(model);
    for (double fm : config.fm)
      for (double d : config.density)
        for (double hMM : homophily ? config.h_MM : none)
          for (double hmm : homophily ? config.h_mm : none)
            for (double g : activity ? config.gamma : none)
              for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                Cell cell;
                auto& p = cell.params;
                p.model = model;
                p.n = config.n;
                p.fm = fm;
                p.density = d;
                p.attachment_offset = config.attachment_offset;
                if (homophily) {
                  p.h_MM = hMM;
                  p.h_mm = hmm;
                }
                if (activity) {
                  p.gamma_M = g;
                  p.gamma_m = g;
                }
                cell.rep = rep;
                p.seed = cell_seed(config.base_seed, p, rep);
                cells.push_back(std::move(cell));
              }
  }
  return cells;
}

std::vector<std::string_view> preset_names() { return {"paper-main", "paper-s4", "paper-s5"}; }

SweepConfig preset(std::string_view name) {
  SweepConfig c;
  c.h_MM = unit_grid();
  c.h_mm = unit_grid();
  if (name == "paper-main") return c;
  if (name == "paper-s4") {
    c.gamma = {1.5, 2.0, 2.5, 3.0, 3.5};
    return c;
  }
  if (name == "paper-s5") {
    c.models = {Model::Random};
    c.h_MM.clear();
    c.h_mm.clear();
    c.density = {0.0005, 0.001, 0.0015, 0.002, 0.005, 0.01, 0.05, 0.1};
    return c;
  }
  throw Error("unknown preset '" + std::string(name) + "' (expected paper-main, paper-s4 or paper-s5)");
}

SweepConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config must be a JSON object");

  static const std::set<std::string> known{"preset", "models", "n", "fm", "hMM", "hmm", "gamma", "d",
                                           "attachment_offset", "repetitions", "algorithms", "cot_size",
                                           "topk", "k_grid", "beta", "base_seed", "output_dir", "workers"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw Error("unknown config key '" + key + "'");

  SweepConfig c = doc.contains("preset") ? preset(doc["preset"].get<std::string>()) : SweepConfig{};
  try {
    if (doc.contains("models")) {
      c.models.clear();
      for (const auto& m : as_list<std::string>(doc["models"], "models")) c.models.push_back(parse_model(m));
    }
    if (doc.contains("n")) c.n = doc["n"].get<std::size_t>();
    if (doc.contains("fm")) c.fm = as_list<double>(doc["fm"], "fm");
    if (doc.contains("hMM")) c.h_MM = as_list<double>(doc["hMM"], "hMM");
    if (doc.contains("hmm")) c.h_mm = as_list<double>(doc["hmm"], "hmm");
    if (doc.contains("gamma")) c.gamma = as_list<double>(doc["gamma"], "gamma");
    if (doc.contains("d")) c.density = as_list<double>(doc["d"], "d");
    if (doc.contains("attachment_offset")) c.attachment_offset = doc["attachment_offset"].get<double>();
    if (doc.contains("repetitions")) c.repetitions = doc["repetitions"].get<std::size_t>();
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : as_list<std::string>(doc["algorithms"], "algorithms"))
        c.algorithms.push_back(parse_algorithm(a));
    }
    if (doc.contains("cot_size")) c.cot_size = doc["cot_size"].get<std::size_t>();
    if (doc.contains("topk")) c.topk = doc["topk"].get<std::size_t>();
    if (doc.contains("k_grid")) c.k_grid = as_list<double>(doc["k_grid"], "k_grid");
    if (doc.contains("beta")) c.beta = doc["beta"].get<double>();
    if (doc.contains("base_seed")) c.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("workers")) c.workers = doc["workers"].get<unsigned>();
  } catch (const json::exception& e) {
    throw Error(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SweepConfig& c) {
  json doc;
  std::vector<std::string> models, algorithms;
  for (Model m : c.models) models.emplace_back(model_name(m));
  for (Algorithm a : c.algorithms) algorithms.emplace_back(algorithm_name(a));
  doc["models"] = models;
  doc["n"] = c.n;
  doc["fm"] = c.fm;
  doc["hMM"] = c.h_MM;
  doc["hmm"] = c.h_mm;
  doc["gamma"] = c.gamma;
  doc["d"] = c.density;
  doc["attachment_offset"] = c.attachment_offset;
  doc["repetitions"] = c.repetitions;
  doc["algorithms"] = algorithms;
  doc["cot_size"] = c.cot_size;
  doc["topk"] = c.topk;
  doc["k_grid"] = c.k_grid;
  doc["beta"] = c.beta;
  doc["base_seed"] = c.base_seed;
  doc["output_dir"] = c.output_dir.string();
  doc["workers"] = c.workers;
  return doc.dump();
}

}  // namespace rankfair::harness
