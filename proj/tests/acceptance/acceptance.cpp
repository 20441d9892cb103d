// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [work-dir] [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "rankfair/error.hpp"
#include "rankfair/harness/config.hpp"
#include "rankfair/harness/correlate.hpp"
#include "rankfair/harness/results.hpp"
#include "rankfair/harness/sweep.hpp"
#include "rankfair/inference.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/netgen.hpp"
#include "rankfair/random.hpp"
#include "rankfair/ranking.hpp"
#include "rankfair/text.hpp"

using namespace rankfair;
using namespace rankfair::harness;
namespace fs = std::filesystem;

namespace {

fs::path g_work = "acceptance_work";

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(double v, int digits = 4) { return format_value(v, digits); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

SweepConfig base_config(const std::string& name) {
  SweepConfig c;
  c.n = 2000;
  c.density = {0.0015};
  c.gamma = {3.0};
  c.repetitions = 10;
  c.algorithms = {Algorithm::PageRank};
  c.output_dir = g_work / name;
  return c;
}

Table run(SweepConfig config) {
  SweepOptions options;
  options.resume = false;
  const auto outcome = run_sweep(config, options);
  if (outcome.error_cells) throw std::runtime_error(std::to_string(outcome.error_cells) + " cells failed");
  return load_table(outcome.results_file);
}

// Rows of one algorithm and scope whose listed columns equal the given text.
struct Query {
  const Table& table;
  std::string algorithm = "PageRank";
  std::string scope = "global";
  std::map<std::string, std::string> where;

  std::vector<const std::vector<std::string>*> rows() const {
    std::vector<const std::vector<std::string>*> out;
    const auto c_alg = table.column("algorithm"), c_scope = table.column("scope");
    std::vector<std::pair<std::size_t, std::string>> filters;
    for (const auto& [k, v] : where) filters.emplace_back(table.column(k), v);
    for (const auto& r : table.rows) {
      if (r[c_alg] != algorithm || r[c_scope] != scope) continue;
      bool ok = true;
      for (const auto& [i, v] : filters) ok = ok && r[i] == v;
      if (ok) out.push_back(&r);
    }
    return out;
  }

  double mean(const std::string& column) const {
    const auto c = table.column(column);
    const auto rs = rows();
    if (rs.empty()) throw std::runtime_error("no rows for query on " + column);
    double s = 0.0;
    for (const auto* r : rs) s += *parse_double((*r)[c]);
    return s / static_cast<double>(rs.size());
  }
};

oracle::AdjList adj_list(const DirectedGraph& g) {
  oracle::AdjList out;
  for (const auto& e : g.edges()) out.emplace_back(e.source, e.target);
  return out;
}

DirectedGraph make_graph(std::size_t n, const oracle::AdjList& edges) {
  GraphBuilder b(std::vector<NodeClass>(n, NodeClass::Majority));
  for (auto [s, t] : edges) b.add_edge(s, t);
  return std::move(b).build();
}

// 1. Oracle equivalence.
Outcome criterion1() {
  Outcome o;
  Rng rng(20240601);

  double worst_gini = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 200);
    std::vector<double> x(n);
    for (auto& v : x) v = uniform01(rng) < 0.1 ? 0.0 : std::pow(uniform01(rng), 2.0);
    x[0] += 0.5;
    worst_gini = std::max(worst_gini, std::fabs(gini(x) - oracle::gini(x)));
  }
  o.require(worst_gini <= 1e-12, "gini max diff " + fmt(worst_gini));

  double worst_pr = 0.0;
  std::size_t dangling_graphs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 50);
    const double p = 0.25 * uniform01(rng);
    oracle::AdjList edges;
    for (std::uint32_t s = 0; s < n; ++s)
      for (std::uint32_t t = 0; t < n; ++t)
        if (s != t && uniform01(rng) < p) edges.emplace_back(s, t);
    const auto g = make_graph(n, edges);
    bool dangling = false;
    for (NodeId v = 0; v < n; ++v) dangling = dangling || g.out_degree(v) == 0;
    dangling_graphs += dangling;
    const auto pr = pagerank(g).scores;
    const auto ref = oracle::pagerank(n, edges);
    for (std::size_t v = 0; v < n; ++v) worst_pr = std::max(worst_pr, std::fabs(pr[v] - ref[v]));
    const auto u = static_cast<NodeId>(uniform_below(rng, n));
    const auto ppr = personalized_pagerank(g, u);
    const auto pref = oracle::personalized_pagerank(n, edges, u);
    for (std::size_t v = 0; v < n; ++v) worst_pr = std::max(worst_pr, std::fabs(ppr[v] - pref[v]));
  }
  o.require(worst_pr <= 1e-8 && dangling_graphs > 0,
            "pagerank/ppr max diff " + fmt(worst_pr) + " (" + std::to_string(dangling_graphs) + " graphs with dangling nodes)");

  // Every digraph on 5 labeled nodes with at most 8 edges.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t s = 0; s < 5; ++s)
    for (std::uint32_t t = 0; t < 5; ++t)
      if (s != t) pairs.emplace_back(s, t);
  std::size_t graphs = 0, salsa_mismatch = 0, wtf_mismatch = 0;
  for (std::uint32_t mask = 0; mask < (1U << 20); ++mask) {
    if (__builtin_popcount(mask) > 8) continue;
    oracle::AdjList edges;
    for (std::size_t i = 0; i < 20; ++i)
      if (mask & (1U << i)) edges.push_back(pairs[i]);
    const auto g = make_graph(5, edges);
    ++graphs;
    std::vector<double> counts(5, 0.0);
    for (std::uint32_t u = 0; u < 5; ++u) {
      const auto circle = oracle::circle_of_trust(5, edges, u, 100);
      if (circle.empty()) continue;
      const auto expected = oracle::salsa_recommend(5, edges, u, circle, 10);
      const std::vector<NodeId> hubs(circle.begin(), circle.end());
      const auto got = salsa_recommend(g, u, hubs, 10);
      if (std::vector<std::uint32_t>(got.begin(), got.end()) != expected) ++salsa_mismatch;
      for (auto r : expected) counts[r] += 1.0;
    }
    if (wtf(g).scores != counts) ++wtf_mismatch;
  }
  o.require(salsa_mismatch == 0 && wtf_mismatch == 0,
            std::to_string(graphs) + " five-node digraphs, salsa mismatches " + std::to_string(salsa_mismatch) +
                ", wtf mismatches " + std::to_string(wtf_mismatch));

  double worst_rho = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + uniform_below(rng, 80);
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = static_cast<double>(uniform_below(rng, 7));
    for (auto& v : b) v = static_cast<double>(uniform_below(rng, 5));
    try {
      worst_rho = std::max(worst_rho, std::fabs(spearman(a, b) - oracle::spearman(a, b)));
    } catch (const MetricsError&) {
      // Constant draws: the oracle is undefined as well.
    }
  }
  o.require(worst_rho <= 1e-12, "spearman max diff " + fmt(worst_rho));
  return o;
}

// 2. Generator exactness over the paper-main grid.
Outcome criterion2() {
  Outcome o;
  const auto cells = expand_cells(preset("paper-main"));
  std::size_t bad_edges = 0, bad_classes = 0;
  for (const auto& cell : cells) {
    const auto g = generate(cell.params);
    if (g.num_edges() != 5997) ++bad_edges;
    const auto expected = static_cast<std::size_t>(std::llround(2000.0 * cell.params.fm));
    if (minority_count(g.classes()) != expected) ++bad_classes;
  }
  o.require(bad_edges == 0 && bad_classes == 0,
            std::to_string(cells.size()) + " networks, wrong edge counts " + std::to_string(bad_edges) +
                ", wrong minority counts " + std::to_string(bad_classes));
  return o;
}

SweepConfig dpa_config() {
  auto c = base_config("c3_dpa");
  c.models = {Model::DPA};
  c.fm = {0.2};
  return c;
}

// 3. DPA moderate inequality.
Outcome criterion3() {
  Outcome o;
  const auto t = run(dpa_config());
  const double g = Query{t}.mean("gini");
  o.require(g >= 0.4 && g <= 0.6, "mean PageRank gini " + fmt(g) + " expected in [0.4, 0.6]");
  return o;
}

// 4. DPAH high inequality.
Outcome criterion4() {
  Outcome o;
  auto c = base_config("c4_dpah");
  c.models = {Model::DPAH};
  c.fm = {0.2};
  c.h_MM = {0.2, 0.5, 0.8};
  c.h_mm = {0.2, 0.5, 0.8};
  const auto t = run(c);
  double pooled = 0.0;
  std::string per_cell;
  for (const char* h : {"0.2", "0.5", "0.8"}) {
    const double g = Query{t, "PageRank", "global", {{"hMM", h}, {"hmm", h}}}.mean("gini");
    pooled += g / 3.0;
    per_cell += std::string(per_cell.empty() ? "" : ", ") + "h=" + h + ": " + fmt(g);
  }
  o.require(pooled >= 0.6 && pooled <= 0.95, "pooled mean gini " + fmt(pooled) + " expected in [0.6, 0.95] (" + per_cell + ")");
  return o;
}

// 5. Degree-only models are fair.
Outcome criterion5() {
  Outcome o;
  auto c = base_config("c5_fair");
  c.models = {Model::Random, Model::DPA};
  c.fm = {0.1, 0.3, 0.5};
  const auto t = run(c);
  for (const char* model : {"Random", "DPA"})
    for (const char* fm : {"0.1", "0.3", "0.5"}) {
      const double me = Query{t, "PageRank", "global", {{"model", model}, {"fm", fm}}}.mean("error");
      o.require(std::fabs(me) < 0.05, std::string(model) + " fm=" + fm + " |me| " + fmt(std::fabs(me)));
    }
  return o;
}

SweepConfig homophily_cells_config(const std::string& name) {
  auto c = base_config(name);
  c.models = {Model::DPAH};
  c.fm = {0.2};
  c.h_MM = {0.2, 0.5, 0.8};
  c.h_mm = {0.2, 0.5, 0.8};
  return c;
}

const std::vector<std::pair<std::string, std::string>> kHomophilyCells{{"0.8", "0.2"}, {"0.2", "0.8"}, {"0.5", "0.5"}};

// 6. Homophily-driven inequity.
Outcome criterion6() {
  Outcome o;
  const auto t = run(homophily_cells_config("c6_homophily"));
  for (const auto& [hMM, hmm] : kHomophilyCells) {
    Query q{t, "PageRank", "global", {{"hMM", hMM}, {"hmm", hmm}}};
    const double g = q.mean("gini"), me = q.mean("error");
    const auto region = classify_region(g, me);
    const std::string label = "(" + hMM + "," + hmm + ") gini " + fmt(g) + " me " + fmt(me) + " region " +
                              std::string(region_name(region));
    if (hMM == "0.8") o.require(me < -0.05 && region == Region::I, label + " expected me < -0.05, region I");
    else if (hMM == "0.2") o.require(me > 0.05 && region == Region::III, label + " expected me > 0.05, region III");
    else o.require(std::fabs(me) <= 0.05 && region == Region::II, label + " expected |me| <= 0.05, region II");
  }
  return o;
}

// 7. Local inequity keeps its sign from top-5% to top-50%.
Outcome criterion7() {
  Outcome o;
  const auto t = run(homophily_cells_config("c7_persistence"));
  const auto c_rep = t.column("rep"), c_k = t.column("k"), c_err = t.column("error");
  auto sign = [](double v) { return (v > 0) - (v < 0); };
  for (const auto& [hMM, hmm] : kHomophilyCells) {
    std::map<std::string, std::map<std::string, double>> by_rep;
    for (const auto* r : Query{t, "PageRank", "local", {{"hMM", hMM}, {"hmm", hmm}}}.rows())
      by_rep[(*r)[c_rep]][(*r)[c_k]] = *parse_double((*r)[c_err]);
    int agree = 0;
    for (auto& [rep, ks] : by_rep) agree += sign(ks.at("5")) == sign(ks.at("50"));
    o.require(agree >= 8, "(" + hMM + "," + hmm + ") sign agreement " + std::to_string(agree) + "/10");
  }
  return o;
}

SweepConfig wtf_vs_pagerank_config(const std::string& name) {
  auto c = base_config(name);
  c.n = 1000;
  c.models = {Model::DPAH};
  c.fm = {0.2};
  c.h_MM = {0.5};
  c.h_mm = {0.5};
  c.algorithms = {Algorithm::PageRank, Algorithm::WTF};
  return c;
}

// 8. WTF is more unequal than PageRank.
Outcome criterion8() {
  Outcome o;
  const auto t = run(wtf_vs_pagerank_config("c8_wtf"));
  const double pr = Query{t, "PageRank"}.mean("gini");
  const double w = Query{t, "WTF"}.mean("gini");
  o.require(w > pr, "mean gini WTF " + fmt(w) + " vs PageRank " + fmt(pr));
  return o;
}

// 9. Higher activity exponent, higher inequality.
Outcome criterion9() {
  Outcome o;
  auto c = base_config("c9_activity");
  c.models = {Model::DPAH};
  c.fm = {0.2};
  c.h_MM = {0.8};
  c.h_mm = {0.8};
  c.gamma = {1.5, 3.5};
  const auto t = run(c);
  const double low = Query{t, "PageRank", "global", {{"gammaM", "1.5"}}}.mean("gini");
  const double high = Query{t, "PageRank", "global", {{"gammaM", "3.5"}}}.mean("gini");
  o.require(low < high, "mean gini at gamma 1.5: " + fmt(low) + ", at gamma 3.5: " + fmt(high));
  return o;
}

// 10. Denser random networks, lower WTF inequality.
Outcome criterion10() {
  Outcome o;
  auto c = base_config("c10_density");
  c.n = 1000;
  c.models = {Model::Random};
  c.fm = {0.2};
  c.density = {0.001, 0.01};
  c.algorithms = {Algorithm::WTF};
  const auto t = run(c);
  const double sparse = Query{t, "WTF", "global", {{"d", "0.001"}}}.mean("gini");
  const double dense = Query{t, "WTF", "global", {{"d", "0.01"}}}.mean("gini");
  o.require(dense < sparse, "mean WTF gini at d=0.001: " + fmt(sparse) + ", at d=0.01: " + fmt(dense));
  return o;
}

// 11. Homophily recovery.
Outcome criterion11() {
  Outcome o;
  auto c = base_config("c11_unused");
  c.models = {Model::DPAH};
  c.fm = {0.5};
  const std::vector<std::pair<double, double>> targets{{0.8, 0.6}, {0.3, 0.7}, {0.5, 0.5}};
  for (auto [hMM, hmm] : targets) {
    c.h_MM = {hMM};
    c.h_mm = {hmm};
    double est_M = 0.0, est_m = 0.0, exp_M = 0.0, exp_m = 0.0;
    std::size_t exp_failures = 0;
    const auto cells = expand_cells(c);
    for (const auto& cell : cells) {
      const auto g = generate(cell.params);
      const auto mle = infer_homophily_mle(g);
      est_M += mle.h_MM / static_cast<double>(cells.size());
      est_m += mle.h_mm / static_cast<double>(cells.size());
      if (hMM == hmm) {
        try {
          const auto e = infer_homophily_from_exponents(g);
          exp_M += e.h_MM;
          exp_m += e.h_mm;
        } catch (const InferenceError&) {
          ++exp_failures;
        }
      }
    }
    const std::string label = "(" + fmt(hMM) + "," + fmt(hmm) + ") mle (" + fmt(est_M) + "," + fmt(est_m) + ")";
    o.require(std::fabs(est_M - hMM) <= 0.1 && std::fabs(est_m - hmm) <= 0.1, label);
    if (hMM == hmm) {
      const double fits = static_cast<double>(cells.size() - exp_failures);
      const bool ok = fits > 0 && std::fabs(exp_M / fits - est_M) <= 0.1 && std::fabs(exp_m / fits - est_m) <= 0.1;
      o.require(ok, "exponent estimator (" + fmt(exp_M / fits) + "," + fmt(exp_m / fits) + ") over " +
                        std::to_string(static_cast<int>(fits)) + " fits");
    }
  }
  return o;
}

SweepConfig main_pagerank_config(const std::string& name) {
  auto c = preset("paper-main");
  c.algorithms = {Algorithm::PageRank};
  c.output_dir = g_work / name;
  return c;
}

// 12. Correlation of inequality and inequity over the full sweep.
Outcome criterion12() {
  Outcome o;
  const auto t = run(main_pagerank_config("c12_main"));
  const auto report = correlate(t, CorrelationScope::Global);
  if (report.empty() || !report[0].rho_signed) {
    o.require(false, "correlation undefined");
    return o;
  }
  const double rho = *report[0].rho_signed;
  o.require(rho > 0.0 && std::fabs(rho - 0.41) <= 0.2,
            "rho(gini, me) " + fmt(rho) + " over " + std::to_string(report[0].rows) + " networks, expected 0.41 +/- 0.2" +
                (report[0].rho_abs ? " (rho(gini, |me|) " + fmt(*report[0].rho_abs) + ")" : ""));
  return o;
}

// 13. Reruns with the same base seed are byte-identical, sequential or parallel.
Outcome criterion13() {
  Outcome o;
  const std::vector<std::pair<std::string, SweepConfig>> sweeps{
      {"c6", homophily_cells_config("c13_c6")},
      {"c8", wtf_vs_pagerank_config("c13_c8")},
      {"c12", main_pagerank_config("c13_c12")},
  };
  for (auto [name, config] : sweeps) {
    SweepOptions fresh;
    fresh.resume = false;
    const auto first = slurp(run_sweep(config, fresh).results_file);
    config.workers = 2;
    const auto second = slurp(run_sweep(config, fresh).results_file);
    o.require(!first.empty() && first == second, name + " sweep rerun identical (" + std::to_string(first.size()) + " bytes)");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_work = argv[1];
  std::set<int> selected;
  for (int i = 2; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  fs::create_directories(g_work);

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                                       criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                                       criterion11, criterion12, criterion13};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.contains(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = criteria[i]();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !result.pass;
    std::printf("criterion %2d %s: %s (%.1fs)\n", number, result.pass ? "PASS" : "FAIL", result.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
