// rankfair command-line tool: generate networks, rank them, measure
// disparity, infer homophily, and run parameter sweeps.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "rankfair/error.hpp"
#include "rankfair/graph_io.hpp"
#include "rankfair/harness/config.hpp"
#include "rankfair/harness/correlate.hpp"
#include "rankfair/harness/heatmap.hpp"
#include "rankfair/harness/results.hpp"
#include "rankfair/harness/sweep.hpp"
#include "rankfair/inference.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/netgen.hpp"
#include "rankfair/ranking.hpp"
#include "rankfair/simd/kernels.hpp"
#include "rankfair/text.hpp"

using namespace rankfair;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Writes to the named file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (auto field : split(text, ',')) {
    auto v = parse_double(field);
    if (!v) throw Error("not a number: '" + std::string(field) + "'");
    out.push_back(*v);
  }
  return out;
}

struct GraphFiles {
  std::string nodes = "nodes.csv";
  std::string edges = "edges.csv";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--nodes", nodes, "Nodes file (node_id,class[,activity])")->capture_default_str();
    cmd->add_option("--edges", edges, "Edges file (source,target)")->capture_default_str();
  }
  DirectedGraph load() const { return load_graph(nodes, edges); }
};

struct GenerateCmd {
  std::string model = "DPAH";
  GeneratorParams params;
  std::optional<double> h_MM, h_mm, gamma, gamma_M, gamma_m;
  GraphFiles files;
  std::string meta = "graph.meta";

  int run() {
    params.model = parse_model(model);
    if (uses_homophily(params.model)) {
      params.h_MM = h_MM;
      params.h_mm = h_mm;
    }
    if (uses_activity(params.model)) {
      params.gamma_M = gamma_M ? gamma_M : gamma;
      params.gamma_m = gamma_m ? gamma_m : gamma;
    }
    const auto graph = generate(params);
    save_graph(graph, files.nodes, files.edges);
    Output out(meta);
    write_params(params, out.stream());
    std::cerr << "wrote " << graph.num_nodes() << " nodes, " << graph.num_edges() << " edges\n";
    return 0;
  }
};

struct RankCmd {
  GraphFiles files;
  std::string algorithm = "PageRank";
  PageRankOptions pr;
  WtfOptions wtf_options;
  std::string output = "-";

  int run() {
    const auto graph = files.load();
    RankScores scores;
    if (parse_algorithm(algorithm) == Algorithm::PageRank) {
      scores = pagerank(graph, pr);
    } else {
      wtf_options.ppr.alpha = pr.alpha;
      scores = wtf(graph, wtf_options);
    }
    Output out(output);
    write_scores(scores, out.stream());
    return 0;
  }
};

struct MetricsCmd {
  GraphFiles files;
  std::string scores_path = "scores.csv";
  std::string algorithm = "PageRank";
  std::string k_grid;
  double beta = 0.05;
  std::optional<double> baseline;
  std::string output = "-";

  int run() {
    const auto graph = files.load();
    const auto alg = parse_algorithm(algorithm);
    std::ifstream in(scores_path);
    if (!in) throw Error("cannot open " + scores_path);
    const auto scores = read_scores(in, alg, scores_path);
    if (scores.scores.size() != graph.num_nodes())
      throw Error("score file covers " + std::to_string(scores.scores.size()) + " nodes, graph has " +
                  std::to_string(graph.num_nodes()));
    MetricsConfig config;
    if (!k_grid.empty()) config.k_grid = parse_list(k_grid);
    config.beta = beta;
    config.baseline = baseline;
    const auto summary = summarize(rank_nodes(scores.scores, graph.classes()), config);

    Output out(output);
    auto& os = out.stream();
    os << "algorithm,scope,k,gini,fraction_minority,error,region\n";
    os << algorithm_name(alg) << ",global,," << format_value(summary.gini_global) << ','
       << format_value(summary.baseline) << ',' << format_value(summary.me_global) << ','
       << region_name(summary.region_global) << '\n';
    for (const auto& r : summary.local)
      os << algorithm_name(alg) << ",local," << format_value(r.k) << ',' << format_value(r.gini_local) << ','
         << format_value(r.fraction_minority) << ',' << format_value(r.error_local) << ',' << region_name(r.region)
         << '\n';
    if (output != "-") {
      Output meta(output + ".meta");
      meta.stream() << "beta=" << format_value(summary.beta) << '\n'
                    << "baseline=" << format_value(summary.baseline) << '\n'
                    << "topk_count=ceil(k*n/100) clamped to [1,n]\n"
                    << "rank_ties=descending score, ascending node id\n";
    }
    return 0;
  }
};

struct InferCmd {
  GraphFiles files;
  std::string estimator = "mle";
  std::optional<double> x_min;
  std::string output = "-";

  int run() {
    const auto graph = files.load();
    const auto mix = empirical_mixing(graph);
    // Estimate before writing so a failed fit leaves no partial report.
    std::optional<HomophilyEstimate> mle;
    std::optional<ExponentHomophilyEstimate> exps;
    if (estimator == "mle")
      mle = infer_homophily_mle(graph);
    else
      exps = infer_homophily_from_exponents(graph, x_min);
    Output out(output);
    auto& os = out.stream();
    const auto M = NodeClass::Majority, m = NodeClass::Minority;
    os << "nodes_M=" << mix.nodes[index_of(M)] << '\n' << "nodes_m=" << mix.nodes[index_of(m)] << '\n';
    os << "edges_MM=" << mix.edges[index_of(M)][index_of(M)] << '\n'
       << "edges_Mm=" << mix.edges[index_of(M)][index_of(m)] << '\n'
       << "edges_mM=" << mix.edges[index_of(m)][index_of(M)] << '\n'
       << "edges_mm=" << mix.edges[index_of(m)][index_of(m)] << '\n';
    os << "C_M=" << format_value(mix.in_degree_share(M)) << '\n'
       << "C_m=" << format_value(mix.in_degree_share(m)) << '\n';
    if (mix.out_edges(M)) os << "p_MM=" << format_value(mix.p_same(M)) << '\n';
    if (mix.out_edges(m)) os << "p_mm=" << format_value(mix.p_same(m)) << '\n';
    os << "estimator=" << estimator << '\n';
    if (mle) {
      const auto& est = *mle;
      os << "h_MM=" << format_value(est.h_MM) << '\n'
         << "h_mm=" << format_value(est.h_mm) << '\n'
         << "log_likelihood_M=" << format_value(est.log_likelihood_M) << '\n'
         << "log_likelihood_m=" << format_value(est.log_likelihood_m) << '\n';
    } else {
      const auto& est = *exps;
      const auto& e = est.exponents;
      os << "h_MM=" << format_value(est.h_MM) << '\n' << "h_mm=" << format_value(est.h_mm) << '\n';
      os << "sigma_M=" << format_value(e.sigma[index_of(M)]) << '\n'
         << "sigma_m=" << format_value(e.sigma[index_of(m)]) << '\n'
         << "theta_M=" << format_value(e.theta[index_of(M)]) << '\n'
         << "theta_m=" << format_value(e.theta[index_of(m)]) << '\n'
         << "xmin_M=" << format_value(e.x_min[index_of(M)]) << '\n'
         << "xmin_m=" << format_value(e.x_min[index_of(m)]) << '\n';
    }
    return 0;
  }
};

struct SweepCmd {
  std::string config_path;
  std::string preset_name;
  std::optional<unsigned> workers;
  std::string output_dir;
  bool fresh = false;
  bool quiet = false;

  int run() {
    harness::SweepConfig config;
    if (!config_path.empty()) {
      config = harness::load_config(config_path);
    } else {
      config = harness::preset(preset_name.empty() ? "paper-main" : preset_name);
    }
    if (workers) config.workers = *workers;
    if (!output_dir.empty()) config.output_dir = output_dir;
    harness::SweepOptions options;
    options.resume = !fresh;
    if (!quiet)
      options.progress = [](std::size_t done, std::size_t total) {
        if (done == total || done % 50 == 0) std::cerr << "\r" << done << "/" << total << " cells" << std::flush;
      };
    const auto outcome = harness::run_sweep(config, options);
    if (!quiet) std::cerr << '\n';
    std::cerr << "cells=" << outcome.cells << " reused=" << outcome.reused << " computed=" << outcome.computed
              << " errors=" << outcome.error_cells << " rows=" << outcome.rows << '\n'
              << "results: " << outcome.results_file.string() << '\n';
    return outcome.error_cells ? kExitFailure : 0;
  }
};

struct CorrelateCmd {
  std::string results = "results/results.csv";
  std::string scope = "global";
  std::string output = "-";

  int run() {
    const auto report = harness::correlate(harness::load_table(results), harness::parse_scope(scope));
    Output out(output);
    harness::write_correlations(report, out.stream());
    return 0;
  }
};

struct ReportCmd {
  std::string results = "results/results.csv";
  harness::HeatmapRequest request;
  std::string scope;

  int run() {
    if (!scope.empty()) request.scope = scope;
    for (const auto& path : harness::report_heatmap(harness::load_table(results), request))
      std::cout << path.string() << '\n';
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate directed networks with homophily, rank them, and measure group disparity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("rankfair ") + harness::kVersion);
  app.add_flag_callback(
         "--kernels",
         [] {
           std::cout << "kernels: " << simd::active_kernels().name << '\n';
           throw CLI::Success();
         },
         "Print the selected vector kernel set and exit")
      ->trigger_on_parse();

  GenerateCmd gen;
  auto* g = app.add_subcommand("generate", "Generate one network to files");
  g->add_option("--model", gen.model, "Random, DPA, DH or DPAH")->capture_default_str();
  g->add_option("-n,--nodes-count", gen.params.n, "Number of nodes")->capture_default_str();
  g->add_option("--fm", gen.params.fm, "Minority fraction")->capture_default_str();
  g->add_option("-d,--density", gen.params.density, "Edge density")->capture_default_str();
  g->add_option("--hMM", gen.h_MM, "Majority homophily");
  g->add_option("--hmm", gen.h_mm, "Minority homophily");
  g->add_option("--gamma", gen.gamma, "Activity exponent for both groups");
  g->add_option("--gammaM", gen.gamma_M, "Majority activity exponent");
  g->add_option("--gammam", gen.gamma_m, "Minority activity exponent");
  g->add_option("--offset", gen.params.attachment_offset, "Preferential-attachment offset")->capture_default_str();
  g->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
  gen.files.add_to(g);
  g->add_option("--meta", gen.meta, "Parameter sidecar file")->capture_default_str();

  RankCmd rank;
  auto* r = app.add_subcommand("rank", "Rank the nodes of a network");
  rank.files.add_to(r);
  r->add_option("--algorithm", rank.algorithm, "PageRank or WTF")->capture_default_str();
  r->add_option("--alpha", rank.pr.alpha, "Damping factor")->capture_default_str();
  r->add_option("--cot-size", rank.wtf_options.cot_size, "WTF circle-of-trust size")->capture_default_str();
  r->add_option("--topk", rank.wtf_options.topk, "WTF recommendations per user")->capture_default_str();
  r->add_option("--workers", rank.wtf_options.workers, "WTF worker threads (0 = all cores)")->capture_default_str();
  r->add_option("-o,--output", rank.output, "Score file, - for stdout")->capture_default_str();

  MetricsCmd metrics;
  auto* mt = app.add_subcommand("metrics", "Inequality and inequity of a ranking");
  metrics.files.add_to(mt);
  mt->add_option("--scores", metrics.scores_path, "Score file")->capture_default_str();
  mt->add_option("--algorithm", metrics.algorithm, "Label for the score file")->capture_default_str();
  mt->add_option("--k-grid", metrics.k_grid, "Comma-separated top-k percentages (default 5,10,...,100)");
  mt->add_option("--beta", metrics.beta, "Fairness band half-width")->capture_default_str();
  mt->add_option("--baseline", metrics.baseline, "Reference minority fraction (default: realized)");
  mt->add_option("-o,--output", metrics.output, "Summary file, - for stdout")->capture_default_str();

  InferCmd infer;
  auto* in = app.add_subcommand("infer", "Estimate homophily from a network");
  infer.files.add_to(in);
  in->add_option("--estimator", infer.estimator, "mle or exponents")
      ->check(CLI::IsMember({"mle", "exponents"}))
      ->capture_default_str();
  in->add_option("--xmin", infer.x_min, "Lower cutoff of the in-degree tail fit");
  in->add_option("-o,--output", infer.output, "Report file, - for stdout")->capture_default_str();

  SweepCmd sweep;
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  auto* cfg = sw->add_option("--config", sweep.config_path, "JSON sweep configuration");
  sw->add_option("--preset", sweep.preset_name, "paper-main, paper-s4 or paper-s5")->excludes(cfg);
  sw->add_option("--workers", sweep.workers, "Worker threads (0 = all cores)");
  sw->add_option("--output-dir", sweep.output_dir, "Override the configured output directory");
  sw->add_flag("--fresh", sweep.fresh, "Recompute every cell instead of reusing existing results");
  sw->add_flag("-q,--quiet", sweep.quiet, "No progress output");

  CorrelateCmd corr;
  auto* co = app.add_subcommand("correlate", "Spearman correlation of inequality and inequity");
  co->add_option("--results", corr.results, "Results file")->capture_default_str();
  co->add_option("--scope", corr.scope, "global or local")->capture_default_str();
  co->add_option("-o,--output", corr.output, "Report file, - for stdout")->capture_default_str();

  ReportCmd report;
  auto* rp = app.add_subcommand("report", "Region heatmaps as SVG");
  rp->add_option("--results", report.results, "Results file")->capture_default_str();
  rp->add_option("--x", report.request.x, "Column on the x axis")->capture_default_str();
  rp->add_option("--y", report.request.y, "Column on the y axis")->capture_default_str();
  rp->add_option("--facet", report.request.facets, "Facet columns (one SVG per combination)");
  rp->add_flag("--no-facets", [&](std::int64_t) { report.request.facets.clear(); }, "Single SVG");
  rp->add_option("--algorithm", report.request.algorithm, "Algorithm to plot")->capture_default_str();
  rp->add_option("--scope", report.scope, "global or local (default: local when a dimension is k)");
  rp->add_option("--beta", report.request.beta, "Fairness band half-width")->capture_default_str();
  rp->add_option("--output-dir", report.request.output_dir, "Directory for the SVG files");
  rp->add_option("--prefix", report.request.prefix, "File name prefix")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return gen.run();
    if (*r) return rank.run();
    if (*mt) return metrics.run();
    if (*in) return infer.run();
    if (*sw) return sweep.run();
    if (*co) return corr.run();
    if (*rp) return report.run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
