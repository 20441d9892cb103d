#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rankfair/error.hpp"
#include "rankfair/harness/config.hpp"
#include "rankfair/harness/correlate.hpp"
#include "rankfair/harness/heatmap.hpp"
#include "rankfair/harness/results.hpp"
#include "rankfair/harness/sweep.hpp"
#include "rankfair/random.hpp"

using namespace rankfair;
using namespace rankfair::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("rankfair_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

SweepConfig small_config(const fs::path& out) {
  SweepConfig c;
  c.models = {Model::DPAH, Model::Random};
  c.n = 200;
  c.fm = {0.2, 0.5};
  c.h_MM = {0.2, 0.8};
  c.h_mm = {0.5};
  c.density = {0.01};
  c.repetitions = 2;
  c.cot_size = 20;
  c.output_dir = out;
  return c;
}

Table table_from(const std::string& text) {
  std::istringstream in(text);
  return read_table(in);
}

std::string synthetic_results(const std::vector<std::pair<double, double>>& gini_error) {
  std::string text(kResultsHeader);
  text += '\n';
  std::size_t rep = 0;
  for (auto [g, e] : gini_error)
    text += "DPAH,100,0.2,0.01,0.5,0.5,3,3," + std::to_string(rep++) + ",1,PageRank,global,," + std::to_string(g) +
            ",0.2," + std::to_string(e) + ",V\n";
  return text;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("cell expansion order, counts and seeds") {
    auto c = small_config("unused");
    const auto cells = expand_cells(c);
    // DPAH: 2 fm x 2 hMM x 1 hmm x 2 reps; Random collapses homophily and activity.
    CHECK(cells.size() == 8 + 4);
    CHECK(cells[0].params.model == Model::DPAH);
    CHECK(cells[0].params.fm == 0.2);
    CHECK(cells[0].params.h_MM == 0.2);
    CHECK(cells[0].rep == 0);
    CHECK(cells[1].rep == 1);
    CHECK(cells[2].params.h_MM == 0.8);
    CHECK(cells[8].params.model == Model::Random);
    CHECK_FALSE(cells[8].params.h_MM.has_value());
    CHECK(cells[0].params.seed == cell_seed(0, cells[0].params, 0));
    CHECK(cells[0].params.seed != cells[1].params.seed);
    c.base_seed = 99;
    CHECK(expand_cells(c)[0].params.seed == (cells[0].params.seed ^ 99));
  }

  TEST_CASE("presets encode the experiment grids") {
    const auto main = preset("paper-main");
    CHECK(expand_cells(main).size() == 6050);
    CHECK(main.n == 2000);
    CHECK(main.repetitions == 10);
    const auto s4 = preset("paper-s4");
    CHECK(s4.gamma.size() == 5);
    CHECK(expand_cells(s4).size() == 6050 * 5);
    const auto s5 = preset("paper-s5");
    CHECK(s5.models == std::vector<Model>{Model::Random});
    CHECK(expand_cells(s5).size() == 5 * 8 * 10);
    CHECK_THROWS(preset("paper-x"));
  }

  TEST_CASE("config parsing") {
    const auto c = parse_config(R"({"preset":"paper-main","algorithms":["PageRank"],"n":500,"repetitions":2})");
    CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::PageRank});
    CHECK(c.n == 500);
    CHECK(c.h_MM.size() == 11);
    CHECK_THROWS_WITH(parse_config(R"({"preset":"paper-main","colour":1})"), doctest::Contains("unknown config key"));
    CHECK_THROWS(parse_config(R"({"preset":"paper-main","fm":[]})"));
    CHECK_THROWS(parse_config(R"({"preset":"paper-main","repetitions":0})"));
    CHECK_THROWS(parse_config(R"({"preset":"paper-main","n":"big"})"));
    CHECK_THROWS(parse_config("not json"));
    CHECK_THROWS(parse_config(R"({"models":["DPAH"]})"));  // homophily grids missing
    const auto round = parse_config(config_to_json(c));
    CHECK(config_to_json(round) == config_to_json(c));
  }

  TEST_CASE("row formatting") {
    GeneratorParams p;
    p.model = Model::Random;
    p.n = 10;
    p.fm = 0.2;
    p.density = 0.1;
    p.seed = 5;
    DisparitySummary s;
    s.gini_global = 0.25;
    s.me_global = -0.125;
    s.baseline = 0.2;
    s.region_global = Region::VII;
    s.local.push_back({50.0, 0.1, 0.2, -0.1, Region::VII});
    const auto rows = summary_rows(p, 3, Algorithm::PageRank, s);
    REQUIRE(rows.size() == 2);
    CHECK(format_row(rows[0]) == "Random,10,0.2,0.1,,,,,3,5,PageRank,global,,0.25,0.2,-0.125,VII");
    CHECK(format_row(rows[1]) == "Random,10,0.2,0.1,,,,,3,5,PageRank,local,50,0.2,0.1,-0.1,VII");
    ResultRow failed = rows[0];
    failed.scope = Scope::Failed;
    CHECK(format_row(failed) == "Random,10,0.2,0.1,,,,,3,5,PageRank,error,,,,,error");
  }

  TEST_CASE("one cell gives one global and |k| local rows per algorithm") {
    auto c = small_config("unused");
    c.k_grid = {10, 50, 100};
    const auto cells = expand_cells(c);
    const auto rows = run_cell(cells[0], c);
    CHECK(rows.size() == 2 * (1 + 3));
    CHECK(rows[0].scope == Scope::Global);
    CHECK(rows[0].algorithm == Algorithm::PageRank);
    CHECK(rows[4].algorithm == Algorithm::WTF);
    CHECK(rows[7].k == 100);
    CHECK(run_cell(cells[0], c).size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(format_row(rows[i]) == format_row(run_cell(cells[0], c)[i]));
  }

  TEST_CASE("a failing cell becomes error rows") {
    SweepConfig c;
    c.models = {Model::DH};
    c.n = 10;
    c.fm = {0.1};
    c.density = {0.9};
    c.h_MM = {1.0};
    c.h_mm = {1.0};
    c.repetitions = 1;
    const auto rows = run_cell(expand_cells(c)[0], c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scope == Scope::Failed);
    CHECK(rows[0].message.find("stalled") != std::string::npos);
  }

  TEST_CASE("sweeps are deterministic, order independent and resumable") {
    TempDir dir("sweep");
    auto c = small_config(dir.path / "a");
    const auto first = run_sweep(c);
    CHECK(first.cells == 12);
    CHECK(first.computed == 12);
    CHECK(first.error_cells == 0);
    CHECK(first.rows == 12 * 2 * 21);
    const auto text = slurp(first.results_file);
    CHECK(text.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
    CHECK(fs::exists(first.metadata_file));

    c.output_dir = dir.path / "b";
    c.workers = 3;
    run_sweep(c);
    CHECK(slurp(dir.path / "b" / kResultsFileName) == text);

    const auto resumed = run_sweep(c);
    CHECK(resumed.reused == 12);
    CHECK(resumed.computed == 0);
    CHECK(slurp(dir.path / "b" / kResultsFileName) == text);

    // Drop the last cell's rows; only that cell is recomputed.
    const auto cut = text.rfind("Random,200,0.5,0.01,,,,,1,");
    {
      std::ofstream out(dir.path / "b" / kResultsFileName, std::ios::binary);
      out << text.substr(0, cut);
    }
    const auto partial = run_sweep(c);
    CHECK(partial.reused == 11);
    CHECK(partial.computed == 1);
    CHECK(slurp(dir.path / "b" / kResultsFileName) == text);
  }

  TEST_CASE("unwritable output aborts before any cell runs") {
    TempDir dir("unwritable");
    { std::ofstream(dir.path / "file") << "x"; }
    auto c = small_config(dir.path / "file" / "sub");
    CHECK_THROWS_AS(run_sweep(c), Error);
  }

  TEST_CASE("correlation reports") {
    std::vector<std::pair<double, double>> same;
    for (int i = 0; i < 10; ++i) same.emplace_back(0.1 * i, 0.1 * i);
    const auto r = correlate(table_from(synthetic_results(same)), CorrelationScope::Global);
    REQUIRE(r.size() == 1);
    CHECK(r[0].rows == 10);
    CHECK(*r[0].rho_signed == doctest::Approx(1.0));
    CHECK(*r[0].rho_abs == doctest::Approx(1.0));

    std::vector<std::pair<double, double>> flat(5, {0.3, 0.0});
    const auto d = correlate(table_from(synthetic_results(flat)), CorrelationScope::Global);
    CHECK_FALSE(d[0].rho_signed.has_value());
    CHECK_FALSE(d[0].note.empty());

    Rng rng(17);
    std::vector<std::pair<double, double>> noise;
    for (int i = 0; i < 20000; ++i) noise.emplace_back(uniform01(rng), uniform01(rng) - 0.5);
    const auto z = correlate(table_from(synthetic_results(noise)), CorrelationScope::Global);
    CHECK(std::fabs(*z[0].rho_signed) < 0.05);
    CHECK_THROWS(correlate(table_from("a,b\n1,2\n"), CorrelationScope::Global));
  }

  TEST_CASE("heatmaps") {
    TempDir dir("heatmap");
    auto c = small_config(dir.path / "run");
    c.models = {Model::DPAH};
    c.algorithms = {Algorithm::PageRank};
    run_sweep(c);
    const auto table = load_table(dir.path / "run" / kResultsFileName);

    HeatmapRequest req;
    req.output_dir = dir.path / "svg";
    const auto files = report_heatmap(table, req);
    CHECK(files.size() == 2);
    const auto svg = slurp(files[0]);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<title>") != std::string::npos);
    const auto facets = aggregate_heatmap(table, req);
    CHECK(facets[0].label == "fm=0.2");
    CHECK(facets[0].cells.size() == 2);
    CHECK(facets[0].cells[0].count == 2);
    for (const auto& cell : facets[0].cells) CHECK(cell.region == classify_region(cell.gini, cell.error));

    HeatmapRequest local = req;
    local.x = "k";
    local.facets = {"fm", "hMM"};
    CHECK(report_heatmap(table, local).size() == 4);

    HeatmapRequest bad = req;
    bad.x = "nonexistent";
    CHECK_THROWS_WITH(report_heatmap(table, bad), doctest::Contains("available columns"));

    const auto one = table_from(synthetic_results({{0.7, -0.2}}));
    HeatmapRequest single = req;
    single.facets.clear();
    const auto f = aggregate_heatmap(one, single);
    REQUIRE(f.size() == 1);
    REQUIRE(f[0].cells.size() == 1);
    CHECK(f[0].cells[0].region == Region::I);
    CHECK(render_svg(f[0], single).find(std::string(region_color(Region::I))) != std::string::npos);
  }
}
