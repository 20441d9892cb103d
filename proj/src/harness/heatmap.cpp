#include "rankfair/harness/heatmap.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "rankfair/error.hpp"
#include "rankfair/text.hpp"

namespace rankfair::harness {

namespace {

constexpr int kCell = 56;
constexpr int kLeft = 80;
constexpr int kTop = 60;

void sort_values(std::vector<std::string>& values) {
  std::sort(values.begin(), values.end(), [](const std::string& a, const std::string& b) {
    auto x = parse_double(a), y = parse_double(b);
    if (x && y) return *x < *y;
    if (x || y) return x.has_value();
    return a < b;
  });
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string file_label(std::string label) {
  for (auto& c : label)
    if (c == '=') c = '-';
    else if (c == ';') c = '_';
    else if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
  return label;
}

struct Sum {
  double gini = 0.0, error = 0.0;
  std::size_t count = 0;
};

}  // namespace

std::string_view region_color(Region r) noexcept {
  switch (r) {
    case Region::I: return "#b2182b";
    case Region::II: return "#1b7837";
    case Region::III: return "#2166ac";
    case Region::IV: return "#ef8a62";
    case Region::V: return "#7fbf7b";
    case Region::VI: return "#67a9cf";
    case Region::VII: return "#fddbc7";
    case Region::VIII: return "#d9f0d3";
    case Region::IX: return "#d1e5f0";
  }
  return "#ffffff";
}

std::vector<HeatmapFacet> aggregate_heatmap(const Table& results, const HeatmapRequest& request) {
  const auto cx = results.column(request.x);
  const auto cy = results.column(request.y);
  std::vector<std::size_t> cf;
  for (const auto& f : request.facets) cf.push_back(results.column(f));
  const auto c_alg = results.column("algorithm");
  const auto c_scope = results.column("scope");
  const auto c_gini = results.column("gini");
  const auto c_error = results.column("error");

  auto uses_k = [&](const std::string& d) { return d == "k"; };
  std::string scope = request.scope.value_or(
      uses_k(request.x) || uses_k(request.y) || std::any_of(request.facets.begin(), request.facets.end(), uses_k)
          ? "local"
          : "global");

  std::map<std::string, std::map<std::pair<std::string, std::string>, Sum>> groups;
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> axes;
  for (const auto& row : results.rows) {
    if (row[c_scope] != scope || row[c_alg] != request.algorithm) continue;
    auto g = parse_double(row[c_gini]);
    auto e = parse_double(row[c_error]);
    if (!g || !e) continue;
    std::string label;
    for (std::size_t i = 0; i < cf.size(); ++i)
      label += (i ? ";" : "") + request.facets[i] + "=" + row[cf[i]];
    auto& s = groups[label][{row[cx], row[cy]}];
    s.gini += *g;
    s.error += *e;
    ++s.count;
    auto& [xs, ys] = axes[label];
    if (std::find(xs.begin(), xs.end(), row[cx]) == xs.end()) xs.push_back(row[cx]);
    if (std::find(ys.begin(), ys.end(), row[cy]) == ys.end()) ys.push_back(row[cy]);
  }
  if (groups.empty())
    throw Error("no " + scope + " rows for algorithm " + request.algorithm + " in results");

  std::vector<HeatmapFacet> facets;
  for (auto& [label, cells] : groups) {
    HeatmapFacet f;
    f.label = label;
    f.xs = axes[label].first;
    f.ys = axes[label].second;
    sort_values(f.xs);
    sort_values(f.ys);
    for (const auto& y : f.ys)
      for (const auto& x : f.xs) {
        auto it = cells.find({x, y});
        if (it == cells.end()) continue;
        HeatmapCell c;
        c.x = x;
        c.y = y;
        c.count = it->second.count;
        c.gini = it->second.gini / static_cast<double>(c.count);
        c.error = it->second.error / static_cast<double>(c.count);
        c.region = classify_region(c.gini, c.error, request.beta);
        f.cells.push_back(c);
      }
    facets.push_back(std::move(f));
  }
  std::stable_sort(facets.begin(), facets.end(), [](const HeatmapFacet& a, const HeatmapFacet& b) {
    auto x = parse_double(a.label.substr(a.label.find('=') + 1));
    auto y = parse_double(b.label.substr(b.label.find('=') + 1));
    return x && y && *x < *y;
  });
  return facets;
}

std::string render_svg(const HeatmapFacet& facet, const HeatmapRequest& request) {
  const int width = kLeft + kCell * static_cast<int>(facet.xs.size()) + 20;
  const int height = kTop + kCell * static_cast<int>(facet.ys.size()) + 50;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << escape(request.algorithm)
      << (facet.label.empty() ? "" : "  " + escape(facet.label)) << "</text>\n";
  auto column = [&](const std::string& x) {
    return static_cast<int>(std::find(facet.xs.begin(), facet.xs.end(), x) - facet.xs.begin());
  };
  // Largest y on top.
  auto row = [&](const std::string& y) {
    return static_cast<int>(facet.ys.end() - std::find(facet.ys.begin(), facet.ys.end(), y)) - 1;
  };
  for (const auto& c : facet.cells) {
    const int px = kLeft + kCell * column(c.x);
    const int py = kTop + kCell * row(c.y);
    const bool dark = c.gini >= 0.6;
    svg << "<g><title>" << escape(request.x) << '=' << escape(c.x) << ' ' << escape(request.y) << '='
        << escape(c.y) << " gini=" << format_value(c.gini, 4) << " me=" << format_value(c.error, 4)
        << " n=" << c.count << " region=" << region_name(c.region) << "</title>";
    svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << kCell << "\" height=\"" << kCell
        << "\" fill=\"" << region_color(c.region) << "\" stroke=\"#ffffff\"/>";
    svg << "<text x=\"" << px + kCell / 2 << "\" y=\"" << py + kCell / 2 + 4
        << "\" text-anchor=\"middle\" fill=\"" << (dark ? "#ffffff" : "#000000") << "\">"
        << region_name(c.region) << "</text></g>\n";
  }
  for (std::size_t i = 0; i < facet.xs.size(); ++i)
    svg << "<text x=\"" << kLeft + kCell * static_cast<int>(i) + kCell / 2 << "\" y=\""
        << kTop + kCell * static_cast<int>(facet.ys.size()) + 16 << "\" text-anchor=\"middle\">"
        << escape(facet.xs[i]) << "</text>\n";
  for (std::size_t j = 0; j < facet.ys.size(); ++j)
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + kCell * row(facet.ys[j]) + kCell / 2 + 4
        << "\" text-anchor=\"end\">" << escape(facet.ys[j]) << "</text>\n";
  svg << "<text x=\"" << kLeft + kCell * static_cast<int>(facet.xs.size()) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape(request.x) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + kCell * static_cast<int>(facet.ys.size()) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + kCell * static_cast<int>(facet.ys.size()) / 2
      << ")\">" << escape(request.y) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> report_heatmap(const Table& results, const HeatmapRequest& request) {
  const auto facets = aggregate_heatmap(results, request);
  std::filesystem::create_directories(request.output_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& f : facets) {
    const auto name = request.prefix + "_" + request.algorithm + (f.label.empty() ? "" : "_" + file_label(f.label)) + ".svg";
    const auto path = request.output_dir / name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << render_svg(f, request);
    written.push_back(path);
  }
  return written;
}

}  // namespace rankfair::harness
