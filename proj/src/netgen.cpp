#include "rankfair/netgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "rankfair/error.hpp"
#include "rankfair/text.hpp"

namespace rankfair {

namespace {

constexpr std::uint64_t kClassStream = 1;
constexpr std::uint64_t kActivityStream = 2;
constexpr std::uint64_t kEdgeStream = 3;
constexpr int kMaxTargetCollisions = 100;
constexpr std::uint64_t kWeightUnits = 1000;

std::uint64_t offset_units(double offset) {
  const double scaled = offset * static_cast<double>(kWeightUnits);
  const auto units = std::llround(scaled);
  if (!(offset > 0.0) || units < 1 || std::abs(scaled - static_cast<double>(units)) > 1e-6)
    throw Error("attachment offset must be a positive multiple of 0.001");
  return static_cast<std::uint64_t>(units);
}

void check_unit(const char* name, const std::optional<double>& v) {
  if (!v) throw Error(std::string("parameter ") + name + " is required for this model");
  if (!(*v >= 0.0 && *v <= 1.0)) throw Error(std::string("parameter ") + name + " must lie in [0,1]");
}

void check_exponent(const char* name, const std::optional<double>& v) {
  if (!v) throw Error(std::string("parameter ") + name + " is required for this model");
  if (!(*v > 1.0)) throw Error(std::string("parameter ") + name + " must exceed 1");
}

template <typename HasEdge, typename InDegree>
std::vector<double> kernel_impl(std::span<const NodeClass> classes, NodeId source, const HomophilyMatrix& h,
                                Model model, double offset, bool cold_start, HasEdge has_edge,
                                InDegree in_degree) {
  const std::size_t n = classes.size();
  if (source >= n) throw GraphError("source node out of range");
  if (model == Model::Random) throw Error("target_kernel is undefined for the Random model");
  if (!(offset > 0.0)) throw Error("attachment offset must be positive");
  const HomophilyMatrix& mix = model == Model::DPA ? HomophilyMatrix::neutral() : h;
  std::vector<double> p(n, 0.0);
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    if (v == source || has_edge(source, v)) continue;
    double w = mix(classes[source], classes[v]);
    if (uses_preferential_attachment(model)) w *= cold_start ? offset : static_cast<double>(in_degree(v)) + offset;
    p[v] = w;
    total += w;
  }
  if (!(total > 0.0)) throw GenerationError("no feasible target for node " + std::to_string(source));
  for (auto& x : p) x /= total;
  return p;
}

HomophilyMatrix effective_mix(Model model, const HomophilyMatrix& h) {
  return model == Model::DPA ? HomophilyMatrix::neutral() : h;
}

}  // namespace

std::string_view model_name(Model m) noexcept {
  switch (m) {
    case Model::Random: return "Random";
    case Model::DPA: return "DPA";
    case Model::DH: return "DH";
    case Model::DPAH: return "DPAH";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "RANDOM") return Model::Random;
  if (upper == "DPA") return Model::DPA;
  if (upper == "DH") return Model::DH;
  if (upper == "DPAH") return Model::DPAH;
  throw Error("unknown model '" + std::string(name) + "' (expected Random, DPA, DH or DPAH)");
}

std::size_t GeneratorParams::target_edges() const {
  const double nn = static_cast<double>(n);
  return static_cast<std::size_t>(std::llround(density * nn * (nn - 1.0)));
}

void GeneratorParams::validate() const {
  if (n < 2) throw Error("n must be at least 2");
  if (!(fm > 0.0 && fm <= 0.5)) throw Error("fm must lie in (0, 0.5]");
  if (!(density > 0.0 && density <= 1.0)) throw Error("density must lie in (0, 1]");
  if (uses_homophily(model)) {
    check_unit("h_MM", h_MM);
    check_unit("h_mm", h_mm);
  }
  if (uses_activity(model)) {
    check_exponent("gamma_M", gamma_M);
    check_exponent("gamma_m", gamma_m);
  }
  const std::size_t e = target_edges();
  if (e < 1) throw Error("density too low: round(d*n*(n-1)) is 0");
  if (e > n * (n - 1)) throw Error("target edge count exceeds n*(n-1)");
  if (uses_preferential_attachment(model)) offset_units(attachment_offset);
}

std::string GeneratorParams::canonical() const {
  std::ostringstream s;
  s << "model=" << model_name(model) << ";n=" << n << ";fm=" << format_value(fm, 10)
    << ";d=" << format_value(density, 10);
  if (uses_homophily(model))
    s << ";hMM=" << format_value(*h_MM, 10) << ";hmm=" << format_value(*h_mm, 10);
  if (uses_activity(model))
    s << ";gammaM=" << format_value(*gamma_M, 10) << ";gammam=" << format_value(*gamma_m, 10);
  if (uses_preferential_attachment(model) && attachment_offset != kDefaultAttachmentOffset)
    s << ";offset=" << format_value(attachment_offset, 10);
  return s.str();
}

void write_params(const GeneratorParams& p, std::ostream& out) {
  out << "model=" << model_name(p.model) << '\n'
      << "n=" << p.n << '\n'
      << "fm=" << format_exact(p.fm) << '\n'
      << "d=" << format_exact(p.density) << '\n';
  if (p.h_MM) out << "h_MM=" << format_exact(*p.h_MM) << '\n';
  if (p.h_mm) out << "h_mm=" << format_exact(*p.h_mm) << '\n';
  if (p.gamma_M) out << "gamma_M=" << format_exact(*p.gamma_M) << '\n';
  if (p.gamma_m) out << "gamma_m=" << format_exact(*p.gamma_m) << '\n';
  if (uses_preferential_attachment(p.model)) out << "attachment_offset=" << format_exact(p.attachment_offset) << '\n';
  out << "seed=" << p.seed << '\n' << "edges=" << p.target_edges() << '\n';
}

HomophilyMatrix::HomophilyMatrix(double h_MM, double h_mm) {
  if (!(h_MM >= 0.0 && h_MM <= 1.0 && h_mm >= 0.0 && h_mm <= 1.0))
    throw Error("homophily values must lie in [0,1]");
  const auto M = index_of(NodeClass::Majority);
  const auto m = index_of(NodeClass::Minority);
  h_[M][M] = h_MM;
  h_[M][m] = 1.0 - h_MM;
  h_[m][m] = h_mm;
  h_[m][M] = 1.0 - h_mm;
}

HomophilyMatrix HomophilyMatrix::neutral() noexcept {
  HomophilyMatrix h;
  for (auto& row : h.h_) row = {1.0, 1.0};
  return h;
}

std::vector<NodeClass> assign_classes(std::size_t n, double fm, std::uint64_t seed) {
  if (!(fm > 0.0 && fm <= 0.5)) throw Error("fm must lie in (0, 0.5]");
  const auto minorities = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fm));
  std::vector<NodeClass> classes(n, NodeClass::Majority);
  std::fill_n(classes.begin(), std::min(minorities, n), NodeClass::Minority);
  Rng rng(seed);
  shuffle(std::span<NodeClass>(classes), rng);
  return classes;
}

double pareto_quantile(double u, double gamma) {
  if (!(gamma > 1.0)) throw Error("power-law exponent must exceed 1");
  if (!(u >= 0.0 && u < 1.0)) throw Error("quantile must lie in [0,1)");
  return std::pow(1.0 - u, -1.0 / (gamma - 1.0));
}

std::vector<double> draw_activities(std::span<const NodeClass> classes, double gamma_M, double gamma_m,
                                    std::uint64_t seed) {
  if (!(gamma_M > 1.0) || !(gamma_m > 1.0)) throw Error("activity exponents must exceed 1");
  Rng rng(seed);
  std::vector<double> a(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i)
    a[i] = pareto_quantile(uniform01(rng), classes[i] == NodeClass::Minority ? gamma_m : gamma_M);
  return a;
}

std::vector<double> target_kernel(const GraphBuilder& state, NodeId source, const HomophilyMatrix& h,
                                  Model model, double offset, bool cold_start) {
  return kernel_impl(
      state.classes(), source, h, model, offset, cold_start,
      [&](NodeId s, NodeId t) { return state.has_edge(s, t); },
      [&](NodeId v) { return state.in_degree(v); });
}

std::vector<double> target_kernel(const DirectedGraph& graph, NodeId source, const HomophilyMatrix& h,
                                  Model model, double offset, bool cold_start) {
  return kernel_impl(
      graph.classes(), source, h, model, offset, cold_start,
      [&](NodeId s, NodeId t) { return graph.has_edge(s, t); },
      [&](NodeId v) { return graph.in_degree(v); });
}

TargetSampler::TargetSampler(std::span<const NodeClass> classes, std::span<const std::uint32_t> in_degrees,
                             HomophilyMatrix h, Model model, double offset)
    : model_(model), h_(effective_mix(model, h)), classes_(classes), slot_(classes.size()),
      weight_(classes.size()), offset_units_(offset_units(offset)) {
  if (model == Model::Random) throw Error("TargetSampler does not apply to the Random model");
  for (NodeId v = 0; v < classes.size(); ++v) {
    auto& list = members_[index_of(classes[v])];
    slot_[v] = static_cast<std::uint32_t>(list.size());
    list.push_back(v);
  }
  for (std::size_t c = 0; c < 2; ++c) tree_[c].assign(members_[c].size() + 1, 0);
  for (NodeId v = 0; v < classes.size(); ++v) {
    const std::uint64_t w = in_degrees[v] * kWeightUnits + offset_units_;
    weight_[v] = w;
    const std::size_t c = index_of(classes[v]);
    total_[c] += w;
    for (std::size_t i = slot_[v] + 1; i < tree_[c].size(); i += i & (~i + 1)) tree_[c][i] += w;
  }
}

void TargetSampler::add_in_edge(NodeId target) {
  const std::size_t c = index_of(classes_[target]);
  weight_[target] += kWeightUnits;
  total_[c] += kWeightUnits;
  for (std::size_t i = slot_[target] + 1; i < tree_[c].size(); i += i & (~i + 1)) tree_[c][i] += kWeightUnits;
}

double TargetSampler::node_weight(NodeId v, bool cold_start) const {
  return (cold_start || model_ == Model::DH) ? 1.0 : static_cast<double>(weight_[v]);
}

double TargetSampler::class_weight(NodeClass source, std::size_t cls, bool cold_start) const {
  const double mass = (cold_start || model_ == Model::DH) ? static_cast<double>(members_[cls].size())
                                                          : static_cast<double>(total_[cls]);
  return h_(source, static_cast<NodeClass>(cls)) * mass;
}

double TargetSampler::feasible_weight(NodeId source, bool cold_start) const {
  const NodeClass cs = classes_[source];
  double total = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    double mass = (cold_start || model_ == Model::DH) ? static_cast<double>(members_[c].size())
                                                      : static_cast<double>(total_[c]);
    if (c == index_of(cs)) mass -= node_weight(source, cold_start);
    total += h_(cs, static_cast<NodeClass>(c)) * mass;
  }
  return total;
}

NodeId TargetSampler::sample(NodeId source, Rng& rng, bool cold_start) const {
  const NodeClass cs = classes_[source];
  const double w0 = class_weight(cs, 0, cold_start);
  const double w1 = class_weight(cs, 1, cold_start);
  const std::size_t cls = uniform01(rng) * (w0 + w1) < w0 ? 0 : 1;
  const auto& list = members_[cls];
  if (cold_start || model_ == Model::DH) return list[uniform_below(rng, list.size())];

  // Fenwick descent: smallest slot whose prefix weight exceeds r.
  std::uint64_t r = uniform_below(rng, total_[cls]);
  const auto& tree = tree_[cls];
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < tree.size()) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step < tree.size() && tree[pos + step] <= r) {
      pos += step;
      r -= tree[pos];
    }
  }
  return list[pos];
}

DirectedGraph generate(const GeneratorParams& params) {
  params.validate();
  if (params.model == Model::Random) return generate_random(params);

  const std::size_t n = params.n;
  const std::size_t target = params.target_edges();
  auto classes = assign_classes(n, params.fm, derive_seed(params.seed, kClassStream));
  auto activities = draw_activities(classes, *params.gamma_M, *params.gamma_m,
                                    derive_seed(params.seed, kActivityStream));

  std::vector<double> cumulative(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) cumulative[i] = running += activities[i];

  GraphBuilder builder(std::move(classes), std::move(activities));
  const HomophilyMatrix h = uses_homophily(params.model) ? HomophilyMatrix(*params.h_MM, *params.h_mm)
                                                          : HomophilyMatrix::neutral();
  TargetSampler sampler(builder.classes(), builder.in_degrees(), h, params.model, params.attachment_offset);

  const std::size_t cold_edges =
      uses_preferential_attachment(params.model)
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.01 * static_cast<double>(target))))
          : 0;

  Rng rng(derive_seed(params.seed, kEdgeStream));
  std::size_t stalls = 0;
  while (builder.num_edges() < target) {
    const bool cold = builder.num_edges() < cold_edges;
    const double pick = uniform01(rng) * running;
    const auto source = static_cast<NodeId>(
        std::min<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(),
                              n - 1));

    bool placed = false;
    NodeId chosen = 0;
    if (sampler.feasible_weight(source, cold) > 0.0) {
      for (int attempt = 0; attempt < kMaxTargetCollisions; ++attempt) {
        const NodeId t = sampler.sample(source, rng, cold);
        if (t != source && builder.add_edge(source, t) == EdgeInsert::Added) {
          placed = true;
          chosen = t;
          break;
        }
      }
    }
    if (!placed) {
      if (++stalls >= n)
        throw GenerationError("generation stalled after " + std::to_string(builder.num_edges()) + " of " +
                              std::to_string(target) + " edges");
      continue;
    }
    stalls = 0;
    sampler.add_in_edge(chosen);
  }
  return std::move(builder).build();
}

DirectedGraph generate_random(const GeneratorParams& params) {
  GeneratorParams checked = params;
  checked.model = Model::Random;
  checked.validate();
  const std::size_t n = params.n;
  const std::size_t target = checked.target_edges();
  GraphBuilder builder(assign_classes(n, params.fm, derive_seed(params.seed, kClassStream)));
  Rng rng(derive_seed(params.seed, kEdgeStream));

  const std::size_t all_pairs = n * (n - 1);
  if (2 * target > all_pairs) {
    // Dense regime: partial Fisher-Yates over the enumerated ordered pairs.
    std::vector<std::uint64_t> pairs;
    pairs.reserve(all_pairs);
    for (std::uint64_t s = 0; s < n; ++s)
      for (std::uint64_t t = 0; t < n; ++t)
        if (s != t) pairs.push_back((s << 32) | t);
    for (std::size_t i = 0; i < target; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, pairs.size() - i));
      std::swap(pairs[i], pairs[j]);
      builder.add_edge(static_cast<NodeId>(pairs[i] >> 32), static_cast<NodeId>(pairs[i] & 0xffffffffULL));
    }
  } else {
    while (builder.num_edges() < target) {
      const auto s = static_cast<NodeId>(uniform_below(rng, n));
      const auto t = static_cast<NodeId>(uniform_below(rng, n - 1));
      builder.add_edge(s, t >= s ? t + 1 : t);
    }
  }
  return std::move(builder).build();
}

}  // namespace rankfair
