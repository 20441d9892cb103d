#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankfair/graph.hpp"
#include "rankfair/random.hpp"

namespace rankfair {

enum class Model { Random, DPA, DH, DPAH };

std::string_view model_name(Model m) noexcept;
/// Accepts the canonical names case-insensitively; throws Error otherwise.
Model parse_model(std::string_view name);

constexpr bool uses_homophily(Model m) noexcept { return m == Model::DH || m == Model::DPAH; }
constexpr bool uses_activity(Model m) noexcept { return m != Model::Random; }
constexpr bool uses_preferential_attachment(Model m) noexcept {
  return m == Model::DPA || m == Model::DPAH;
}

inline constexpr double kDefaultAttachmentOffset = 0.1;

struct GeneratorParams {
  Model model = Model::DPAH;
  std::size_t n = 2000;
  double fm = 0.2;
  double density = 0.0015;
  std::optional<double> h_MM;
  std::optional<double> h_mm;
  std::optional<double> gamma_M;
  std::optional<double> gamma_m;
  /// Weight of a zero in-degree node in the preferential-attachment
  /// kernels: targets are weighted by (k_in + offset). Resolution 0.001.
  double attachment_offset = kDefaultAttachmentOffset;
  std::uint64_t seed = 0;

  /// round(d * n * (n - 1))
  std::size_t target_edges() const;

  /// Throws Error naming the first invalid or missing field.
  void validate() const;

  /// Stable text form of every field the model uses, seed excluded.
  std::string canonical() const;
};

/// Writes one `key=value` line per field.
void write_params(const GeneratorParams& params, std::ostream& out);

/// Dyad homophily; cross-group entries are the complements of the in-group values.
class HomophilyMatrix {
 public:
  HomophilyMatrix(double h_MM, double h_mm);

  /// Every entry 1: the kernel ignores classes (DPA).
  static HomophilyMatrix neutral() noexcept;

  double operator()(NodeClass source, NodeClass target) const noexcept {
    return h_[index_of(source)][index_of(target)];
  }

 private:
  HomophilyMatrix() = default;
  std::array<std::array<double, 2>, 2> h_{};
};

/// Exactly round(n * fm) minority nodes (half away from zero), positions
/// shuffled under `seed`. fm must lie in (0, 0.5].
std::vector<NodeClass> assign_classes(std::size_t n, double fm, std::uint64_t seed);

/// Inverse CDF of the continuous Pareto density p(a) ~ a^-gamma on a >= 1.
double pareto_quantile(double u, double gamma);

/// One Pareto draw per node using its group's exponent. Exponents must exceed 1.
std::vector<double> draw_activities(std::span<const NodeClass> classes, double gamma_M, double gamma_m,
                                    std::uint64_t seed);

/// Target-selection probabilities for `source` over all node ids of the
/// current state. Non-candidates (source, existing out-neighbors) get 0.
///   DPA:  k_in(j) + offset
///   DH:   h(c_source, c_j)
///   DPAH: h(c_source, c_j) * (k_in(j) + offset)
/// `cold_start` evaluates the kernel as if every in-degree were 0.
/// Throws GenerationError("no feasible target") when all weights vanish.
std::vector<double> target_kernel(const GraphBuilder& state, NodeId source, const HomophilyMatrix& h,
                                  Model model, double offset = kDefaultAttachmentOffset,
                                  bool cold_start = false);
std::vector<double> target_kernel(const DirectedGraph& graph, NodeId source, const HomophilyMatrix& h,
                                  Model model, double offset = kDefaultAttachmentOffset,
                                  bool cold_start = false);

/// Draws targets from the kernel incrementally: per-class Fenwick trees over
/// (in-degree + offset) weights, kept in integer units of 0.001. A draw may return the source or an existing
/// out-neighbor; the caller rejects those, which conditions the draw on the
/// candidate set.
class TargetSampler {
 public:
  TargetSampler(std::span<const NodeClass> classes, std::span<const std::uint32_t> in_degrees,
                HomophilyMatrix h, Model model, double offset = kDefaultAttachmentOffset);

  NodeId sample(NodeId source, Rng& rng, bool cold_start) const;

  /// Total kernel weight available to `source` once the source itself is excluded.
  double feasible_weight(NodeId source, bool cold_start) const;

  /// Record one more in-edge on `target`.
  void add_in_edge(NodeId target);

 private:
  double node_weight(NodeId v, bool cold_start) const;
  double class_weight(NodeClass source, std::size_t cls, bool cold_start) const;

  Model model_;
  HomophilyMatrix h_;
  std::span<const NodeClass> classes_;
  std::array<std::vector<NodeId>, 2> members_;
  std::vector<std::uint32_t> slot_;
  std::array<std::vector<std::uint64_t>, 2> tree_;
  std::array<std::uint64_t, 2> total_{};
  std::vector<std::uint64_t> weight_;
  std::uint64_t offset_units_ = 0;
};

/// Activity-driven growth (DPA, DH, DPAH); dispatches to generate_random for Random.
DirectedGraph generate(const GeneratorParams& params);

/// Uniform digraph with exactly target_edges() distinct ordered pairs.
DirectedGraph generate_random(const GeneratorParams& params);

}  // namespace rankfair
