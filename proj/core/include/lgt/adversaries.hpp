#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgt/configuration.hpp"
#include "lgt/layered_tree.hpp"

namespace lgt {

/// An offline instance: the full sequence of layer revelations.
struct Instance {
  std::string name;
  std::size_t width = 1;
  std::optional<std::uint64_t> seed;
  std::vector<LayerUpdate> layers;

  std::size_t depth() const noexcept { return layers.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Replays the first `layers` updates (all by default) on a fresh tree.
LayeredTree replay(const Instance& instance, std::optional<std::size_t> layers = std::nullopt);

/// Throws MalformedInput unless every layer is valid against its predecessor
/// and the widest layer has exactly `instance.width` nodes.
void validate(const Instance& instance);

/// Root with w disjoint chains; chain i (1-based) has length t - w + i.
Instance gen_star(std::size_t w, std::size_t t);

/// Spine of length t with a tooth (a chain of length w) hanging off every
/// `tooth_spacing`-th spine node. Teeth end strictly above layer t, so every
/// tooth is a dead end. Within a layer, teeth come first (oldest first) and
/// the spine node last. With spacing 1 the widest layer has w + 1 nodes.
Instance gen_comb(std::size_t w, std::size_t t, std::size_t tooth_spacing = 1);

/// Two branches below the root. From layer 2 on, one branch holds two
/// siblings and the other a single node, swapping every layer: left has two
/// nodes on odd layers, right on even layers. A two-node branch continues
/// only from its first node. Width 3.
Instance gen_alternating(std::size_t t);

/// Star whose i-th explored chain (per `exploration_order`, a permutation of
/// chain indices 0..w-1) has length t - w + i, i = 1..w.
Instance adaptive_dfs_lengths(std::size_t w, std::size_t t,
                              std::span<const std::size_t> exploration_order);

/// Seeded random layered tree. Each last-layer node dies with `kill_prob`,
/// otherwise gets one child plus a second with `split_prob`; layers are capped
/// at w nodes. A layer in which everything dies is redrawn a bounded number
/// of times before GenerationFailed is thrown.
Instance gen_random(std::size_t w, std::size_t t, std::uint64_t seed, double split_prob,
                    double kill_prob);

/// Adversary that builds a star of w equal chains online and, during the last
/// w - 1 layers before the horizon, gives no children to the endpoint holding
/// the most mass under the observed configuration (ties: smallest id).
class AdaptiveAdversary {
 public:
  enum class Kind {
    max_mass_killer,
    /// Same construction, but the observed configuration must be a point mass:
    /// the i-th chain the deterministic policy explores gets length t - w + i.
    dfs_length_assigner,
  };

  AdaptiveAdversary(Kind kind, std::size_t width, std::size_t horizon);

  Kind kind() const noexcept { return kind_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::string name() const;

  bool finished(const LayeredTree& tree) const { return tree.current_layer() >= horizon_; }

  /// Next layer given the policy's configuration on the tree's last layer.
  LayerUpdate next_layer(const LayeredTree& tree, const Configuration& observed);

  /// Mass removed by every kill so far, in order.
  const std::vector<double>& killed_mass() const noexcept { return killed_mass_; }

 private:
  Kind kind_;
  std::size_t width_;
  std::size_t horizon_;
  std::vector<double> killed_mass_;
};

LayerUpdate adaptive_max_mass(AdaptiveAdversary& adversary, const LayeredTree& tree,
                              const Configuration& observed);

}  // namespace lgt
