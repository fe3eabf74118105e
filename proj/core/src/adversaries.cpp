#include "lgt/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lgt/errors.hpp"
#include "lgt/random.hpp"

namespace lgt {

namespace {

/// Hands out consecutive ids starting at 1.
class IdSource {
 public:
  NodeId next() { return NodeId{++last_}; }

 private:
  std::uint64_t last_ = 0;
};

std::size_t widest(const std::vector<LayerUpdate>& layers) {
  std::size_t w = 1;
  for (const auto& layer : layers) w = std::max(w, layer.entries.size());
  return w;
}

/// Star with the given chain lengths, ids assigned per layer in chain order.
std::vector<LayerUpdate> star_layers(const std::vector<std::size_t>& lengths) {
  const std::size_t depth = *std::max_element(lengths.begin(), lengths.end());
  std::vector<NodeId> tip(lengths.size(), NodeId{0});
  IdSource ids;
  std::vector<LayerUpdate> layers(depth);
  for (std::size_t layer = 1; layer <= depth; ++layer) {
    for (std::size_t c = 0; c < lengths.size(); ++c) {
      if (lengths[c] < layer) continue;
      const NodeId child = ids.next();
      layers[layer - 1].entries.push_back({child, tip[c]});
      tip[c] = child;
    }
  }
  return layers;
}

std::string param_name(const std::string& family, std::initializer_list<std::pair<const char*, std::size_t>> params) {
  std::string name = family + "(";
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) name += ",";
    name += key;
    name += "=";
    name += std::to_string(value);
    first = false;
  }
  return name + ")";
}

}  // namespace

LayeredTree replay(const Instance& instance, std::optional<std::size_t> layers) {
  const std::size_t count = std::min(layers.value_or(instance.layers.size()), instance.layers.size());
  LayeredTree tree;
  for (std::size_t k = 0; k < count; ++k) tree.apply_layer(instance.layers[k]);
  return tree;
}

void validate(const Instance& instance) {
  if (instance.layers.empty()) throw MalformedInput("instance has no layers");
  LayeredTree tree;
  for (std::size_t k = 0; k < instance.layers.size(); ++k) {
    try {
      tree.apply_layer(instance.layers[k]);
    } catch (const TraversalTerminated&) {
      throw MalformedInput("layer " + std::to_string(k + 1) + " is empty");
    }
  }
  if (tree.max_layer_size() != instance.width) {
    throw MalformedInput("declared width " + std::to_string(instance.width) +
                         " differs from the widest layer (" +
                         std::to_string(tree.max_layer_size()) + ")");
  }
}

Instance gen_star(std::size_t w, std::size_t t) {
  if (w < 1 || t < w) throw ContractViolation("star needs w >= 1 and t >= w");
  std::vector<std::size_t> lengths(w);
  for (std::size_t i = 0; i < w; ++i) lengths[i] = t - w + i + 1;
  Instance instance;
  instance.name = param_name("star", {{"w", w}, {"t", t}});
  instance.width = w;
  instance.layers = star_layers(lengths);
  return instance;
}

Instance adaptive_dfs_lengths(std::size_t w, std::size_t t,
                              std::span<const std::size_t> exploration_order) {
  if (w < 1 || t < w) throw ContractViolation("dfs length assignment needs w >= 1 and t >= w");
  if (exploration_order.size() != w) throw ContractViolation("exploration order must list w chains");
  std::vector<char> seen(w, 0);
  for (std::size_t c : exploration_order) {
    if (c >= w || seen[c]) throw ContractViolation("exploration order is not a permutation");
    seen[c] = 1;
  }
  std::vector<std::size_t> lengths(w);
  for (std::size_t i = 0; i < w; ++i) lengths[exploration_order[i]] = t - w + i + 1;
  Instance instance;
  instance.name = param_name("dfs_lengths", {{"w", w}, {"t", t}});
  instance.width = w;
  instance.layers = star_layers(lengths);
  return instance;
}

Instance gen_comb(std::size_t w, std::size_t t, std::size_t tooth_spacing) {
  if (w < 2 || t <= 2 * w || tooth_spacing < 1) {
    throw ContractViolation("comb needs w >= 2, t > 2w and a positive tooth spacing");
  }
  // Teeth hang off spine nodes k = spacing, 2*spacing, ... with k + w < t.
  std::vector<std::size_t> starts;
  for (std::size_t k = tooth_spacing; k + w < t; k += tooth_spacing) starts.push_back(k);

  IdSource ids;
  std::vector<NodeId> spine(t + 1, NodeId{0});
  std::vector<NodeId> tooth_tip(starts.size(), NodeId{0});
  std::vector<LayerUpdate> layers(t);
  for (std::size_t layer = 1; layer <= t; ++layer) {
    auto& entries = layers[layer - 1].entries;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const std::size_t k = starts[i];
      if (layer <= k || layer > k + w) continue;
      const NodeId parent = layer == k + 1 ? spine[k] : tooth_tip[i];
      tooth_tip[i] = ids.next();
      entries.push_back({tooth_tip[i], parent});
    }
    spine[layer] = ids.next();
    entries.push_back({spine[layer], spine[layer - 1]});
  }
  Instance instance;
  instance.name = param_name("comb", {{"w", w}, {"t", t}, {"spacing", tooth_spacing}});
  instance.width = widest(layers);
  instance.layers = std::move(layers);
  return instance;
}

Instance gen_alternating(std::size_t t) {
  if (t < 2) throw ContractViolation("alternating instance needs t >= 2");
  IdSource ids;
  std::vector<LayerUpdate> layers(t);
  std::vector<NodeId> left{ids.next()};
  std::vector<NodeId> right{ids.next()};
  layers[0].entries = {{left[0], NodeId{0}}, {right[0], NodeId{0}}};

  auto grow = [&](std::vector<NodeId>& branch, bool split, LayerUpdate& layer) {
    const NodeId parent = branch.front();
    branch.clear();
    for (int i = 0; i < (split ? 2 : 1); ++i) {
      branch.push_back(ids.next());
      layer.entries.push_back({branch.back(), parent});
    }
  };
  for (std::size_t layer = 2; layer <= t; ++layer) {
    const bool left_splits = layer % 2 == 1;
    grow(left, left_splits, layers[layer - 1]);
    grow(right, !left_splits, layers[layer - 1]);
  }
  Instance instance;
  instance.name = param_name("alternating", {{"t", t}});
  instance.width = widest(layers);
  instance.layers = std::move(layers);
  return instance;
}

Instance gen_random(std::size_t w, std::size_t t, std::uint64_t seed, double split_prob,
                    double kill_prob) {
  if (w < 1 || t < 1) throw ContractViolation("random instance needs w >= 1 and t >= 1");
  if (!(split_prob >= 0.0 && split_prob <= 1.0 && kill_prob >= 0.0 && kill_prob <= 1.0)) {
    throw ContractViolation("probabilities must lie in [0, 1]");
  }
  constexpr int kMaxRedraws = 64;

  Rng rng = substream(seed, "instance");
  IdSource ids;
  std::vector<NodeId> frontier{NodeId{0}};
  std::vector<LayerUpdate> layers;
  layers.reserve(t);
  for (std::size_t layer = 1; layer <= t; ++layer) {
    std::vector<NodeId> parents;
    for (int attempt = 0; attempt < kMaxRedraws && parents.empty(); ++attempt) {
      for (NodeId node : frontier) {
        if (uniform01(rng) < kill_prob) continue;
        const int children = uniform01(rng) < split_prob ? 2 : 1;
        for (int c = 0; c < children && parents.size() < w; ++c) parents.push_back(node);
      }
    }
    if (parents.empty()) {
      throw GenerationFailed("every node of layer " + std::to_string(layer - 1) + " died in " +
                             std::to_string(kMaxRedraws) + " redraws");
    }
    LayerUpdate update;
    frontier.clear();
    for (NodeId parent : parents) {
      frontier.push_back(ids.next());
      update.entries.push_back({frontier.back(), parent});
    }
    layers.push_back(std::move(update));
  }
  Instance instance;
  instance.name = param_name("random", {{"w", w}, {"t", t}}) + "[split=" +
                  std::to_string(split_prob) + ",kill=" + std::to_string(kill_prob) + "]";
  instance.width = widest(layers);
  instance.seed = seed;
  instance.layers = std::move(layers);
  return instance;
}

AdaptiveAdversary::AdaptiveAdversary(Kind kind, std::size_t width, std::size_t horizon)
    : kind_(kind), width_(width), horizon_(horizon) {
  if (width < 1 || horizon < width) throw ContractViolation("adversary needs w >= 1 and t >= w");
}

std::string AdaptiveAdversary::name() const {
  return param_name(kind_ == Kind::max_mass_killer ? "max_mass" : "dfs_lengths_adaptive",
                    {{"w", width_}, {"t", horizon_}});
}

LayerUpdate AdaptiveAdversary::next_layer(const LayeredTree& tree, const Configuration& observed) {
  const std::size_t layer = tree.current_layer();
  if (layer >= horizon_) throw ContractViolation("adversary called past its horizon");

  NodeId next_id{raw(tree.max_id()) + 1};
  auto fresh = [&] {
    const NodeId id = next_id;
    next_id = NodeId{raw(next_id) + 1};
    return id;
  };

  LayerUpdate update;
  if (layer == 0) {
    for (std::size_t c = 0; c < width_; ++c) update.entries.push_back({fresh(), NodeId{0}});
    return update;
  }

  const auto endpoints = tree.last_layer();
  std::optional<NodeIndex> victim;
  // Layers t-w+2 .. t are the ones in which an endpoint is denied children.
  if (layer + 1 >= horizon_ - width_ + 2) {
    if (observed.layer() != layer) {
      throw ContractViolation("observed configuration is not on the last layer");
    }
    NodeIndex best = endpoints.front();
    for (NodeIndex u : endpoints) {
      if (observed.mass(u) > observed.mass(best)) best = u;
    }
    if (kind_ == Kind::dfs_length_assigner && std::abs(observed.mass(best) - 1.0) > kConstraintTol) {
      throw ContractViolation("dfs length assigner needs a deterministic (point mass) policy");
    }
    victim = best;
    killed_mass_.push_back(observed.mass(best));
  }
  for (NodeIndex u : endpoints) {
    if (victim && *victim == u) continue;
    update.entries.push_back({fresh(), tree.id(u)});
  }
  return update;
}

LayerUpdate adaptive_max_mass(AdaptiveAdversary& adversary, const LayeredTree& tree,
                              const Configuration& observed) {
  return adversary.next_layer(tree, observed);
}

}  // namespace lgt
