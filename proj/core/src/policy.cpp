#include "lgt/policy.hpp"

#include "lgt/baselines.hpp"
#include "lgt/entropic_policy.hpp"

namespace lgt {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::entropic:
      return "entropic";
    case PolicyKind::dfs:
      return "dfs";
    case PolicyKind::random_dfs:
      return "random_dfs";
    case PolicyKind::uniform:
      return "uniform";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::entropic, PolicyKind::dfs, PolicyKind::random_dfs,
                    PolicyKind::uniform}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

Policy::Policy() : current_(LayeredTree{}) {}

double Policy::step(const LayeredTree& tree) {
  Configuration next = configure(tree);
  const double cost = ot_cost(current_, next);
  current_ = std::move(next);
  return cost;
}

std::unique_ptr<Policy> make_policy(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::entropic:
      return std::make_unique<EntropicPolicy>();
    case PolicyKind::dfs:
      return std::make_unique<DfsPolicy>();
    case PolicyKind::random_dfs:
      return std::make_unique<RandomDfsPolicy>();
    case PolicyKind::uniform:
      return std::make_unique<UniformPolicy>();
  }
  return nullptr;
}

}  // namespace lgt
