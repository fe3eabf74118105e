#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "lgt/configuration.hpp"
#include "lgt/layered_tree.hpp"

namespace lgt {

enum class PolicyKind { entropic, dfs, random_dfs, uniform };

std::string_view to_string(PolicyKind kind);
/// Accepts the lowercase names used on the command line.
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

/// Common interface of every traversal policy in its fractional form. A policy
/// owns its previous configuration; `step` is called once per revealed layer,
/// after dead-ends have been pruned, and returns the transport cost paid.
class Policy {
 public:
  Policy();
  virtual ~Policy() = default;

  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  virtual PolicyKind kind() const = 0;

  double step(const LayeredTree& tree);

  const Configuration& current() const noexcept { return current_; }

 protected:
  virtual Configuration configure(const LayeredTree& tree) = 0;

 private:
  Configuration current_;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind);

}  // namespace lgt
