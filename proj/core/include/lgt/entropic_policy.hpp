#pragma once

#include <cstddef>
#include <vector>

#include "lgt/configuration.hpp"
#include "lgt/layered_tree.hpp"
#include "lgt/policy.hpp"

namespace lgt {

/// Linear bias on the leaves, indexed by NodeIndex. An empty vector means 0.
struct GammaVector {
  std::vector<double> bias;

  double operator[](NodeIndex u) const { return u < bias.size() ? bias[u] : 0.0; }
};

/// The recursive weights y_u behind the closed-form minimizer.
struct ExplicitWeights {
  std::vector<double> y;
};

struct ArgminResult {
  Configuration config;
  ExplicitWeights weights;
};

/// Lower clamp for y_u when a large bias would underflow exp().
inline constexpr double kWeightFloor = 1e-300;

/// Minimizer of sum_u h_{p(u)} x_u ln(x_u/x_{p(u)}) + <gamma, x_L> over the
/// active polytope, computed bottom-up:
///
///   y_leaf = exp(-gamma_leaf / h_{p(leaf)})
///   y_u    = (sum_{v in c(u)} y_v)^(h_u / h_{p(u)})
///   x_u / x_{p(u)} = y_u / sum_{v in c(p(u))} y_v
///
/// Heights must be 0 on leaves and decrease strictly along every path. An
/// internal node may have height 0 only if all of its children are unbiased
/// leaves (the s = 0 end of the growth interpolation); its children then
/// split the mass equally.
ArgminResult explicit_argmin(const LayeredTree& tree, const HeightProfile& heights,
                             const GammaVector& gamma = {});

struct PotentialBreakdown {
  double deactivation_term = 0.0;  // 4 L(t) / w
  double entropy_term = 0.0;       // 4 ln w * Phi_t(x(t))
  double time_term = 0.0;          // 6 (1 + ln w)^2 t
  double total = 0.0;
};

/// P(t) for the configuration `cfg` on `tree`. Throws ContractViolation if
/// `declared_width` is below the largest layer observed.
PotentialBreakdown potential(const LayeredTree& tree, const Configuration& cfg,
                             std::size_t declared_width);

/// Plays the entropy-maximizing configuration on every layer.
class EntropicPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::entropic; }

 protected:
  Configuration configure(const LayeredTree& tree) override;
};

}  // namespace lgt
