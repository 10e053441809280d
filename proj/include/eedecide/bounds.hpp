#pragma once

// Minimax-regret assignment when each arm's EE is only known to lie in an
// interval [ee_low, ee_high], e.g. from sample-selection bounds on wages.

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eedecide/errors.hpp"
#include "eedecide/rules.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide {

struct EeBounds {
  std::string scheme;
  double gamma = 0.0;
  double ee_a_low = 0.0;
  double ee_a_high = 0.0;
  double ee_b_low = 0.0;
  double ee_b_high = 0.0;

  void validate() const {
    std::ostringstream msg;
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      msg << "bounds '" << scheme << "': gamma must be finite and >= 0";
    } else if (!(ee_a_low > 0.0 && ee_b_low > 0.0) || !std::isfinite(ee_a_high) ||
               !std::isfinite(ee_b_high)) {
      msg << "bounds '" << scheme << "': EE bounds must be positive and finite";
    } else if (ee_a_low > ee_a_high || ee_b_low > ee_b_high) {
      msg << "bounds '" << scheme << "' (gamma=" << gamma << "): lower bound exceeds upper bound";
    } else {
      return;
    }
    throw ArgumentError(msg.str());
  }
};

/// s_a = (ee_a_high, ee_b_low), s_b = (ee_a_low, ee_b_high). Their hull also
/// yields the worst state (ee_a_low, ee_b_low).
inline StateSet bounds_to_states(const EeBounds& b) {
  b.validate();
  return StateSet({{"s_a", b.ee_a_high, b.ee_b_low}, {"s_b", b.ee_a_low, b.ee_b_high}});
}

inline RuleResult assign_from_bounds(const EeBounds& b) {
  const StateSet states = bounds_to_states(b);
  const WelfareSpec spec(b.gamma);
  if (b.ee_b_high <= b.ee_a_low) {
    return {0.0, Criterion::MinimaxRegret, 0.0, states.states(), false};
  }
  if (b.ee_b_low >= b.ee_a_high) {
    return {1.0, Criterion::MinimaxRegret, 0.0, states.states(), false};
  }
  return minimax_regret_rule(spec, states);
}

/// Endpoint regrets (R_a(1, s_a), R_b(0, s_b)) = (ee_a_high - ee_b_low, ee_b_high - ee_a_low).
inline std::pair<double, double> worst_regret_decomposition(const EeBounds& b) {
  b.validate();
  return {b.ee_a_high - b.ee_b_low, b.ee_b_high - b.ee_a_low};
}

inline std::vector<RuleResult> assign_all(const std::vector<EeBounds>& rows) {
  std::vector<RuleResult> out;
  out.reserve(rows.size());
  for (const auto& b : rows) out.push_back(assign_from_bounds(b));
  return out;
}

}  // namespace eedecide
