#pragma once

// Treatment rules over a (possibly partially identified) set of states.
//
// Each state carries the egalitarian equivalents of the two treatments. A rule
// picks delta in [0,1], the share assigned to treatment b, whose EE in state s
// is f^-1(delta f(ee_b) + (1-delta) f(ee_a)). Ties always go to treatment a.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eedecide/errors.hpp"
#include "eedecide/prospects.hpp"
#include "eedecide/root_finding.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide {

struct StatePair {
  std::string label;
  double ee_a = 0.0;
  double ee_b = 0.0;

  double tau_ee() const noexcept { return ee_b - ee_a; }
};

class StateSet {
 public:
  explicit StateSet(std::vector<StatePair> states) : states_(std::move(states)) {
    if (states_.empty()) throw ArgumentError("state set is empty");
    for (const auto& s : states_) {
      if (!(s.ee_a > 0.0) || !(s.ee_b > 0.0) || !std::isfinite(s.ee_a) || !std::isfinite(s.ee_b)) {
        std::ostringstream msg;
        msg << "state '" << s.label << "': EE values must be positive and finite";
        throw ArgumentError(msg.str());
      }
    }
  }

  std::size_t size() const noexcept { return states_.size(); }
  const StatePair& operator[](std::size_t i) const { return states_[i]; }
  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }
  const std::vector<StatePair>& states() const noexcept { return states_; }

 private:
  std::vector<StatePair> states_;
};

enum class Criterion { Bayes, Maximin, MinimaxRegret, PointId };

inline std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Bayes: return "bayes";
    case Criterion::Maximin: return "maximin";
    case Criterion::MinimaxRegret: return "minimax-regret";
    case Criterion::PointId: return "point-id";
  }
  return "?";
}

struct RuleResult {
  double delta = 0.0;
  Criterion criterion = Criterion::PointId;
  // Bayes: expected EE at delta. Maximin: worst-state EE at delta.
  // MinimaxRegret: worst regret at delta. PointId: the EETE.
  double value = 0.0;
  std::vector<StatePair> binding;  // states that determine the rule
  bool synthetic_extremes = false;  // binding states are hull corners, not members
};

/// Corners of the rectangular hull of the state set:
/// s_w worst for both, s_a best for a / worst for b, s_b best for b / worst for a.
struct ExtremeStates {
  StatePair worst;
  StatePair best_a;
  StatePair best_b;
  bool worst_attained = true;
  bool best_a_attained = true;
  bool best_b_attained = true;

  bool all_attained() const noexcept { return worst_attained && best_a_attained && best_b_attained; }
};

/// With strict = true, throws unless every corner is a member state.
inline ExtremeStates extreme_states(const StateSet& ss, bool strict = false) {
  double min_a = ss[0].ee_a, max_a = ss[0].ee_a;
  double min_b = ss[0].ee_b, max_b = ss[0].ee_b;
  for (const auto& s : ss) {
    min_a = std::min(min_a, s.ee_a);
    max_a = std::max(max_a, s.ee_a);
    min_b = std::min(min_b, s.ee_b);
    max_b = std::max(max_b, s.ee_b);
  }
  auto find = [&](double a, double b) -> std::optional<StatePair> {
    for (const auto& s : ss) {
      if (s.ee_a == a && s.ee_b == b) return s;
    }
    return std::nullopt;
  };
  ExtremeStates ext;
  auto w = find(min_a, min_b);
  auto sa = find(max_a, min_b);
  auto sb = find(min_a, max_b);
  ext.worst = w.value_or(StatePair{"s_w", min_a, min_b});
  ext.best_a = sa.value_or(StatePair{"s_a", max_a, min_b});
  ext.best_b = sb.value_or(StatePair{"s_b", min_a, max_b});
  ext.worst_attained = w.has_value();
  ext.best_a_attained = sa.has_value();
  ext.best_b_attained = sb.has_value();
  if (strict && !ext.all_attained()) {
    throw ArgumentError(
        "strict mode: extreme states s_w, s_a, s_b are not all attained by member states");
  }
  return ext;
}

/// R_a(delta, s) = ee^s(a) - ee^s(delta).
inline double regret_a(const WelfareSpec& spec, const StatePair& s, double delta) {
  return s.ee_a - ee_mixture(spec, s.ee_a, s.ee_b, delta);
}

/// R_b(delta, s) = ee^s(b) - ee^s(delta).
inline double regret_b(const WelfareSpec& spec, const StatePair& s, double delta) {
  return s.ee_b - ee_mixture(spec, s.ee_a, s.ee_b, delta);
}

/// max over member states of max{ee(a), ee(b)} - ee(delta).
inline double worst_regret(const WelfareSpec& spec, const StateSet& ss, double delta) {
  double worst = 0.0;
  for (const auto& s : ss) {
    worst = std::max(worst, std::max(s.ee_a, s.ee_b) - ee_mixture(spec, s.ee_a, s.ee_b, delta));
  }
  return worst;
}

/// Point identification: all criteria reduce to 1(tau_ee > 0).
inline RuleResult point_id_rule(double tau_ee) {
  if (!std::isfinite(tau_ee)) throw ArgumentError("point_id_rule: EETE must be finite");
  return {tau_ee > 0.0 ? 1.0 : 0.0, Criterion::PointId, tau_ee, {}, false};
}

/// Bayes: 1(E_pi[tau_ee] > 0).
inline RuleResult bayes_rule(const WelfareSpec& spec, const StateSet& ss, const Prior& prior) {
  if (prior.size() != ss.size()) {
    std::ostringstream msg;
    msg << "bayes_rule: prior has " << prior.size() << " states, state set has " << ss.size();
    throw ArgumentError(msg.str());
  }
  std::vector<double> tau, ee_at;
  tau.reserve(ss.size());
  for (const auto& s : ss) tau.push_back(s.tau_ee());
  const double delta = prior.expectation(tau) > 0.0 ? 1.0 : 0.0;
  for (const auto& s : ss) ee_at.push_back(ee_mixture(spec, s.ee_a, s.ee_b, delta));
  return {delta, Criterion::Bayes, prior.expectation(ee_at), {}, false};
}

/// Maximin: 1(tau_ee(s_w) > 0) at the worst state for both treatments.
inline RuleResult maximin_rule(const WelfareSpec& spec, const StateSet& ss, bool strict = false) {
  const auto ext = extreme_states(ss, strict);
  const auto& sw = ext.worst;
  const double delta = sw.tau_ee() > 0.0 ? 1.0 : 0.0;
  return {delta, Criterion::Maximin, ee_mixture(spec, sw.ee_a, sw.ee_b, delta), {sw},
          !ext.worst_attained};
}

/// Minimax regret: equalizes R_a(., s_a) and R_b(., s_b) unless one treatment
/// is never better (delta = 0) or never worse (delta = 1).
inline RuleResult minimax_regret_rule(const WelfareSpec& spec, const StateSet& ss,
                                      bool strict = false) {
  const auto ext = extreme_states(ss, strict);
  const StatePair& sa = ext.best_a;
  const StatePair& sb = ext.best_b;
  const bool synthetic = !(ext.best_a_attained && ext.best_b_attained);
  RuleResult result{0.0, Criterion::MinimaxRegret, 0.0, {sa, sb}, synthetic};

  if (sb.ee_b <= sb.ee_a) return result;  // b never better
  if (sa.ee_b >= sa.ee_a) {               // b never worse
    result.delta = 1.0;
    return result;
  }

  const double scale = std::max({sa.ee_a, sa.ee_b, sb.ee_a, sb.ee_b});
  BisectionOptions opts;
  opts.f_tolerance = 1e-13 * scale;
  opts.x_tolerance = 0.0;
  auto h = [&](double d) { return regret_b(spec, sb, d) - regret_a(spec, sa, d); };
  const auto root = bisect(h, 0.0, 1.0, opts);
  result.delta = root.root;
  result.value = std::max(regret_a(spec, sa, root.root), regret_b(spec, sb, root.root));
  return result;
}

struct RegretRow {
  double delta;
  double regret_a;  // R_a(delta, s_a)
  double regret_b;  // R_b(delta, s_b)
  double worst;
};

/// The two regret curves on an evenly spaced delta grid of `grid` points.
inline std::vector<RegretRow> regret_profile(const WelfareSpec& spec, const StateSet& ss,
                                             std::size_t grid) {
  if (grid < 2) throw ArgumentError("regret_profile: grid must have at least 2 points");
  const auto ext = extreme_states(ss);
  std::vector<RegretRow> rows;
  rows.reserve(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double delta =
        k + 1 == grid ? 1.0 : static_cast<double>(k) / static_cast<double>(grid - 1);
    const double ra = regret_a(spec, ext.best_a, delta);
    const double rb = regret_b(spec, ext.best_b, delta);
    rows.push_back({delta, ra, rb, std::max(ra, rb)});
  }
  return rows;
}

}  // namespace eedecide
