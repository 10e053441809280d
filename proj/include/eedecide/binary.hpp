#pragma once

// Status quo (a) versus innovation (b) with binary outcomes in {p_low, p_high}.
//
// A state is summarized by the share of individuals at p_high. With f the
// Atkinson transform affinely normalized so f(p_low) = 0 and f(p_high) = 1,
// the EE of a distribution with share P is f^-1(P), and a rule assigning
// delta to b has EE f^-1(p_a + (p_b - p_a) delta) in a state with share p_b.
//
// The inequality-neutral (IN) evaluator works with shares directly; the
// inequality-averse (IA) evaluator works with EEs.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "eedecide/errors.hpp"
#include "eedecide/prospects.hpp"
#include "eedecide/root_finding.hpp"
#include "eedecide/rules.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide {

class BinaryOutcomeSpec {
 public:
  BinaryOutcomeSpec(double p_low, double p_high, WelfareSpec spec)
      : p_low_(p_low), p_high_(p_high), spec_(spec) {
    if (!(p_low > 0.0 && p_low < p_high && p_high <= 1.0)) {
      std::ostringstream msg;
      msg << "binary outcomes need 0 < p_low < p_high <= 1, got p_low=" << p_low
          << " p_high=" << p_high;
      throw ArgumentError(msg.str());
    }
  }

  double p_low() const noexcept { return p_low_; }
  double p_high() const noexcept { return p_high_; }
  const WelfareSpec& spec() const noexcept { return spec_; }

 private:
  double p_low_;
  double p_high_;
  WelfareSpec spec_;
};

namespace detail {

inline void check_share(double share, const char* what) {
  if (!(share >= 0.0 && share <= 1.0)) {
    std::ostringstream msg;
    msg << what << " " << share << " outside [0,1]";
    throw ArgumentError(msg.str());
  }
}

}  // namespace detail

/// EE of a binary distribution with `share` of individuals at p_high.
/// Normalizing f affinely does not change f^-1 of a mean, so this is the
/// EE-mixture of the two outcome levels.
inline double ee_binary(const BinaryOutcomeSpec& outcome, double share) {
  detail::check_share(share, "ee_binary: share");
  return ee_mixture(outcome.spec(), outcome.p_low(), outcome.p_high(), share);
}

class BinaryProblem {
 public:
  BinaryProblem(BinaryOutcomeSpec outcome, double p_a, std::vector<double> p_b_states)
      : outcome_(outcome), p_a_(p_a), p_b_(std::move(p_b_states)) {
    if (!(p_a > 0.0 && p_a < 1.0)) {
      std::ostringstream msg;
      msg << "status quo share p_a must lie in (0,1), got " << p_a;
      throw ArgumentError(msg.str());
    }
    if (p_b_.empty()) throw ArgumentError("binary problem: no innovation states");
    for (double p : p_b_) detail::check_share(p, "innovation share");
  }

  const BinaryOutcomeSpec& outcome() const noexcept { return outcome_; }
  double p_a() const noexcept { return p_a_; }
  const std::vector<double>& p_b_states() const noexcept { return p_b_; }

  bool has_extreme_states() const {
    return std::find(p_b_.begin(), p_b_.end(), 0.0) != p_b_.end() &&
           std::find(p_b_.begin(), p_b_.end(), 1.0) != p_b_.end();
  }

  /// Welfare of rule delta in state with innovation share p_b: the share
  /// p_a + (p_b - p_a) delta for IN, its EE for IA.
  double welfare(double p_b, double delta, bool inequality_averse) const {
    const double share = std::clamp(p_a_ + (p_b - p_a_) * delta, 0.0, 1.0);
    return inequality_averse ? ee_binary(outcome_, share) : share;
  }

  /// max{welfare(a), welfare(b)} - welfare(delta) in one state.
  double regret(double p_b, double delta, bool inequality_averse) const {
    const double best = std::max(welfare(p_b, 0.0, inequality_averse),
                                 welfare(p_b, 1.0, inequality_averse));
    return best - welfare(p_b, delta, inequality_averse);
  }

  /// The same problem expressed as a generic state set of EE pairs.
  StateSet as_state_set() const {
    std::vector<StatePair> states;
    const double ee_a = ee_binary(outcome_, p_a_);
    for (std::size_t s = 0; s < p_b_.size(); ++s) {
      states.push_back({"s" + std::to_string(s + 1), ee_a, ee_binary(outcome_, p_b_[s])});
    }
    return StateSet(std::move(states));
  }

 private:
  BinaryOutcomeSpec outcome_;
  double p_a_;
  std::vector<double> p_b_;
};

/// Bayesian evaluators. IN accepts iff E_pi[p_b] > p_a; IA accepts iff
/// E_pi[f^-1(p_b)] > f^-1(p_a). Either way the optimum is bang-bang.
inline RuleResult bayes_binary(const BinaryProblem& problem, const Prior& prior,
                               bool inequality_averse) {
  const auto& states = problem.p_b_states();
  if (prior.size() != states.size()) {
    std::ostringstream msg;
    msg << "bayes_binary: prior has " << prior.size() << " states, problem has "
        << states.size();
    throw ArgumentError(msg.str());
  }
  auto objective = [&](double delta) {
    std::vector<double> w;
    w.reserve(states.size());
    for (double p : states) w.push_back(problem.welfare(p, delta, inequality_averse));
    return prior.expectation(w);
  };
  const double keep = objective(0.0);
  const double adopt = objective(1.0);
  const double delta = adopt > keep ? 1.0 : 0.0;
  if (delta == 0.0 && inequality_averse) {
    // The IA objective is convex in delta; an interior improvement would be a bug.
    constexpr int kGrid = 1000;
    for (int k = 1; k < kGrid; ++k) {
      if (objective(static_cast<double>(k) / kGrid) > keep * (1.0 + 1e-12)) {
        throw SolverError("bayes_binary: interior rule beats both endpoints");
      }
    }
  }
  return {delta, Criterion::Bayes, delta == 1.0 ? adopt : keep, {}, false};
}

/// Minimax regret. IN: 1 - p_a. IA: the delta equalizing
///   p_high - f^-1(p_a + (1 - p_a) delta) = f^-1(p_a) - f^-1(p_a (1 - delta)),
/// the regrets in the states where the innovation always / never succeeds.
inline RuleResult minimax_regret_binary(const BinaryProblem& problem, bool inequality_averse) {
  if (!problem.has_extreme_states()) {
    throw ArgumentError(
        "minimax_regret_binary: innovation states must include shares 0 and 1");
  }
  const auto& out = problem.outcome();
  const double p_a = problem.p_a();
  RuleResult result{0.0, Criterion::MinimaxRegret, 0.0, {}, false};
  if (!inequality_averse) {
    result.delta = 1.0 - p_a;
  } else {
    const double ee_a = ee_binary(out, p_a);
    auto residual = [&](double d) {
      const double regret_sb = out.p_high() - ee_binary(out, std::min(1.0, p_a + (1.0 - p_a) * d));
      const double regret_sa = ee_a - ee_binary(out, std::max(0.0, p_a * (1.0 - d)));
      return regret_sb - regret_sa;
    };
    BisectionOptions opts;
    opts.f_tolerance = 1e-13 * out.p_high();
    opts.x_tolerance = 0.0;
    result.delta = bisect(residual, 0.0, 1.0, opts).root;
  }
  const double r_sa = problem.regret(0.0, result.delta, inequality_averse);
  const double r_sb = problem.regret(1.0, result.delta, inequality_averse);
  result.value = std::max(r_sa, r_sb);
  const double w_a = problem.welfare(0.0, 0.0, inequality_averse);
  result.binding = {{"s_a", w_a, problem.welfare(0.0, 1.0, inequality_averse)},
                    {"s_b", w_a, problem.welfare(1.0, 1.0, inequality_averse)}};
  return result;
}

/// Maximin: delta = 1 iff the innovation beats the status quo even in its
/// worst state. f^-1 is monotone, so IN and IA agree.
inline RuleResult maximin_binary(const BinaryProblem& problem, bool inequality_averse = false) {
  const auto& states = problem.p_b_states();
  const double worst_share = *std::min_element(states.begin(), states.end());
  const double delta = worst_share > problem.p_a() ? 1.0 : 0.0;
  return {delta, Criterion::Maximin, problem.welfare(worst_share, delta, inequality_averse), {},
          false};
}

}  // namespace eedecide
