#pragma once

// Prospects: income distributions across a finite set of states, and their
// ranking under a prior or the maximin criterion. The ranking depends on how
// the per-state welfare is represented (EE versus mean of transformed incomes)
// for Bayesian evaluators but not for maximin ones.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "eedecide/errors.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide {

class Prior {
 public:
  static constexpr double kSumTolerance = 1e-12;

  Prior() = default;
  explicit Prior(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ArgumentError("prior: no weights");
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("prior: weights must be finite and >= 0");
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > kSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "prior: weights sum to " << total << ", expected 1";
      throw ArgumentError(msg.str());
    }
  }

  static Prior uniform(std::size_t m) {
    if (m == 0) throw ArgumentError("prior: no states");
    std::vector<double> w(m, 1.0 / static_cast<double>(m));
    // Push rounding residue into the last weight so the sum is exact enough.
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return Prior(std::move(w));
  }

  static Prior point_mass(std::size_t m, std::size_t state) {
    if (state >= m) throw ArgumentError("prior: point mass outside state space");
    std::vector<double> w(m, 0.0);
    w[state] = 1.0;
    return Prior(std::move(w));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t s) const { return weights_[s]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  template <class Values>
  double expectation(const Values& values) const {
    if (std::size(values) != weights_.size()) {
      std::ostringstream msg;
      msg << "prior has " << weights_.size() << " states, values have " << std::size(values);
      throw ArgumentError(msg.str());
    }
    double acc = 0.0;
    std::size_t s = 0;
    for (double v : values) acc += weights_[s++] * v;
    return acc;
  }

 private:
  std::vector<double> weights_;
};

enum class Representation { EgalitarianEquivalent, TransformedMean, RawMean };

inline std::string to_string(Representation rep) {
  switch (rep) {
    case Representation::EgalitarianEquivalent: return "ee";
    case Representation::TransformedMean: return "transformed-mean";
    case Representation::RawMean: return "raw-mean";
  }
  return "?";
}

class Prospect {
 public:
  // rows[i][s] is the income of individual i in state s.
  Prospect(std::string name, std::vector<std::vector<double>> rows,
           std::vector<std::string> state_labels)
      : name_(std::move(name)), rows_(std::move(rows)), labels_(std::move(state_labels)) {
    if (rows_.empty()) throw ArgumentError("prospect '" + name_ + "': no individuals");
    if (labels_.empty()) throw ArgumentError("prospect '" + name_ + "': no states");
    for (const auto& row : rows_) {
      if (row.size() != labels_.size()) {
        throw ArgumentError("prospect '" + name_ + "': ragged matrix");
      }
      for (double y : row) {
        if (!(y > 0.0) || !std::isfinite(y)) {
          throw DomainError("prospect '" + name_ + "': incomes must be positive and finite");
        }
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t individuals() const noexcept { return rows_.size(); }
  std::size_t states() const noexcept { return labels_.size(); }
  const std::vector<std::string>& state_labels() const noexcept { return labels_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

  std::vector<double> column(std::size_t s) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.at(s));
    return out;
  }

 private:
  std::string name_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> labels_;
};

inline std::vector<double> state_scores(const Prospect& p, const WelfareSpec& spec,
                                        Representation rep) {
  std::vector<double> scores;
  scores.reserve(p.states());
  for (std::size_t s = 0; s < p.states(); ++s) {
    const auto col = p.column(s);
    switch (rep) {
      case Representation::EgalitarianEquivalent:
        scores.push_back(ee(spec, col));
        break;
      case Representation::TransformedMean: {
        double acc = 0.0;
        for (double y : col) acc += f_eval(spec, y);
        scores.push_back(acc / static_cast<double>(col.size()));
        break;
      }
      case Representation::RawMean:
        scores.push_back(ee(WelfareSpec(0.0), col));
        break;
    }
  }
  return scores;
}

inline double expected_score(const Prospect& p, const WelfareSpec& spec, Representation rep,
                             const Prior& prior) {
  if (prior.size() != p.states()) {
    std::ostringstream msg;
    msg << "prospect '" << p.name() << "' has " << p.states() << " states, prior has "
        << prior.size();
    throw ArgumentError(msg.str());
  }
  return prior.expectation(state_scores(p, spec, rep));
}

struct RankedProspect {
  std::size_t index;  // position in the input list
  std::string name;
  double score;
};

namespace detail {

inline void check_shared_states(const std::vector<Prospect>& ps, std::size_t min_count) {
  if (ps.size() < min_count) {
    std::ostringstream msg;
    msg << "need at least " << min_count << " prospect(s), got " << ps.size();
    throw ArgumentError(msg.str());
  }
  for (const auto& p : ps) {
    if (p.state_labels() != ps.front().state_labels()) {
      throw ArgumentError("prospect '" + p.name() + "' does not share the state space of '" +
                          ps.front().name() + "'");
    }
  }
}

}  // namespace detail

/// Descending by expected score; ties keep input order.
inline std::vector<RankedProspect> rank_prospects(const std::vector<Prospect>& ps,
                                                  const WelfareSpec& spec, Representation rep,
                                                  const Prior& prior) {
  detail::check_shared_states(ps, 2);
  std::vector<RankedProspect> ranked;
  ranked.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ranked.push_back({i, ps[i].name(), expected_score(ps[i], spec, rep, prior)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedProspect& l, const RankedProspect& r) { return l.score > r.score; });
  return ranked;
}

/// Worst-state score of a prospect.
inline double worst_state_score(const Prospect& p, const WelfareSpec& spec, Representation rep) {
  const auto scores = state_scores(p, spec, rep);
  return *std::min_element(scores.begin(), scores.end());
}

/// Index of the prospect with the largest worst-state score; first wins ties.
inline std::size_t maximin_choice(const std::vector<Prospect>& ps, const WelfareSpec& spec,
                                  Representation rep) {
  detail::check_shared_states(ps, 1);
  std::size_t best = 0;
  double best_score = worst_state_score(ps[0], spec, rep);
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const double score = worst_state_score(ps[i], spec, rep);
    if (score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace eedecide
