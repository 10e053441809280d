#pragma once

// Lognormal outcome model per site: log y(a) ~ N(mu, sigma^2) and
// log y(b) ~ N(mu + zeta, (sigma lambda)^2). The EE has the closed form
//   EE(y(d)) = exp(mu + zeta 1_b(d) + (1 - gamma) (sigma lambda^1_b(d))^2 / 2),
// which makes posterior summaries over parameter draws cheap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eedecide/errors.hpp"
#include "eedecide/rules.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide {

struct SiteParams {
  double mu = 0.0;
  double zeta = 0.0;
  double sigma = 1.0;
  double lambda = 1.0;

  void validate() const {
    if (!std::isfinite(mu) || !std::isfinite(zeta) || !(sigma > 0.0) || !(lambda > 0.0) ||
        !std::isfinite(sigma) || !std::isfinite(lambda)) {
      std::ostringstream msg;
      msg << "site parameters need finite mu, zeta and sigma, lambda > 0 (got mu=" << mu
          << " zeta=" << zeta << " sigma=" << sigma << " lambda=" << lambda << ")";
      throw ArgumentError(msg.str());
    }
  }
};

struct PosteriorDraws {
  std::string site;
  std::vector<SiteParams> draws;
};

struct MetaSummary {
  std::string site;
  std::size_t draws = 0;
  double mean_tau = 0.0;
  double prob_tau_pos = 0.0;
  double mean_tau_ee = 0.0;
  double prob_tau_ee_pos = 0.0;
  std::string units;

  // Bayes rule given the draws: 1(E[tau_ee] > 0).
  double bayes_delta() const noexcept { return mean_tau_ee > 0.0 ? 1.0 : 0.0; }
};

inline double ee_lognormal(const WelfareSpec& spec, const SiteParams& p, bool treated) {
  p.validate();
  const double scale = treated ? p.sigma * p.lambda : p.sigma;
  const double location = treated ? p.mu + p.zeta : p.mu;
  return std::exp(location + 0.5 * (1.0 - spec.gamma()) * scale * scale);
}

struct TauPair {
  double tau;     // difference in means
  double tau_ee;  // difference in EEs at the evaluator's gamma
};

inline TauPair tau_pair(const WelfareSpec& spec, const SiteParams& p) {
  const WelfareSpec neutral(0.0);
  const double tau = ee_lognormal(neutral, p, true) - ee_lognormal(neutral, p, false);
  if (spec.is_linear()) return {tau, tau};
  return {tau, ee_lognormal(spec, p, true) - ee_lognormal(spec, p, false)};
}

inline MetaSummary summarize_posterior(const WelfareSpec& spec, const PosteriorDraws& d,
                                       std::string units = {}) {
  if (d.draws.empty()) throw ArgumentError("site '" + d.site + "': no posterior draws");
  MetaSummary s;
  s.site = d.site;
  s.draws = d.draws.size();
  s.units = std::move(units);
  std::size_t tau_pos = 0, tau_ee_pos = 0;
  for (const auto& p : d.draws) {
    const auto t = tau_pair(spec, p);
    s.mean_tau += t.tau;
    s.mean_tau_ee += t.tau_ee;
    tau_pos += t.tau > 0.0;
    tau_ee_pos += t.tau_ee > 0.0;
  }
  const double n = static_cast<double>(d.draws.size());
  s.mean_tau /= n;
  s.mean_tau_ee /= n;
  s.prob_tau_pos = static_cast<double>(tau_pos) / n;
  s.prob_tau_ee_pos = static_cast<double>(tau_ee_pos) / n;
  return s;
}

/// Component-wise posterior mean of the draws, a plug-in point estimate.
inline SiteParams posterior_mean(const PosteriorDraws& d) {
  if (d.draws.empty()) throw ArgumentError("site '" + d.site + "': no posterior draws");
  SiteParams m{0.0, 0.0, 0.0, 0.0};
  for (const auto& p : d.draws) {
    m.mu += p.mu;
    m.zeta += p.zeta;
    m.sigma += p.sigma;
    m.lambda += p.lambda;
  }
  const double n = static_cast<double>(d.draws.size());
  m.mu /= n;
  m.zeta /= n;
  m.sigma /= n;
  m.lambda /= n;
  return m;
}

/// Treat the point estimate as the truth: 1(tau_ee(estimate) > 0).
inline RuleResult plugin_rule(const WelfareSpec& spec, const SiteParams& point) {
  return point_id_rule(tau_pair(spec, point).tau_ee);
}

/// Two-arm lognormal maximum likelihood estimate from log outcomes. Returns
/// nothing when either arm has zero sample variance.
inline std::optional<SiteParams> lognormal_mle(const std::vector<double>& log_a,
                                               const std::vector<double>& log_b) {
  auto moments = [](const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, std::sqrt(ss / static_cast<double>(x.size()))};
  };
  if (log_a.size() < 2 || log_b.size() < 2) throw ArgumentError("lognormal_mle: need 2 draws per arm");
  const auto [mean_a, sd_a] = moments(log_a);
  const auto [mean_b, sd_b] = moments(log_b);
  if (!(sd_a > 0.0) || !(sd_b > 0.0)) return std::nullopt;
  return SiteParams{mean_a, mean_b - mean_a, sd_a, sd_b / sd_a};
}

struct AgreementRow {
  std::size_t sample_size = 0;
  std::size_t replications = 0;
  std::size_t skipped = 0;
  std::size_t agreements = 0;

  // Fraction of usable replications whose plug-in decision matches the truth.
  double agreement() const noexcept {
    const std::size_t used = replications - skipped;
    return used == 0 ? 0.0 : static_cast<double>(agreements) / static_cast<double>(used);
  }
};

/// Engine for one replication, seeded from (seed, sample-size index, replication).
inline std::mt19937_64 replication_engine(std::uint64_t seed, std::size_t size_index,
                                          std::size_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(size_index), static_cast<std::uint32_t>(replication)};
  return std::mt19937_64(seq);
}

/// For each sample size t (split evenly between arms), draws `replications`
/// experiments from `truth`, applies the plug-in rule to the MLE and records
/// agreement with the decision under the true parameters.
inline std::vector<AgreementRow> finite_sample_sim(const WelfareSpec& spec, const SiteParams& truth,
                                                   const std::vector<std::size_t>& sample_sizes,
                                                   std::size_t replications, std::uint64_t seed) {
  truth.validate();
  if (replications == 0) throw ArgumentError("finite_sample_sim: replications must be >= 1");
  if (sample_sizes.empty()) throw ArgumentError("finite_sample_sim: no sample sizes");
  for (auto t : sample_sizes) {
    if (t < 4) throw ArgumentError("finite_sample_sim: sample sizes must be >= 4");
  }
  const double target = point_id_rule(tau_pair(spec, truth).tau_ee).delta;

  std::vector<AgreementRow> rows;
  std::vector<double> log_a, log_b;
  for (std::size_t k = 0; k < sample_sizes.size(); ++k) {
    const std::size_t t = sample_sizes[k];
    AgreementRow row{t, replications, 0, 0};
    log_a.resize(t / 2);
    log_b.resize(t - t / 2);
    for (std::size_t r = 0; r < replications; ++r) {
      auto engine = replication_engine(seed, k, r);
      std::normal_distribution<double> arm_a(truth.mu, truth.sigma);
      std::normal_distribution<double> arm_b(truth.mu + truth.zeta, truth.sigma * truth.lambda);
      for (auto& v : log_a) v = arm_a(engine);
      for (auto& v : log_b) v = arm_b(engine);
      const auto estimate = lognormal_mle(log_a, log_b);
      if (!estimate) {
        ++row.skipped;
        continue;
      }
      row.agreements += plugin_rule(spec, *estimate).delta == target;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eedecide
