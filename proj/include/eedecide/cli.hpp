#pragma once

// Command-line front end. Exit status: 0 success, 2 validation or input
// error, 3 solver error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eedecide/binary.hpp"
#include "eedecide/bounds.hpp"
#include "eedecide/errors.hpp"
#include "eedecide/io.hpp"
#include "eedecide/meta.hpp"
#include "eedecide/prospects.hpp"
#include "eedecide/rules.hpp"
#include "eedecide/welfare.hpp"

namespace eedecide::cli {

enum class Command { Ee, Rank, Assign, Binary, Bounds, MetaSummarize, MetaSimulate };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Ee;
  double gamma = 0.0;
  bool gamma_set = false;
  std::vector<std::string> inputs;
  std::string output_path;  // empty: standard output
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::string> prior;
  std::optional<double> p_low, p_high, p_a;
  std::string p_b = "0,1";
  std::string representation = "ee";
  std::string curves_dir;
  std::string units;
  bool strict = false;

  const std::string& input_path() const { return inputs.front(); }
};

/// Comma-separated weights; each entry is a decimal or a fraction "n/d".
inline std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](std::string s) {
    s = eedecide::detail::trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw UsageError(what + ": '" + s + "' is not a number");
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto slash = item.find('/');
    if (slash == std::string::npos) {
      out.push_back(number(item));
    } else {
      const double den = number(item.substr(slash + 1));
      if (den == 0.0) throw UsageError(what + ": zero denominator in '" + item + "'");
      out.push_back(number(item.substr(0, slash)) / den);
    }
  }
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

inline Representation parse_representation(const std::string& name) {
  if (name == "ee") return Representation::EgalitarianEquivalent;
  if (name == "transformed-mean") return Representation::TransformedMean;
  if (name == "raw-mean") return Representation::RawMean;
  throw UsageError("unknown representation '" + name + "' (ee, transformed-mean, raw-mean)");
}

inline RunConfig parse_args(std::vector<std::string> args) {
  // "meta summarize" and "meta simulate" are accepted as two tokens.
  if (args.size() >= 2 && args[0] == "meta") {
    args[1] = "meta-" + args[1];
    args.erase(args.begin());
  }

  RunConfig cfg;
  CLI::App app{"Egalitarian-equivalent welfare and treatment assignment", "eedecide"};
  app.require_subcommand(1);

  struct Sub {
    Command command;
    const char* name;
    const char* help;
    bool needs_input;
  };
  const Sub subs[] = {
      {Command::Ee, "ee", "EE of each income row of a CSV", true},
      {Command::Rank, "rank", "rank prospects (one CSV per prospect)", true},
      {Command::Assign, "assign", "Bayes, maximin and minimax-regret rules on a state-pair CSV", true},
      {Command::Binary, "binary", "status quo vs innovation with binary outcomes", false},
      {Command::Bounds, "bounds", "minimax-regret assignment from an EE bounds CSV", true},
      {Command::MetaSummarize, "meta-summarize", "posterior summaries from a draws CSV", true},
      {Command::MetaSimulate, "meta-simulate", "plug-in rule agreement from a JSON config", true},
  };

  std::vector<std::pair<const Sub*, CLI::App*>> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* input = sub->add_option("--input,-i", cfg.inputs, "input file(s)");
    if (s.needs_input) input->required();
    sub->add_option("--gamma,-g", cfg.gamma, "inequality aversion (default 0)");
    sub->add_option("--output,-o", cfg.output_path, "output CSV (default stdout)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--grid", cfg.grid, "regret-curve grid points");
    sub->add_option("--prior", cfg.prior, "comma-separated prior weights");
    sub->add_option("--p-low", cfg.p_low, "low outcome level");
    sub->add_option("--p-high", cfg.p_high, "high outcome level");
    sub->add_option("--p-a", cfg.p_a, "status quo success share");
    sub->add_option("--p-b", cfg.p_b, "innovation success shares per state (default 0,1)");
    sub->add_option("--representation", cfg.representation, "ee, transformed-mean or raw-mean");
    sub->add_option("--curves", cfg.curves_dir, "directory for regret-curve CSVs");
    sub->add_option("--units", cfg.units, "units label for summaries");
    sub->add_flag("--strict", cfg.strict, "require extreme states to be member states");
    apps.emplace_back(&s, sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [sub, handle] : apps) {
    if (handle->parsed()) {
      cfg.command = sub->command;
      cfg.gamma_set = handle->count("--gamma") > 0;
    }
  }
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    throw UsageError("--gamma must be a finite number >= 0");
  }
  if (cfg.grid && *cfg.grid < 2) throw UsageError("--grid must be at least 2");
  for (const auto& in : cfg.inputs) {
    if (in.empty()) throw UsageError("--input path is empty");
  }
  if (cfg.command == Command::Binary && (!cfg.p_low || !cfg.p_high || !cfg.p_a)) {
    throw UsageError("binary requires --p-low, --p-high and --p-a");
  }
  if (cfg.command != Command::Rank && cfg.inputs.size() > 1) {
    throw UsageError("only rank accepts more than one --input");
  }
  parse_representation(cfg.representation);
  if (cfg.prior) parse_number_list(*cfg.prior, "--prior");
  return cfg;
}

namespace detail {

// Output is buffered and written only after the command succeeded.
inline void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw InputError("<stdout>: write failed");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError(path + ": cannot open for writing");
  file << text;
  file.flush();
  if (!file) throw InputError(path + ": write failed");
}

inline void write_curve_file(const std::string& dir, const std::string& stem,
                             const std::vector<RegretRow>& rows) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / (stem + ".csv");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  write_regret_curve(out, rows);
  if (!out) throw InputError(path.string() + ": write failed");
}

inline std::string file_stem(const std::string& text) {
  std::string out;
  for (char c : text) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

inline void run_ee(const RunConfig& cfg, std::ostream& out) {
  const WelfareSpec spec(cfg.gamma);
  const auto rows = read_income_rows(cfg.input_path());
  out << "row,n,gamma,ee,mean\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << r + 1 << ',' << rows[r].size() << ',' << format_number(spec.gamma()) << ','
        << format_number(ee(spec, rows[r])) << ',' << format_number(ee(WelfareSpec(0.0), rows[r]))
        << '\n';
  }
}

inline void run_rank(const RunConfig& cfg, std::ostream& out) {
  const WelfareSpec spec(cfg.gamma);
  const auto rep = parse_representation(cfg.representation);
  std::vector<Prospect> prospects;
  for (const auto& path : cfg.inputs) prospects.push_back(read_prospect(path));
  const std::size_t m = prospects.front().states();
  const Prior prior = cfg.prior ? Prior(parse_number_list(*cfg.prior, "--prior")) : Prior::uniform(m);
  // A single prospect is trivially ranked first.
  std::vector<RankedProspect> ranked;
  if (prospects.size() == 1) {
    ranked.push_back({0, prospects[0].name(), expected_score(prospects[0], spec, rep, prior)});
  } else {
    ranked = rank_prospects(prospects, spec, rep, prior);
  }
  const std::size_t maximin = maximin_choice(prospects, spec, rep);
  out << "rank,prospect,expected_score,worst_state_score,maximin_choice\n";
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const auto& p = prospects[ranked[k].index];
    out << k + 1 << ',' << format_text(ranked[k].name) << ',' << format_number(ranked[k].score) << ','
        << format_number(worst_state_score(p, spec, rep)) << ','
        << (ranked[k].index == maximin ? 1 : 0) << '\n';
  }
}

inline void run_assign(const RunConfig& cfg, std::ostream& out) {
  const WelfareSpec spec(cfg.gamma);
  const StateSet states = read_states(cfg.input_path());
  const Prior prior =
      cfg.prior ? Prior(parse_number_list(*cfg.prior, "--prior")) : Prior::uniform(states.size());
  const RuleResult results[] = {bayes_rule(spec, states, prior),
                                maximin_rule(spec, states, cfg.strict),
                                minimax_regret_rule(spec, states, cfg.strict)};
  out << "criterion,delta,value,binding,synthetic_extremes\n";
  for (const auto& r : results) {
    std::string binding;
    for (const auto& s : r.binding) binding += (binding.empty() ? "" : ";") + s.label;
    out << to_string(r.criterion) << ',' << format_number(r.delta) << ','
        << format_number(r.value) << ',' << format_text(binding) << ','
        << (r.synthetic_extremes ? 1 : 0) << '\n';
  }
  if (!cfg.curves_dir.empty()) {
    write_curve_file(cfg.curves_dir, "regret_gamma" + file_stem(format_number(spec.gamma())),
                     regret_profile(spec, states, cfg.grid.value_or(101)));
  }
}

inline void run_binary(const RunConfig& cfg, std::ostream& out) {
  const BinaryOutcomeSpec outcome(*cfg.p_low, *cfg.p_high, WelfareSpec(cfg.gamma));
  const BinaryProblem problem(outcome, *cfg.p_a, parse_number_list(cfg.p_b, "--p-b"));
  const std::size_t m = problem.p_b_states().size();
  const Prior prior = cfg.prior ? Prior(parse_number_list(*cfg.prior, "--prior")) : Prior::uniform(m);
  const auto& states = problem.p_b_states();
  const double worst_share = *std::min_element(states.begin(), states.end());
  const double best_share = *std::max_element(states.begin(), states.end());

  out << "evaluator,criterion,delta,value,regret_s_a,regret_s_b\n";
  for (bool ia : {false, true}) {
    std::vector<RuleResult> results{bayes_binary(problem, prior, ia), maximin_binary(problem, ia)};
    if (problem.has_extreme_states()) results.push_back(minimax_regret_binary(problem, ia));
    for (const auto& r : results) {
      out << (ia ? "ia" : "in") << ',' << to_string(r.criterion) << ',' << format_number(r.delta)
          << ',' << format_number(r.value) << ','
          << format_number(problem.regret(worst_share, r.delta, ia)) << ','
          << format_number(problem.regret(best_share, r.delta, ia)) << '\n';
    }
  }
}

inline void run_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto rows = read_bounds(cfg.input_path());
  std::vector<AssignmentRecord> records;
  for (const auto& b : rows) {
    const auto result = assign_from_bounds(b);
    records.push_back({b.scheme, b.gamma, result.delta, result.value});
    if (!cfg.curves_dir.empty()) {
      write_curve_file(cfg.curves_dir,
                       file_stem(b.scheme) + "_gamma" + file_stem(format_number(b.gamma)),
                       regret_profile(WelfareSpec(b.gamma), bounds_to_states(b), cfg.grid.value_or(101)));
    }
  }
  write_assignments(out, records);
}

inline void run_meta_summarize(const RunConfig& cfg, std::ostream& out) {
  const WelfareSpec spec(cfg.gamma);
  std::vector<SummaryRecord> records;
  for (const auto& site : read_draws(cfg.input_path())) {
    SummaryRecord r;
    r.summary = summarize_posterior(spec, site, cfg.units);
    const auto point = posterior_mean(site);
    r.tau_ee_at_mean = tau_pair(spec, point).tau_ee;
    r.plugin_delta = plugin_rule(spec, point).delta;
    records.push_back(std::move(r));
  }
  write_summaries(out, records);
}

inline void run_meta_simulate(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.input_path());
  if (!in) throw InputError(cfg.input_path() + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
    double gamma = cfg.gamma_set ? cfg.gamma : j.value("gamma", cfg.gamma);
    const auto& t = j.at("truth");
    const SiteParams truth{t.at("mu").get<double>(), t.at("zeta").get<double>(),
                           t.at("sigma").get<double>(), t.at("lambda").get<double>()};
    const auto sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    const auto reps = j.at("replications").get<std::size_t>();
    const std::uint64_t seed = cfg.seed ? *cfg.seed : j.at("seed").get<std::uint64_t>();
    write_agreement(out, finite_sample_sim(WelfareSpec(gamma), truth, sizes, reps, seed));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(cfg.input_path() + ": invalid simulation config: " + e.what());
  }
}

}  // namespace detail

/// Reports a failed command on `err`; solver failures exit 3, everything else 2.
inline int report_failure(const std::exception& e, std::ostream& err) {
  if (dynamic_cast<const SolverError*>(&e) != nullptr) {
    err << "eedecide: solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  err << "eedecide: " << e.what() << '\n';
  return kExitValidation;
}

/// Executes one command; errors are reported on `err` and mapped to exit codes.
inline int run(const RunConfig& cfg, std::ostream& err = std::cerr) {
  try {
    std::ostringstream out;
    switch (cfg.command) {
      case Command::Ee: detail::run_ee(cfg, out); break;
      case Command::Rank: detail::run_rank(cfg, out); break;
      case Command::Assign: detail::run_assign(cfg, out); break;
      case Command::Binary: detail::run_binary(cfg, out); break;
      case Command::Bounds: detail::run_bounds(cfg, out); break;
      case Command::MetaSummarize: detail::run_meta_summarize(cfg, out); break;
      case Command::MetaSimulate: detail::run_meta_simulate(cfg, out); break;
    }
    detail::emit(cfg.output_path, out.str());
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure(e, err);
  }
}

/// Entry point shared by the executable and tests.
inline int main(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "eedecide: usage error: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(cfg, err);
}

}  // namespace eedecide::cli
