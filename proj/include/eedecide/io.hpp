#pragma once

// CSV ingestion and emission. Dialect: comma separated, header row required,
// '.' decimal separator, no locale dependence. Numbers are written with 17
// significant digits so every value round-trips exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eedecide/bounds.hpp"
#include "eedecide/errors.hpp"
#include "eedecide/meta.hpp"
#include "eedecide/prospects.hpp"
#include "eedecide/rules.hpp"

namespace eedecide {

// Unreadable, empty or malformed input; the message names the file and line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct CsvTable {
  std::string source;
  std::size_t header_line = 0;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw InputError(msg.str());
  }

  void expect_header(const std::vector<std::string>& columns) const {
    if (header != columns) {
      std::string want;
      for (const auto& c : columns) want += (want.empty() ? "" : ",") + c;
      fail(header_line, "expected header '" + want + "'");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one record; double quotes group fields containing commas.
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

}  // namespace detail

inline CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  table.source = source;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_record(line);
    if (!have_header) {
      table.header = std::move(fields);
      table.header_line = lineno;
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << "expected " << table.header.size() << " fields, found " << fields.size();
      table.fail(lineno, msg.str());
    }
    table.rows.push_back({lineno, std::move(fields)});
  }
  if (!have_header) throw InputError(source + ": empty input, a header row is required");
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open for reading");
  return parse_csv(in, path.string());
}

inline CsvTable read_csv_with_rows(const std::filesystem::path& path) {
  auto table = read_csv(path);
  if (table.rows.empty()) throw InputError(path.string() + ": no data rows");
  return table;
}

inline double parse_number(const CsvTable& table, const CsvRow& row, std::size_t column) {
  const std::string& text = row.fields.at(column);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
    table.fail(row.line, "column '" + table.header.at(column) + "': '" + text +
                             "' is not a finite number");
  }
  return value;
}

inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

// Quotes a text field when it would otherwise break the record.
inline std::string format_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// ---------------------------------------------------------------------------
// Inputs

/// Income CSV: a header row, then one income distribution per row.
inline std::vector<std::vector<double>> read_income_rows(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  std::vector<std::vector<double>> out;
  for (const auto& row : table.rows) {
    std::vector<double> incomes;
    for (std::size_t c = 0; c < row.fields.size(); ++c) incomes.push_back(parse_number(table, row, c));
    out.push_back(std::move(incomes));
  }
  return out;
}

/// Prospect CSV: header of state labels, one row per individual.
inline Prospect read_prospect(const std::filesystem::path& path, std::string name = {}) {
  const auto table = read_csv_with_rows(path);
  if (name.empty()) name = path.stem().string();
  std::vector<std::vector<double>> rows;
  for (const auto& row : table.rows) {
    std::vector<double> incomes;
    for (std::size_t c = 0; c < row.fields.size(); ++c) {
      const double y = parse_number(table, row, c);
      if (!(y > 0.0)) table.fail(row.line, "incomes must be positive");
      incomes.push_back(y);
    }
    rows.push_back(std::move(incomes));
  }
  return Prospect(std::move(name), std::move(rows), table.header);
}

inline const std::vector<std::string>& bounds_columns() {
  static const std::vector<std::string> cols{"scheme", "gamma", "ee_a_low", "ee_a_high", "ee_b_low", "ee_b_high"};
  return cols;
}

inline std::vector<EeBounds> read_bounds(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header(bounds_columns());
  std::vector<EeBounds> out;
  for (const auto& row : table.rows) {
    EeBounds b{row.fields[0],
               parse_number(table, row, 1),
               parse_number(table, row, 2),
               parse_number(table, row, 3),
               parse_number(table, row, 4),
               parse_number(table, row, 5)};
    try {
      b.validate();
    } catch (const ArgumentError& e) {
      table.fail(row.line, e.what());
    }
    out.push_back(std::move(b));
  }
  return out;
}

/// State-pair CSV: label,ee_a,ee_b.
inline StateSet read_states(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header({"label", "ee_a", "ee_b"});
  std::vector<StatePair> states;
  for (const auto& row : table.rows) {
    StatePair s{row.fields[0], parse_number(table, row, 1), parse_number(table, row, 2)};
    if (!(s.ee_a > 0.0 && s.ee_b > 0.0)) table.fail(row.line, "EE values must be positive");
    states.push_back(std::move(s));
  }
  return StateSet(std::move(states));
}

/// Draws CSV: site,mu,zeta,sigma,lambda. Sites are returned in order of first appearance.
inline std::vector<PosteriorDraws> read_draws(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header({"site", "mu", "zeta", "sigma", "lambda"});
  std::vector<PosteriorDraws> sites;
  for (const auto& row : table.rows) {
    SiteParams p{parse_number(table, row, 1), parse_number(table, row, 2),
                 parse_number(table, row, 3), parse_number(table, row, 4)};
    try {
      p.validate();
    } catch (const ArgumentError& e) {
      table.fail(row.line, e.what());
    }
    const std::string& site = row.fields[0];
    auto it = std::find_if(sites.begin(), sites.end(),
                           [&](const PosteriorDraws& d) { return d.site == site; });
    if (it == sites.end()) {
      sites.push_back({site, {}});
      it = sites.end() - 1;
    }
    it->draws.push_back(p);
  }
  return sites;
}

// ---------------------------------------------------------------------------
// Outputs and their readers

inline void write_regret_curve(std::ostream& out, const std::vector<RegretRow>& rows) {
  out << "delta,regret_a,regret_b,worst\n";
  for (const auto& r : rows) {
    out << format_number(r.delta) << ',' << format_number(r.regret_a) << ','
        << format_number(r.regret_b) << ',' << format_number(r.worst) << '\n';
  }
}

inline std::vector<RegretRow> read_regret_curve(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header({"delta", "regret_a", "regret_b", "worst"});
  std::vector<RegretRow> out;
  for (const auto& row : table.rows) {
    out.push_back({parse_number(table, row, 0), parse_number(table, row, 1),
                   parse_number(table, row, 2), parse_number(table, row, 3)});
  }
  return out;
}

struct AssignmentRecord {
  std::string scheme;
  double gamma = 0.0;
  double delta = 0.0;
  double worst_regret = 0.0;
};

inline void write_assignments(std::ostream& out, const std::vector<AssignmentRecord>& rows) {
  out << "scheme,gamma,delta,worst_regret\n";
  for (const auto& r : rows) {
    out << format_text(r.scheme) << ',' << format_number(r.gamma) << ','
        << format_number(r.delta) << ',' << format_number(r.worst_regret) << '\n';
  }
}

inline std::vector<AssignmentRecord> read_assignments(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header({"scheme", "gamma", "delta", "worst_regret"});
  std::vector<AssignmentRecord> out;
  for (const auto& row : table.rows) {
    out.push_back({row.fields[0], parse_number(table, row, 1), parse_number(table, row, 2),
                   parse_number(table, row, 3)});
  }
  return out;
}

struct SummaryRecord {
  MetaSummary summary;
  double tau_ee_at_mean = 0.0;  // EETE at the posterior-mean parameters
  double plugin_delta = 0.0;
};

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "site",        "draws",       "mean_tau",       "prob_tau_pos", "mean_tau_ee",
      "prob_tau_ee_pos", "bayes_delta", "tau_ee_at_mean", "plugin_delta", "units"};
  return cols;
}

inline void write_summaries(std::ostream& out, const std::vector<SummaryRecord>& rows) {
  const auto& cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << format_text(s.site) << ',' << s.draws << ',' << format_number(s.mean_tau) << ','
        << format_number(s.prob_tau_pos) << ',' << format_number(s.mean_tau_ee) << ','
        << format_number(s.prob_tau_ee_pos) << ',' << format_number(s.bayes_delta()) << ','
        << format_number(r.tau_ee_at_mean) << ',' << format_number(r.plugin_delta) << ','
        << format_text(s.units) << '\n';
  }
}

inline std::vector<SummaryRecord> read_summaries(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header(summary_columns());
  std::vector<SummaryRecord> out;
  for (const auto& row : table.rows) {
    SummaryRecord r;
    r.summary.site = row.fields[0];
    r.summary.draws = static_cast<std::size_t>(parse_number(table, row, 1));
    r.summary.mean_tau = parse_number(table, row, 2);
    r.summary.prob_tau_pos = parse_number(table, row, 3);
    r.summary.mean_tau_ee = parse_number(table, row, 4);
    r.summary.prob_tau_ee_pos = parse_number(table, row, 5);
    r.tau_ee_at_mean = parse_number(table, row, 7);
    r.plugin_delta = parse_number(table, row, 8);
    r.summary.units = row.fields[9];
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_agreement(std::ostream& out, const std::vector<AgreementRow>& rows) {
  out << "sample_size,replications,skipped,agreements,agreement\n";
  for (const auto& r : rows) {
    out << r.sample_size << ',' << r.replications << ',' << r.skipped << ',' << r.agreements
        << ',' << format_number(r.agreement()) << '\n';
  }
}

inline std::vector<AgreementRow> read_agreement(const std::filesystem::path& path) {
  const auto table = read_csv_with_rows(path);
  table.expect_header({"sample_size", "replications", "skipped", "agreements", "agreement"});
  std::vector<AgreementRow> out;
  for (const auto& row : table.rows) {
    auto count = [&](std::size_t c) {
      const double v = parse_number(table, row, c);
      if (v < 0.0 || v != std::floor(v)) table.fail(row.line, "expected a nonnegative integer");
      return static_cast<std::size_t>(v);
    };
    out.push_back({count(0), count(1), count(2), count(3)});
  }
  return out;
}

}  // namespace eedecide
