#include "checkeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace checkeval {

void validate_series(const PairedSeries& series) {
  if (series.system_scores.size() != series.human_scores.size()) {
    fail(errc::invalid_argument, "paired series lengths differ (" +
                                     std::to_string(series.system_scores.size()) + " vs " +
                                     std::to_string(series.human_scores.size()) + ")");
  }
  if (series.system_scores.size() < 2) {
    fail(errc::invalid_argument, "paired series needs at least 2 observations");
  }
  if (!series.labels.empty() && series.labels.size() != series.system_scores.size()) {
    fail(errc::invalid_argument, "label count does not match series length");
  }
  for (double v : series.system_scores) {
    if (!std::isfinite(v)) fail(errc::invalid_argument, "non-finite system score");
  }
  for (double v : series.human_scores) {
    if (!std::isfinite(v)) fail(errc::invalid_argument, "non-finite human score");
  }
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1; assign their mean
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

double pearson_raw(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fail(errc::undefined_correlation, "constant series has no defined correlation");
  }
  return clamp_unit(sxy / std::sqrt(sxx * syy));
}

// Strict inversions (i < j with v[i] > v[j]) via merge sort.
std::uint64_t count_inversions(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo, b = mid, out = lo;
      while (a < mid && b < hi) {
        if (v[b] < v[a]) {
          inversions += mid - a;
          buf[out++] = v[b++];
        } else {
          buf[out++] = v[a++];
        }
      }
      while (a < mid) buf[out++] = v[a++];
      while (b < hi) buf[out++] = v[b++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

std::uint64_t tie_pair_count(std::vector<double> sorted_values) {
  std::uint64_t pairs = 0;
  std::size_t i = 0;
  const std::size_t n = sorted_values.size();
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && sorted_values[j + 1] == sorted_values[i]) ++j;
    const std::uint64_t t = j - i + 1;
    pairs += t * (t - 1) / 2;
    i = j + 1;
  }
  return pairs;
}

}  // namespace

double pearson(const PairedSeries& series) {
  validate_series(series);
  return pearson_raw(series.system_scores, series.human_scores);
}

double spearman(const PairedSeries& series) {
  validate_series(series);
  return pearson_raw(average_ranks(series.system_scores), average_ranks(series.human_scores));
}

double kendall_tau_b(const PairedSeries& series) {
  validate_series(series);
  const std::vector<double>& x = series.system_scores;
  const std::vector<double>& y = series.human_scores;
  const std::size_t n = x.size();
  const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // tie counts over x and over joint (x,y), walked in x-sorted order
  std::uint64_t x_ties = 0, joint_ties = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
      const std::uint64_t t = j - i + 1;
      x_ties += t * (t - 1) / 2;
      std::size_t k = i;
      while (k <= j) {
        std::size_t m = k;
        while (m + 1 <= j && y[order[m + 1]] == y[order[k]]) ++m;
        const std::uint64_t u = m - k + 1;
        joint_ties += u * (u - 1) / 2;
        k = m + 1;
      }
      i = j + 1;
    }
  }

  std::vector<double> y_by_x(n);
  for (std::size_t i = 0; i < n; ++i) y_by_x[i] = y[order[i]];
  std::vector<double> y_sorted = y_by_x;
  const std::uint64_t discordant = count_inversions(y_by_x);
  std::sort(y_sorted.begin(), y_sorted.end());
  const std::uint64_t y_ties = tie_pair_count(std::move(y_sorted));

  if (x_ties == total_pairs || y_ties == total_pairs) {
    fail(errc::undefined_correlation, "all pairs tied in one series, tau-b undefined");
  }

  const double con_minus_dis = static_cast<double>(total_pairs) - static_cast<double>(x_ties) -
                               static_cast<double>(y_ties) + static_cast<double>(joint_ties) -
                               2.0 * static_cast<double>(discordant);
  const double denom = std::sqrt(static_cast<double>(total_pairs - x_ties)) *
                       std::sqrt(static_cast<double>(total_pairs - y_ties));
  return clamp_unit(con_minus_dis / denom);
}

std::map<std::string, double> average_human_scores(
    const std::vector<std::map<std::string, double>>& annotations) {
  if (annotations.empty()) fail(errc::invalid_argument, "no annotators given");
  const std::map<std::string, double>& first = annotations.front();
  for (std::size_t i = 1; i < annotations.size(); ++i) {
    for (const auto& [name, _] : first) {
      if (!annotations[i].count(name)) {
        fail(errc::invalid_argument, "annotator " + std::to_string(i + 1) +
                                         " is missing a score for '" + name + "'");
      }
    }
    for (const auto& [name, _] : annotations[i]) {
      if (!first.count(name)) {
        fail(errc::invalid_argument,
             "annotator " + std::to_string(i + 1) + " scored extra criterion '" + name + "'");
      }
    }
  }
  std::map<std::string, double> means;
  for (const auto& [name, _] : first) {
    double sum = 0.0;
    for (const auto& annot : annotations) sum += annot.at(name);
    means[name] = sum / static_cast<double>(annotations.size());
  }
  return means;
}

CoefficientSet CoefficientSet::parse(const std::string& csv) {
  CoefficientSet set{false, false, false};
  std::stringstream in(csv);
  std::string token;
  bool any = false;
  while (std::getline(in, token, ',')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    if (token.empty()) continue;
    any = true;
    if (token == "pearson") set.pearson = true;
    else if (token == "spearman") set.spearman = true;
    else if (token == "kendall" || token == "kendall-tau" || token == "kendall_tau_b") set.kendall = true;
    else fail(errc::invalid_argument, "unknown coefficient '" + token + "'");
  }
  if (!any) fail(errc::invalid_argument, "no coefficients requested");
  return set;
}

const char* to_string(Aggregation a) {
  return a == Aggregation::pooled ? "pooled" : "per-document";
}

Aggregation aggregation_from_string(const std::string& text) {
  if (text == "pooled") return Aggregation::pooled;
  if (text == "per-document" || text == "per_document") return Aggregation::per_document;
  fail(errc::invalid_argument, "unknown aggregation '" + text + "' (expected pooled or per-document)");
}

namespace {

using CoefficientFn = double (*)(const PairedSeries&);

std::optional<double> compute_or_undefined(CoefficientFn fn, const PairedSeries& series) {
  if (series.system_scores.size() < 2) return std::nullopt;
  try {
    return fn(series);
  } catch (const Error& e) {
    if (e.code() == errc::undefined_correlation) return std::nullopt;
    throw;
  }
}

std::optional<double> per_document_coefficient(CoefficientFn fn,
                                               const std::map<std::string, PairedSeries>& groups) {
  double sum = 0.0;
  int defined = 0;
  for (const auto& [_, series] : groups) {
    if (auto v = compute_or_undefined(fn, series)) {
      sum += *v;
      ++defined;
    }
  }
  if (defined == 0) return std::nullopt;
  return sum / defined;
}

}  // namespace

CorrelationReport build_report(const std::vector<ScoredRun>& runs, const HumanScores& humans,
                               const std::vector<std::string>& criteria,
                               const CoefficientSet& coefficients, Aggregation aggregation,
                               const std::string& human_key_override) {
  CorrelationReport report;
  report.criteria = criteria;
  report.coefficients = coefficients;
  report.aggregation = to_string(aggregation);

  // Alignment check up front so the error names every gap at once.
  std::vector<std::string> missing;
  for (const ScoredRun& run : runs) {
    const std::string key = human_key_override.empty() ? run.criterion : human_key_override;
    auto rec = humans.find(run.record_id);
    if (rec == humans.end() || !rec->second.count(key)) {
      missing.push_back(run.record_id + "/" + key);
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::string joined;
    for (const auto& m : missing) {
      if (!joined.empty()) joined += ", ";
      joined += m;
    }
    fail(errc::invalid_argument, "missing human scores for: " + joined);
  }

  for (const std::string& criterion : criteria) {
    PairedSeries pooled;
    std::map<std::string, PairedSeries> by_group;
    const std::string key = human_key_override.empty() ? criterion : human_key_override;
    for (const ScoredRun& run : runs) {
      if (run.criterion != criterion) continue;
      const double human = humans.at(run.record_id).at(key);
      pooled.system_scores.push_back(run.score);
      pooled.human_scores.push_back(human);
      pooled.labels.push_back(run.record_id);
      if (aggregation == Aggregation::per_document) {
        if (run.group_id.empty()) {
          fail(errc::invalid_argument, "per-document aggregation needs a group id on record '" +
                                           run.record_id + "'");
        }
        PairedSeries& g = by_group[run.group_id];
        g.system_scores.push_back(run.score);
        g.human_scores.push_back(human);
      }
    }

    CorrelationCell cell;
    cell.n = static_cast<int>(pooled.system_scores.size());
    if (aggregation == Aggregation::pooled) {
      if (coefficients.pearson) cell.pearson = compute_or_undefined(&pearson, pooled);
      if (coefficients.spearman) cell.spearman = compute_or_undefined(&spearman, pooled);
      if (coefficients.kendall) cell.kendall = compute_or_undefined(&kendall_tau_b, pooled);
    } else {
      if (coefficients.pearson) cell.pearson = per_document_coefficient(&pearson, by_group);
      if (coefficients.spearman) cell.spearman = per_document_coefficient(&spearman, by_group);
      if (coefficients.kendall) cell.kendall = per_document_coefficient(&kendall_tau_b, by_group);
    }
    report.per_criterion[criterion] = cell;
  }

  auto average_of = [&](std::optional<double> CorrelationCell::*member) -> std::optional<double> {
    double sum = 0.0;
    int defined = 0;
    for (const std::string& criterion : criteria) {
      const CorrelationCell& cell = report.per_criterion.at(criterion);
      if (cell.*member) {
        sum += *(cell.*member);
        ++defined;
      }
    }
    if (defined == 0) return std::nullopt;
    return sum / defined;
  };
  if (coefficients.pearson) report.averages.pearson = average_of(&CorrelationCell::pearson);
  if (coefficients.spearman) report.averages.spearman = average_of(&CorrelationCell::spearman);
  if (coefficients.kendall) report.averages.kendall = average_of(&CorrelationCell::kendall);
  for (const std::string& criterion : criteria) {
    report.averages.n = std::max(report.averages.n, report.per_criterion.at(criterion).n);
  }
  return report;
}

namespace {

std::string format_cell(const std::optional<double>& value) {
  if (!value) return "--";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *value);
  return buf;
}

std::string format_csv_value(const std::optional<double>& value) {
  if (!value) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", *value);
  return buf;
}

std::vector<std::pair<std::string, std::optional<double> CorrelationCell::*>> active_coefficients(
    const CoefficientSet& set) {
  std::vector<std::pair<std::string, std::optional<double> CorrelationCell::*>> out;
  if (set.pearson) out.emplace_back("pearson", &CorrelationCell::pearson);
  if (set.spearman) out.emplace_back("spearman", &CorrelationCell::spearman);
  if (set.kendall) out.emplace_back("kendall", &CorrelationCell::kendall);
  return out;
}

}  // namespace

std::string render_report_table(
    const std::vector<std::pair<std::string, CorrelationReport>>& rows) {
  if (rows.empty()) return "";
  const CorrelationReport& first = rows.front().second;
  const auto coeffs = active_coefficients(first.coefficients);

  std::vector<std::string> columns = first.criteria;
  columns.push_back("AVG");

  std::size_t method_width = std::string("Method").size();
  for (const auto& [label, _] : rows) method_width = std::max(method_width, label.size());

  const std::size_t cell_w = 9;
  std::ostringstream out;
  out << "Aggregation: " << first.aggregation << "\n";

  auto pad = [&](const std::string& s, std::size_t w) {
    std::string p = s;
    if (p.size() < w) p.append(w - p.size(), ' ');
    return p;
  };

  out << pad("Method", method_width);
  for (const auto& column : columns) {
    out << "  " << pad(column, coeffs.size() * cell_w + 2 * (coeffs.size() - 1));
  }
  out << "\n";
  out << pad("", method_width);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& [name, _] : coeffs) out << "  " << pad(name, cell_w);
  }
  out << "\n";

  for (const auto& [label, report] : rows) {
    out << pad(label, method_width);
    for (const auto& column : columns) {
      const CorrelationCell& cell =
          column == "AVG" ? report.averages : report.per_criterion.at(column);
      for (const auto& [_, member] : coeffs) out << "  " << pad(format_cell(cell.*member), cell_w);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_report_csv(
    const std::vector<std::pair<std::string, CorrelationReport>>& rows) {
  std::ostringstream out;
  out << "method,criterion,coefficient,n,value\n";
  for (const auto& [label, report] : rows) {
    const auto coeffs = active_coefficients(report.coefficients);
    std::vector<std::string> columns = report.criteria;
    columns.push_back("AVG");
    for (const auto& column : columns) {
      const CorrelationCell& cell =
          column == "AVG" ? report.averages : report.per_criterion.at(column);
      for (const auto& [name, member] : coeffs) {
        out << label << ',' << column << ',' << name << ',' << cell.n << ','
            << format_csv_value(cell.*member) << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace checkeval
