#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "checkeval/errors.hpp"

namespace checkeval {

/// Aligned system/human score vectors for one criterion.
struct PairedSeries {
  std::vector<double> system_scores;
  std::vector<double> human_scores;
  std::vector<std::string> labels;  // optional record ids; empty or same length
};

void validate_series(const PairedSeries& series);

/// 1-based fractional ranks; ties receive the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Sample Pearson r. Throws undefined_correlation when either series is constant.
double pearson(const PairedSeries& series);

/// Pearson of fractional ranks.
double spearman(const PairedSeries& series);

/// Kendall tau-b with tie correction in both variables, computed via
/// merge-sort inversion counting. Throws undefined_correlation when all
/// pairs are tied in one series.
double kendall_tau_b(const PairedSeries& series);

/// Arithmetic mean per criterion across annotators. All annotators must
/// cover the same criteria.
std::map<std::string, double> average_human_scores(
    const std::vector<std::map<std::string, double>>& annotations);

struct CoefficientSet {
  bool pearson = true;
  bool spearman = true;
  bool kendall = true;

  static CoefficientSet parse(const std::string& csv);  // "pearson,spearman,kendall"
};

struct CorrelationCell {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
  int n = 0;
};

struct CorrelationReport {
  std::vector<std::string> criteria;  // column order
  std::map<std::string, CorrelationCell> per_criterion;
  CorrelationCell averages;  // mean over criteria where the coefficient is defined
  CoefficientSet coefficients;
  std::string aggregation;  // "pooled" or "per-document"
};

/// One system score attributed to (record, criterion).
struct ScoredRun {
  std::string record_id;
  std::string criterion;
  double score = 0.0;
  std::string group_id;  // needed for per-document aggregation
};

/// record_id -> criterion -> human value
using HumanScores = std::map<std::string, std::map<std::string, double>>;

enum class Aggregation { pooled, per_document };

const char* to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& text);

/// Assemble per-criterion paired series by record-id alignment and compute
/// the requested coefficients. `human_key_override` correlates every
/// criterion against one human annotation key (e.g. "similarity").
CorrelationReport build_report(const std::vector<ScoredRun>& runs, const HumanScores& humans,
                               const std::vector<std::string>& criteria,
                               const CoefficientSet& coefficients,
                               Aggregation aggregation = Aggregation::pooled,
                               const std::string& human_key_override = "");

/// Plain-text table: one row per method, criteria as column groups, AVG last.
std::string render_report_table(
    const std::vector<std::pair<std::string, CorrelationReport>>& rows);

/// Machine-readable export: method,criterion,coefficient,n,value per line.
std::string render_report_csv(
    const std::vector<std::pair<std::string, CorrelationReport>>& rows);

}  // namespace checkeval
