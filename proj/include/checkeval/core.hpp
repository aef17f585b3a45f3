#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "checkeval/errors.hpp"

namespace checkeval {

/// A named quality dimension with the definition text inserted into prompts.
/// `name` is the registry key ("consistency"); `label` is the adjectival form
/// used in the generation task line ("consistent").
struct Criterion {
  std::string name;
  std::string definition;
  std::string label;

  /// "consistency" -> "Consistency", used for the "X definition:" header.
  std::string title() const;
};

bool same_criterion(const Criterion& a, const Criterion& b);

enum class EvaluationMode { reference_guided, candidate_guided, criterion_guided };

const char* to_string(EvaluationMode mode);
EvaluationMode evaluation_mode_from_string(const std::string& text);

struct ChecklistItem {
  int index = 0;  // 1-based, consecutive within a checklist
  std::string question;
};

struct ChecklistProvenance {
  enum class Kind { from_text, from_criterion_only };

  Kind kind = Kind::from_criterion_only;
  std::string text_id;  // set iff kind == from_text

  static ChecklistProvenance from_text(std::string id) {
    return ChecklistProvenance{Kind::from_text, std::move(id)};
  }
  static ChecklistProvenance from_criterion_only() {
    return ChecklistProvenance{Kind::from_criterion_only, {}};
  }

  bool operator==(const ChecklistProvenance&) const = default;
  std::string to_string() const;
};

/// Ordered yes/no questions tied to one criterion and one provenance.
/// Validated at construction: non-empty, consecutive 1-based indices,
/// non-empty questions, no two byte-identical questions.
class Checklist {
public:
  Checklist(Criterion criterion, std::vector<ChecklistItem> items, ChecklistProvenance provenance);

  const Criterion& criterion() const { return criterion_; }
  const std::vector<ChecklistItem>& items() const { return items_; }
  const ChecklistProvenance& provenance() const { return provenance_; }
  std::size_t size() const { return items_.size(); }

  /// "1. q1\n2. q2\n..." — the form embedded in evaluation prompts.
  std::string render_numbered() const;

  /// Stable content identity: criterion, provenance and question texts.
  std::string content_id() const;

private:
  Criterion criterion_;
  std::vector<ChecklistItem> items_;
  ChecklistProvenance provenance_;
};

struct Verdict {
  int item_index = 0;
  bool present = false;
  std::string rationale;  // empty when the judge gave none
};

/// Per-item verdicts for one candidate against one checklist, plus the
/// derived scores. Verdict indices must cover the checklist exactly once.
class Assessment {
public:
  Assessment(const Checklist& checklist, std::vector<Verdict> verdicts);

  const std::string& checklist_ref() const { return checklist_ref_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  int raw_score() const { return raw_score_; }
  double normalized() const { return normalized_; }

private:
  std::string checklist_ref_;
  std::vector<Verdict> verdicts_;
  int raw_score_ = 0;
  double normalized_ = 0.0;
};

/// One unit of evaluation: texts plus optional human scores per criterion.
struct EvalRecord {
  std::string record_id;
  std::optional<std::string> reference_text;
  std::string candidate_text;
  std::map<std::string, double> human_scores;
  std::string group_id;  // source-document id, for per-document aggregation
};

void validate_record(const EvalRecord& record);

/// raw / total, with raw <= total and total >= 1.
double normalized_score(int raw, int total);

/// Harmonic mean of recall and precision, 0 when both are 0.
double f1(double recall, double precision);

namespace detail {
std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t value);
}  // namespace detail

}  // namespace checkeval
