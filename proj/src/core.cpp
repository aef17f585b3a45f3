#include "checkeval/core.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace checkeval {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_argument: return "invalid argument";
    case errc::not_found: return "not found";
    case errc::conflict: return "conflict";
    case errc::parse: return "parse error";
    case errc::config: return "configuration error";
    case errc::backend: return "backend error";
    case errc::replay_miss: return "replay miss";
    case errc::empty_checklist: return "empty checklist";
    case errc::unparseable_verdicts: return "unparseable verdicts";
    case errc::undefined_correlation: return "undefined correlation";
    case errc::io: return "io error";
  }
  return "error";
}

std::string Criterion::title() const {
  std::string out = name;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

namespace {
std::string lowercase(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

bool same_criterion(const Criterion& a, const Criterion& b) {
  return lowercase(a.name) == lowercase(b.name);
}

const char* to_string(EvaluationMode mode) {
  switch (mode) {
    case EvaluationMode::reference_guided: return "reference-guided";
    case EvaluationMode::candidate_guided: return "candidate-guided";
    case EvaluationMode::criterion_guided: return "criterion-guided";
  }
  return "unknown";
}

EvaluationMode evaluation_mode_from_string(const std::string& text) {
  const std::string t = lowercase(text);
  if (t == "reference-guided" || t == "reference_guided") return EvaluationMode::reference_guided;
  if (t == "candidate-guided" || t == "candidate_guided") return EvaluationMode::candidate_guided;
  if (t == "criterion-guided" || t == "criterion_guided") return EvaluationMode::criterion_guided;
  fail(errc::invalid_argument, "unknown evaluation mode '" + text +
                                   "' (expected reference-guided, candidate-guided or criterion-guided)");
}

std::string ChecklistProvenance::to_string() const {
  if (kind == Kind::from_text) return "text:" + text_id;
  return "criterion-only";
}

Checklist::Checklist(Criterion criterion, std::vector<ChecklistItem> items,
                     ChecklistProvenance provenance)
    : criterion_(std::move(criterion)), items_(std::move(items)), provenance_(std::move(provenance)) {
  if (criterion_.name.empty()) fail(errc::invalid_argument, "checklist criterion has no name");
  if (items_.empty()) fail(errc::invalid_argument, "checklist has no items");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const ChecklistItem& item = items_[i];
    if (item.index != static_cast<int>(i) + 1) {
      fail(errc::invalid_argument, "checklist item indices must be consecutive from 1, got " +
                                       std::to_string(item.index) + " at position " +
                                       std::to_string(i + 1));
    }
    if (item.question.empty()) {
      fail(errc::invalid_argument, "checklist item " + std::to_string(item.index) + " is empty");
    }
    if (!seen.insert(item.question).second) {
      fail(errc::invalid_argument,
           "checklist item " + std::to_string(item.index) + " duplicates an earlier question");
    }
  }
}

std::string Checklist::render_numbered() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i > 0) out << '\n';
    out << items_[i].index << ". " << items_[i].question;
  }
  return out.str();
}

std::string Checklist::content_id() const {
  std::uint64_t h = detail::fnv1a64(criterion_.name);
  h = detail::fnv1a64(provenance_.to_string(), h);
  for (const ChecklistItem& item : items_) h = detail::fnv1a64(item.question, h);
  return criterion_.name + "/" + std::to_string(items_.size()) + "/" + detail::hex64(h);
}

Assessment::Assessment(const Checklist& checklist, std::vector<Verdict> verdicts)
    : checklist_ref_(checklist.content_id()), verdicts_(std::move(verdicts)) {
  if (verdicts_.size() != checklist.size()) {
    fail(errc::invalid_argument, "expected " + std::to_string(checklist.size()) + " verdicts, got " +
                                     std::to_string(verdicts_.size()));
  }
  std::vector<bool> covered(checklist.size(), false);
  for (const Verdict& v : verdicts_) {
    if (v.item_index < 1 || v.item_index > static_cast<int>(checklist.size())) {
      fail(errc::invalid_argument,
           "verdict index " + std::to_string(v.item_index) + " is outside the checklist");
    }
    if (covered[static_cast<std::size_t>(v.item_index - 1)]) {
      fail(errc::invalid_argument,
           "checklist item " + std::to_string(v.item_index) + " received more than one verdict");
    }
    covered[static_cast<std::size_t>(v.item_index - 1)] = true;
    if (v.present) ++raw_score_;
  }
  normalized_ = normalized_score(raw_score_, static_cast<int>(checklist.size()));
}

void validate_record(const EvalRecord& record) {
  if (record.record_id.empty()) fail(errc::invalid_argument, "record has no id");
  if (record.candidate_text.empty()) {
    fail(errc::invalid_argument, "record '" + record.record_id + "' has an empty candidate text");
  }
  if (record.reference_text && record.reference_text->empty()) {
    fail(errc::invalid_argument, "record '" + record.record_id + "' has an empty reference text");
  }
  for (const auto& [name, value] : record.human_scores) {
    if (!std::isfinite(value)) {
      fail(errc::invalid_argument,
           "record '" + record.record_id + "' has a non-finite human score for " + name);
    }
  }
}

double normalized_score(int raw, int total) {
  if (total < 1) fail(errc::invalid_argument, "checklist item count must be >= 1");
  if (raw < 0) fail(errc::invalid_argument, "raw score must be >= 0");
  if (raw > total) {
    fail(errc::invalid_argument, "raw score " + std::to_string(raw) + " exceeds item count " +
                                     std::to_string(total));
  }
  return static_cast<double>(raw) / static_cast<double>(total);
}

double f1(double recall, double precision) {
  if (!std::isfinite(recall) || recall < 0.0 || recall > 1.0) {
    fail(errc::invalid_argument, "recall must lie in [0,1]");
  }
  if (!std::isfinite(precision) || precision < 0.0 || precision > 1.0) {
    fail(errc::invalid_argument, "precision must lie in [0,1]");
  }
  const double sum = recall + precision;
  if (sum == 0.0) return 0.0;
  return 2.0 * recall * precision / sum;
}

namespace detail {

std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace detail

}  // namespace checkeval
