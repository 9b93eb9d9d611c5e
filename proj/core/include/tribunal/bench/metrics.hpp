#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "tribunal/bench/manifest.hpp"
#include "tribunal/model.hpp"

namespace tribunal::bench {

// AI-generated is the positive class. Ratios with a zero denominator are 0.
struct EvalMetrics {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static EvalMetrics from_counts(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn);
  [[nodiscard]] std::int64_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const EvalMetrics&) const = default;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

struct Evaluation {
  EvalMetrics overall;
  std::map<Setting, EvalMetrics> per_setting;
};

/// Scores reports against manifest labels. A report without a verdict counts
/// as a wrong prediction. Throws Error{MissingReport} if an entry has no
/// report and Error{ConfigError} if an entry has no label.
Evaluation evaluate(std::span<const CaseReport> reports, const Manifest& manifest);

enum class Direction { AiLeaning, RealLeaning, Neutral };
std::string_view to_string(Direction d);

/// Fixed rules: ensemble score > 0.5 leans AI; the VLM's own call; an AI
/// platform provenance leans AI and a photo or news site leans real; the
/// majority of metadata signals; the top memory hit's ground truth. Anything
/// else, including non-valid items, is neutral.
Direction direction_of(const EvidenceItem& item);

struct ToolStat {
  std::int64_t decisions_total = 0;  // cases with a verdict
  std::int64_t valid_count = 0;
  std::int64_t directional_count = 0;  // valid and not neutral
  std::int64_t consistent_count = 0;
  std::optional<double> reliability;  // consistent / directional, null when 0
  double coverage = 0.0;              // valid / decisions_total
};

using ToolStats = std::map<ToolId, ToolStat>;

/// Stats for every tool appearing in any report. Reports without a verdict
/// are skipped.
ToolStats tool_reliability(std::span<const CaseReport> reports);

nlohmann::json to_json(const EvalMetrics& m);
nlohmann::json to_json(const Evaluation& e);
nlohmann::json to_json(const ToolStats& s);

/// One header line plus one row per split: split,tp,tn,fp,fn,accuracy,precision,recall,f1
std::string confusion_csv(const Evaluation& e);

}  // namespace tribunal::bench
