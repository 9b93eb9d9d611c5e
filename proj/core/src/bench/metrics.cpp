#include "tribunal/bench/metrics.hpp"

#include <fmt/format.h>

#include <map>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"

namespace tribunal::bench {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

struct Tally {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;

  void add(Label truth, std::optional<Label> predicted) {
    // A missing prediction is wrong whichever the truth is.
    const bool correct = predicted && *predicted == truth;
    if (truth == Label::Ai) {
      correct ? ++tp : ++fn;
    } else {
      correct ? ++tn : ++fp;
    }
  }
  [[nodiscard]] EvalMetrics metrics() const { return EvalMetrics::from_counts(tp, tn, fp, fn); }
};

Direction direction_of_metadata(const MetadataFinding& f) {
  int real = 0;
  int ai = 0;
  for (const auto& s : f.signals) {
    real += s.signal == SignalClass::RealSignal;
    ai += s.signal == SignalClass::AiSignal;
  }
  if (ai > real) return Direction::AiLeaning;
  if (real > ai) return Direction::RealLeaning;
  return Direction::Neutral;
}

}  // namespace

EvalMetrics EvalMetrics::from_counts(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn) {
  EvalMetrics m{tp, tn, fp, fn};
  m.accuracy = ratio(static_cast<double>(tp + tn), static_cast<double>(tp + tn + fp + fn));
  m.precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  m.recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

double f1_score(double precision, double recall) { return ratio(2.0 * precision * recall, precision + recall); }

Evaluation evaluate(std::span<const CaseReport> reports, const Manifest& manifest) {
  std::map<std::string, const CaseReport*, std::less<>> by_id;
  for (const auto& r : reports) by_id[r.case_id] = &r;
  Tally overall;
  std::map<Setting, Tally> split;
  for (const auto& e : manifest.entries) {
    if (!e.label) throw Error(ErrorCode::ConfigError, "cannot evaluate unlabeled entry " + e.id);
    const auto it = by_id.find(e.id);
    if (it == by_id.end()) throw Error(ErrorCode::MissingReport, "no report for " + e.id);
    std::optional<Label> predicted;
    if (it->second->verdict) predicted = from_bool(it->second->verdict->is_ai_generated);
    overall.add(*e.label, predicted);
    split[e.setting].add(*e.label, predicted);
  }
  Evaluation out{overall.metrics(), {}};
  for (const auto& [s, t] : split) out.per_setting[s] = t.metrics();
  return out;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::AiLeaning: return "ai_leaning";
    case Direction::RealLeaning: return "real_leaning";
    case Direction::Neutral: break;
  }
  return "neutral";
}

Direction direction_of(const EvidenceItem& item) {
  if (item.validity != Validity::Valid) return Direction::Neutral;
  return std::visit(
      [](const auto& p) -> Direction {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EnsembleFinding>) {
          return p.prediction_score > 0.5 ? Direction::AiLeaning : Direction::RealLeaning;
        } else if constexpr (std::is_same_v<T, VlmFinding>) {
          return p.is_ai_generated ? Direction::AiLeaning : Direction::RealLeaning;
        } else if constexpr (std::is_same_v<T, ReverseSearchFinding>) {
          switch (p.provenance_hint) {
            case Provenance::AiPlatform: return Direction::AiLeaning;
            case Provenance::PhotoSite:
            case Provenance::NewsSite: return Direction::RealLeaning;
            case Provenance::Unknown: break;
          }
          return Direction::Neutral;
        } else if constexpr (std::is_same_v<T, MetadataFinding>) {
          return direction_of_metadata(p);
        } else if constexpr (std::is_same_v<T, MemoryFinding>) {
          if (p.hits.empty()) return Direction::Neutral;
          return p.hits.front().true_label == Label::Ai ? Direction::AiLeaning : Direction::RealLeaning;
        } else {
          return Direction::Neutral;
        }
      },
      item.payload);
}

ToolStats tool_reliability(std::span<const CaseReport> reports) {
  ToolStats stats;
  for (const auto& r : reports) {
    for (const auto& item : r.evidence.items()) stats.try_emplace(item.tool_id);
  }
  for (const auto& r : reports) {
    if (!r.verdict) continue;
    const auto verdict_dir = r.verdict->is_ai_generated ? Direction::AiLeaning : Direction::RealLeaning;
    for (auto& [id, s] : stats) {
      ++s.decisions_total;
      const auto* item = r.evidence.find(id);
      if (!item || item->validity != Validity::Valid) continue;
      ++s.valid_count;
      const auto dir = direction_of(*item);
      if (dir == Direction::Neutral) continue;
      ++s.directional_count;
      if (dir == verdict_dir) ++s.consistent_count;
    }
  }
  for (auto& [id, s] : stats) {
    if (s.directional_count > 0) {
      s.reliability = static_cast<double>(s.consistent_count) / static_cast<double>(s.directional_count);
    }
    s.coverage = ratio(static_cast<double>(s.valid_count), static_cast<double>(s.decisions_total));
  }
  return stats;
}

nlohmann::json to_json(const EvalMetrics& m) {
  return {{"tp", m.tp},           {"tn", m.tn},               {"fp", m.fp},         {"fn", m.fn},
          {"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json to_json(const Evaluation& e) {
  nlohmann::json j = {{"overall", to_json(e.overall)}};
  for (const auto& [s, m] : e.per_setting) j[std::string(to_string(s))] = to_json(m);
  return j;
}

nlohmann::json to_json(const ToolStats& stats) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, s] : stats) {
    j[std::string(to_string(id))] = {{"decisions_total", s.decisions_total},
                                     {"valid_count", s.valid_count},
                                     {"directional_count", s.directional_count},
                                     {"consistent_count", s.consistent_count},
                                     {"reliability", s.reliability ? nlohmann::json(*s.reliability) : nlohmann::json()},
                                     {"coverage", s.coverage}};
  }
  return j;
}

std::string confusion_csv(const Evaluation& e) {
  std::string out = "split,tp,tn,fp,fn,accuracy,precision,recall,f1\n";
  auto row = [&](std::string_view name, const EvalMetrics& m) {
    out += fmt::format("{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", name, m.tp, m.tn, m.fp, m.fn, m.accuracy,
                       m.precision, m.recall, m.f1);
  };
  row("overall", e.overall);
  for (const auto& [s, m] : e.per_setting) row(to_string(s), m);
  return out;
}

}  // namespace tribunal::bench
