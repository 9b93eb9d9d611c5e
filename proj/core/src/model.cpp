#include "tribunal/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tribunal/error.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal {

std::string_view to_string(ToolId id) {
  switch (id) {
    case ToolId::ReverseExact: return "reverse_exact";
    case ToolId::ReverseSimilar: return "reverse_similar";
    case ToolId::Metadata: return "metadata";
    case ToolId::Ensemble: return "ensemble";
    case ToolId::Vlm: return "vlm";
    case ToolId::Memory: return "memory";
  }
  return "unknown";
}

std::optional<ToolId> parse_tool_id(std::string_view name) {
  for (ToolId id : kAllToolIds) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::string_view tool_title(ToolId id) {
  switch (id) {
    case ToolId::ReverseExact: return "Reverse image search (exact matches)";
    case ToolId::ReverseSimilar: return "Reverse image search (visually similar images)";
    case ToolId::Metadata: return "Metadata extraction";
    case ToolId::Ensemble: return "Pre-trained classifier ensemble";
    case ToolId::Vlm: return "VLM visual analysis";
    case ToolId::Memory: return "Historical case memory";
  }
  return "Unknown tool";
}

std::string_view to_string(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Empty: return "empty";
    case Validity::Error: return "error";
  }
  return "error";
}

std::string_view to_string(Label l) { return l == Label::Ai ? "ai" : "real"; }

std::optional<Label> parse_label(std::string_view s) {
  const auto lower = text::to_lower(text::trim(s));
  if (lower == "ai" || lower == "ai-generated" || lower == "fake") return Label::Ai;
  if (lower == "real") return Label::Real;
  return std::nullopt;
}

std::string_view to_string(Outcome o) { return o == Outcome::Success ? "success" : "failure"; }

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::Exact: return "exact";
    case MatchKind::Similar: return "similar";
    case MatchKind::None: return "none";
  }
  return "none";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::AiPlatform: return "ai_platform";
    case Provenance::PhotoSite: return "photo_site";
    case Provenance::NewsSite: return "news_site";
    case Provenance::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(SignalClass s) {
  switch (s) {
    case SignalClass::RealSignal: return "real_signal";
    case SignalClass::AiSignal: return "ai_signal";
    case SignalClass::Neutral: return "neutral";
  }
  return "neutral";
}

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::High: return "high";
    case Confidence::Medium: return "medium";
    case Confidence::Low: return "low";
  }
  return "low";
}

std::string_view to_string(DecidedBy d) {
  return d == DecidedBy::ReasoningAgent ? "reasoning_agent" : "judge_agent";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Tool: return "tool";
    case Phase::Reasoning: return "reasoning";
    case Phase::Debate: return "debate";
    case Phase::Memory: return "memory";
  }
  return "reasoning";
}

EvidenceItem make_error_item(ToolId tool, std::string message, std::int64_t elapsed_ms,
                             std::int64_t token_cost) {
  EvidenceItem item;
  item.tool_id = tool;
  item.validity = Validity::Error;
  item.error_message = message.empty() ? std::string("unknown failure") : std::move(message);
  item.summary_text = "Tool failed: " + item.error_message;
  item.elapsed_ms = std::max<std::int64_t>(0, elapsed_ms);
  item.token_cost = std::max<std::int64_t>(0, token_cost);
  return item;
}

const EvidenceItem* EvidenceSet::find(ToolId id) const noexcept {
  auto it = std::find_if(items_.begin(), items_.end(),
                         [id](const EvidenceItem& e) { return e.tool_id == id; });
  return it == items_.end() ? nullptr : &*it;
}

EvidenceSet EvidenceSet::with_item(EvidenceItem item) const {
  auto items = items_;
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const EvidenceItem& e) { return e.tool_id == item.tool_id; });
  if (it != items.end()) {
    *it = std::move(item);
  } else {
    items.push_back(std::move(item));
  }
  return EvidenceSet(case_id_, std::move(items));
}

EvidenceSet EvidenceSet::without(ToolId id) const {
  auto items = items_;
  std::erase_if(items, [id](const EvidenceItem& e) { return e.tool_id == id; });
  return EvidenceSet(case_id_, std::move(items));
}

EvidenceSet seal_evidence_set(std::vector<EvidenceItem> items, std::string case_id) {
  if (items.empty()) {
    throw Error(ErrorCode::EmptySet, "evidence set for case '" + case_id + "' has no items");
  }
  std::set<ToolId> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.tool_id).second) {
      throw Error(ErrorCode::DuplicateTool,
                  "tool '" + std::string(to_string(item.tool_id)) + "' appears twice");
    }
  }
  return EvidenceSet(std::move(case_id), std::move(items));
}

std::string render_evidence(const EvidenceSet& set) {
  std::ostringstream out;
  bool first = true;
  for (const auto& item : set.items()) {
    if (!first) out << "\n";
    first = false;
    out << "=== " << tool_title(item.tool_id) << " [" << to_string(item.tool_id) << "] ===\n";
    switch (item.validity) {
      case Validity::Valid:
        out << item.summary_text << "\n";
        break;
      case Validity::Empty:
        out << "No informative result: "
            << (item.summary_text.empty() ? std::string("the tool returned no findings.")
                                          : item.summary_text)
            << "\n";
        break;
      case Validity::Error:
        out << "Tool error, no informative result: " << item.error_message << "\n";
        break;
    }
  }
  return out.str();
}

namespace {

std::vector<std::string_view> reference_keywords(ToolId id) {
  switch (id) {
    case ToolId::ReverseExact:
      return {"reverse", "exact match", "provenance", "search"};
    case ToolId::ReverseSimilar:
      return {"reverse", "similar image", "provenance", "search"};
    case ToolId::Metadata:
      return {"metadata", "exif", "camera"};
    case ToolId::Ensemble:
      return {"classifier", "ensemble", "prediction score"};
    case ToolId::Vlm:
      return {"vlm", "visual analysis", "visual"};
    case ToolId::Memory:
      return {"historical", "memory", "past case"};
  }
  return {};
}

}  // namespace

bool explanation_references_evidence(const Verdict& verdict, const EvidenceSet& set) {
  const auto lower = text::to_lower(verdict.explanation);
  for (const auto& item : set.items()) {
    if (item.validity != Validity::Valid) continue;
    if (lower.find(to_string(item.tool_id)) != std::string::npos) return true;
    for (auto kw : reference_keywords(item.tool_id)) {
      if (lower.find(kw) != std::string::npos) return true;
    }
  }
  return false;
}

void validate_transcript(const DebateTranscript& t) {
  if (t.max_rounds < 1) {
    throw Error(ErrorCode::InvariantViolation, "max_rounds must be positive");
  }
  if (static_cast<int>(t.rounds.size()) > t.max_rounds) {
    throw Error(ErrorCode::InvariantViolation, "transcript exceeds max_rounds");
  }
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    if (t.rounds[i].round_no != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::InvariantViolation, "round numbers must run 1..n");
    }
    if (t.rounds[i].judge_sufficient && i + 1 != t.rounds.size()) {
      throw Error(ErrorCode::InvariantViolation, "only the last round may be marked sufficient");
    }
  }
}

std::int64_t sum_tokens(const EvidenceSet& evidence, std::span<const AgentCall> calls) {
  std::int64_t total = 0;
  for (const auto& item : evidence.items()) total += item.token_cost;
  for (const auto& call : calls) total += call.tokens();
  return total;
}

}  // namespace tribunal
