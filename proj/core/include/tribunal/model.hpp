#pragma once

// Shared domain types: evidence produced by forensic tools, the sealed
// evidence set handed to the agents, and the final per-image report.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tribunal {

enum class ToolId { ReverseExact, ReverseSimilar, Metadata, Ensemble, Vlm, Memory };

inline constexpr std::array<ToolId, 6> kAllToolIds{ToolId::ReverseExact, ToolId::ReverseSimilar,
                                                   ToolId::Metadata,     ToolId::Ensemble,
                                                   ToolId::Vlm,          ToolId::Memory};
inline constexpr std::array<ToolId, 5> kStandardToolIds{ToolId::ReverseExact, ToolId::ReverseSimilar,
                                                        ToolId::Metadata, ToolId::Ensemble,
                                                        ToolId::Vlm};

std::string_view to_string(ToolId id);
std::optional<ToolId> parse_tool_id(std::string_view name);
/// Human-readable heading used when evidence is rendered for the agents.
std::string_view tool_title(ToolId id);

enum class Validity { Valid, Empty, Error };
std::string_view to_string(Validity v);

enum class Label { Ai, Real };
std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);
inline Label from_bool(bool is_ai) { return is_ai ? Label::Ai : Label::Real; }

enum class Outcome { Success, Failure };
std::string_view to_string(Outcome o);

struct ImageCase {
  std::string id;
  std::filesystem::path path;
  std::optional<Label> claimed_label;  // ground truth; bench and kb-build only
  std::string source_tag;
};

// ---- tool findings -------------------------------------------------------

enum class MatchKind { Exact, Similar, None };
enum class Provenance { AiPlatform, PhotoSite, NewsSite, Unknown };
std::string_view to_string(MatchKind k);
std::string_view to_string(Provenance p);

struct SearchPage {
  std::string title;
  std::string url;
  std::string snippet;

  bool operator==(const SearchPage&) const = default;
};

struct ReverseSearchFinding {
  MatchKind match_kind = MatchKind::None;
  std::vector<SearchPage> pages;
  Provenance provenance_hint = Provenance::Unknown;

  bool operator==(const ReverseSearchFinding&) const = default;
};

enum class SignalClass { RealSignal, AiSignal, Neutral };
std::string_view to_string(SignalClass s);

struct MetadataSignal {
  std::string field_name;
  SignalClass signal = SignalClass::Neutral;

  bool operator==(const MetadataSignal&) const = default;
};

struct MetadataFinding {
  std::map<std::string, std::string> fields_kept;
  std::vector<MetadataSignal> signals;  // same order as fields_kept

  bool operator==(const MetadataFinding&) const = default;
};

struct ModelScore {
  std::string model_id;
  double score = 0.0;
  double weight = 1.0;

  bool operator==(const ModelScore&) const = default;
};

struct EnsembleFinding {
  std::vector<ModelScore> per_model;
  std::vector<std::string> failed_models;
  double prediction_score = 0.0;

  bool operator==(const EnsembleFinding&) const = default;
};

enum class Confidence { High, Medium, Low };
std::string_view to_string(Confidence c);

struct VlmFinding {
  bool is_ai_generated = false;
  std::vector<std::string> artifacts_or_support;
  Confidence confidence = Confidence::Low;

  bool operator==(const VlmFinding&) const = default;
};

struct MemoryHit {
  std::string case_id;
  double similarity = 0.0;
  Label true_label = Label::Real;
  Label predicted_label = Label::Real;
  Outcome outcome = Outcome::Success;
  std::string key_evidence;
  std::string reflection;

  bool operator==(const MemoryHit&) const = default;
};

struct MemoryFinding {
  std::vector<MemoryHit> hits;

  bool operator==(const MemoryFinding&) const = default;
};

using Payload = std::variant<std::monostate, ReverseSearchFinding, MetadataFinding, EnsembleFinding,
                             VlmFinding, MemoryFinding>;

struct EvidenceItem {
  ToolId tool_id = ToolId::Vlm;
  Validity validity = Validity::Error;
  Payload payload;
  std::string summary_text;
  std::int64_t elapsed_ms = 0;
  std::int64_t token_cost = 0;
  std::string error_message;  // set when validity == Error

  bool operator==(const EvidenceItem&) const = default;
};

EvidenceItem make_error_item(ToolId tool, std::string message, std::int64_t elapsed_ms = 0,
                             std::int64_t token_cost = 0);

// Immutable, ordered collection with at most one item per tool. Modifying
// operations return a new set.
class EvidenceSet {
 public:
  EvidenceSet() = default;

  [[nodiscard]] const std::string& case_id() const noexcept { return case_id_; }
  [[nodiscard]] std::span<const EvidenceItem> items() const noexcept { return items_; }
  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  [[nodiscard]] const EvidenceItem* find(ToolId id) const noexcept;
  [[nodiscard]] bool contains(ToolId id) const noexcept { return find(id) != nullptr; }

  // Replaces the item with the same tool id in place, or appends it.
  [[nodiscard]] EvidenceSet with_item(EvidenceItem item) const;
  [[nodiscard]] EvidenceSet without(ToolId id) const;

  bool operator==(const EvidenceSet&) const = default;

  friend EvidenceSet seal_evidence_set(std::vector<EvidenceItem> items, std::string case_id);

 private:
  EvidenceSet(std::string case_id, std::vector<EvidenceItem> items)
      : case_id_(std::move(case_id)), items_(std::move(items)) {}

  std::string case_id_;
  std::vector<EvidenceItem> items_;
};

/// Throws Error{EmptySet} for no items and Error{DuplicateTool} when two
/// items share a tool id. Input order is preserved.
EvidenceSet seal_evidence_set(std::vector<EvidenceItem> items, std::string case_id);

/// Prompt-ready text for the {tool_results} slot. Every item is rendered,
/// including empty and failed ones, so the agents can see what is missing.
std::string render_evidence(const EvidenceSet& set);

// ---- decisions -----------------------------------------------------------

enum class DecidedBy { ReasoningAgent, JudgeAgent };
std::string_view to_string(DecidedBy d);

struct Verdict {
  bool is_ai_generated = false;
  std::string explanation;
  DecidedBy decided_by = DecidedBy::ReasoningAgent;
  std::optional<std::string> confidence_note;

  bool operator==(const Verdict&) const = default;
};

// Case-insensitive keyword match between the explanation and the names of
// tools that produced valid evidence.
bool explanation_references_evidence(const Verdict& verdict, const EvidenceSet& set);

struct DebateRound {
  int round_no = 1;
  std::string pro_argument;
  std::string con_argument;
  bool judge_sufficient = false;

  bool operator==(const DebateRound&) const = default;
};

struct DebateTranscript {
  std::vector<DebateRound> rounds;
  int max_rounds = 3;
  std::optional<std::string> abort_reason;

  [[nodiscard]] bool sealed() const noexcept {
    return abort_reason.has_value() || static_cast<int>(rounds.size()) >= max_rounds ||
           (!rounds.empty() && rounds.back().judge_sufficient);
  }
  bool operator==(const DebateTranscript&) const = default;
};

/// Throws Error{InvariantViolation} if round numbering, the round bound or
/// the "only the last round may be sufficient" rule is broken.
void validate_transcript(const DebateTranscript& t);

enum class Phase { Tool, Reasoning, Debate, Memory };
std::string_view to_string(Phase p);

struct AgentCall {
  std::string step;
  Phase phase = Phase::Reasoning;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  [[nodiscard]] std::int64_t tokens() const noexcept { return prompt_tokens + completion_tokens; }
  bool operator==(const AgentCall&) const = default;
};

struct Totals {
  std::int64_t latency_ms = 0;
  std::int64_t tokens = 0;

  bool operator==(const Totals&) const = default;
};

struct CaseReport {
  std::string case_id;
  std::optional<Verdict> verdict;  // absent when an agent failed
  EvidenceSet evidence;
  std::optional<DebateTranscript> transcript;
  std::vector<AgentCall> agent_calls;
  Totals totals;
  std::optional<std::string> error;

  [[nodiscard]] bool succeeded() const noexcept { return verdict.has_value(); }
  bool operator==(const CaseReport&) const = default;
};

/// Sum of every tool token_cost plus every agent call.
std::int64_t sum_tokens(const EvidenceSet& evidence, std::span<const AgentCall> calls);

}  // namespace tribunal
