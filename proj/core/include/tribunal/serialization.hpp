#pragma once

// JSON mapping for the domain model. Field names are part of the on-disk
// report format and must stay stable.

#include <nlohmann/json.hpp>

#include "tribunal/model.hpp"

namespace tribunal {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(ToolId, {{ToolId::ReverseExact, "reverse_exact"},
                                      {ToolId::ReverseSimilar, "reverse_similar"},
                                      {ToolId::Metadata, "metadata"},
                                      {ToolId::Ensemble, "ensemble"},
                                      {ToolId::Vlm, "vlm"},
                                      {ToolId::Memory, "memory"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Validity, {{Validity::Valid, "valid"},
                                        {Validity::Empty, "empty"},
                                        {Validity::Error, "error"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Label, {{Label::Ai, "ai"}, {Label::Real, "real"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Outcome, {{Outcome::Success, "success"}, {Outcome::Failure, "failure"}})
NLOHMANN_JSON_SERIALIZE_ENUM(MatchKind, {{MatchKind::Exact, "exact"},
                                         {MatchKind::Similar, "similar"},
                                         {MatchKind::None, "none"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Provenance, {{Provenance::AiPlatform, "ai_platform"},
                                          {Provenance::PhotoSite, "photo_site"},
                                          {Provenance::NewsSite, "news_site"},
                                          {Provenance::Unknown, "unknown"}})
NLOHMANN_JSON_SERIALIZE_ENUM(SignalClass, {{SignalClass::RealSignal, "real_signal"},
                                           {SignalClass::AiSignal, "ai_signal"},
                                           {SignalClass::Neutral, "neutral"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Confidence, {{Confidence::High, "high"},
                                          {Confidence::Medium, "medium"},
                                          {Confidence::Low, "low"}})
NLOHMANN_JSON_SERIALIZE_ENUM(DecidedBy, {{DecidedBy::ReasoningAgent, "reasoning_agent"},
                                         {DecidedBy::JudgeAgent, "judge_agent"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Phase, {{Phase::Tool, "tool"},
                                     {Phase::Reasoning, "reasoning"},
                                     {Phase::Debate, "debate"},
                                     {Phase::Memory, "memory"}})

void to_json(json& j, const SearchPage& v);
void from_json(const json& j, SearchPage& v);
void to_json(json& j, const ReverseSearchFinding& v);
void from_json(const json& j, ReverseSearchFinding& v);
void to_json(json& j, const MetadataFinding& v);
void from_json(const json& j, MetadataFinding& v);
void to_json(json& j, const EnsembleFinding& v);
void from_json(const json& j, EnsembleFinding& v);
void to_json(json& j, const VlmFinding& v);
void from_json(const json& j, VlmFinding& v);
void to_json(json& j, const MemoryHit& v);
void from_json(const json& j, MemoryHit& v);
void to_json(json& j, const MemoryFinding& v);
void from_json(const json& j, MemoryFinding& v);

void to_json(json& j, const EvidenceItem& v);
void from_json(const json& j, EvidenceItem& v);
void to_json(json& j, const EvidenceSet& v);
void from_json(const json& j, EvidenceSet& v);
void to_json(json& j, const Verdict& v);
void from_json(const json& j, Verdict& v);
void to_json(json& j, const DebateTranscript& v);
void from_json(const json& j, DebateTranscript& v);
void to_json(json& j, const AgentCall& v);
void from_json(const json& j, AgentCall& v);
void to_json(json& j, const CaseReport& v);
void from_json(const json& j, CaseReport& v);

/// Report JSON with every timing field zeroed; used for determinism checks.
json strip_timings(json report);

}  // namespace tribunal
