#include "tribunal/serialization.hpp"

#include "tribunal/error.hpp"

namespace tribunal {

void to_json(json& j, const SearchPage& v) {
  j = json{{"title", v.title}, {"url", v.url}, {"snippet", v.snippet}};
}
void from_json(const json& j, SearchPage& v) {
  v.title = j.value("title", "");
  v.url = j.value("url", "");
  v.snippet = j.value("snippet", "");
}

void to_json(json& j, const ReverseSearchFinding& v) {
  j = json{{"match_kind", v.match_kind}, {"pages", v.pages}, {"provenance_hint", v.provenance_hint}};
}
void from_json(const json& j, ReverseSearchFinding& v) {
  j.at("match_kind").get_to(v.match_kind);
  j.at("pages").get_to(v.pages);
  j.at("provenance_hint").get_to(v.provenance_hint);
}

void to_json(json& j, const MetadataFinding& v) {
  json signals = json::array();
  for (const auto& s : v.signals) signals.push_back({{"field_name", s.field_name}, {"class", s.signal}});
  j = json{{"fields_kept", v.fields_kept}, {"signals", signals}};
}
void from_json(const json& j, MetadataFinding& v) {
  j.at("fields_kept").get_to(v.fields_kept);
  v.signals.clear();
  for (const auto& s : j.at("signals")) {
    v.signals.push_back({s.at("field_name").get<std::string>(), s.at("class").get<SignalClass>()});
  }
}

void to_json(json& j, const EnsembleFinding& v) {
  json per_model = json::array();
  for (const auto& m : v.per_model) {
    per_model.push_back({{"model_id", m.model_id}, {"score", m.score}, {"weight", m.weight}});
  }
  j = json{{"per_model", per_model},
           {"failed_models", v.failed_models},
           {"prediction_score", v.prediction_score}};
}
void from_json(const json& j, EnsembleFinding& v) {
  v.per_model.clear();
  for (const auto& m : j.at("per_model")) {
    v.per_model.push_back(
        {m.at("model_id").get<std::string>(), m.at("score").get<double>(), m.value("weight", 1.0)});
  }
  v.failed_models = j.value("failed_models", std::vector<std::string>{});
  j.at("prediction_score").get_to(v.prediction_score);
}

void to_json(json& j, const VlmFinding& v) {
  j = json{{"is_ai_generated", v.is_ai_generated},
           {"artifacts_or_support", v.artifacts_or_support},
           {"confidence", v.confidence}};
}
void from_json(const json& j, VlmFinding& v) {
  j.at("is_ai_generated").get_to(v.is_ai_generated);
  j.at("artifacts_or_support").get_to(v.artifacts_or_support);
  j.at("confidence").get_to(v.confidence);
}

void to_json(json& j, const MemoryHit& v) {
  j = json{{"case_id", v.case_id},           {"similarity", v.similarity},
           {"true_label", v.true_label},     {"predicted_label", v.predicted_label},
           {"outcome", v.outcome},           {"key_evidence", v.key_evidence},
           {"reflection", v.reflection}};
}
void from_json(const json& j, MemoryHit& v) {
  j.at("case_id").get_to(v.case_id);
  j.at("similarity").get_to(v.similarity);
  j.at("true_label").get_to(v.true_label);
  j.at("predicted_label").get_to(v.predicted_label);
  j.at("outcome").get_to(v.outcome);
  v.key_evidence = j.value("key_evidence", "");
  v.reflection = j.value("reflection", "");
}

void to_json(json& j, const MemoryFinding& v) { j = json{{"hits", v.hits}}; }
void from_json(const json& j, MemoryFinding& v) { j.at("hits").get_to(v.hits); }

namespace {

json payload_to_json(const Payload& p) {
  return std::visit(
      [](const auto& body) -> json {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return json(body);
        }
      },
      p);
}

Payload payload_from_json(ToolId tool, const json& j) {
  if (j.is_null()) return std::monostate{};
  switch (tool) {
    case ToolId::ReverseExact:
    case ToolId::ReverseSimilar: return j.get<ReverseSearchFinding>();
    case ToolId::Metadata: return j.get<MetadataFinding>();
    case ToolId::Ensemble: return j.get<EnsembleFinding>();
    case ToolId::Vlm: return j.get<VlmFinding>();
    case ToolId::Memory: return j.get<MemoryFinding>();
  }
  return std::monostate{};
}

}  // namespace

void to_json(json& j, const EvidenceItem& v) {
  j = json{{"tool_id", v.tool_id},
           {"validity", v.validity},
           {"payload", payload_to_json(v.payload)},
           {"summary_text", v.summary_text},
           {"elapsed_ms", v.elapsed_ms},
           {"token_cost", v.token_cost}};
  if (!v.error_message.empty()) j["error"] = v.error_message;
}
void from_json(const json& j, EvidenceItem& v) {
  j.at("tool_id").get_to(v.tool_id);
  j.at("validity").get_to(v.validity);
  v.payload = payload_from_json(v.tool_id, j.value("payload", json(nullptr)));
  v.summary_text = j.value("summary_text", "");
  v.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
  v.token_cost = j.value("token_cost", std::int64_t{0});
  v.error_message = j.value("error", "");
}

void to_json(json& j, const EvidenceSet& v) {
  j = json{{"case_id", v.case_id()}, {"items", json::array()}};
  for (const auto& item : v.items()) j["items"].push_back(item);
}
void from_json(const json& j, EvidenceSet& v) {
  auto items = j.at("items").get<std::vector<EvidenceItem>>();
  auto case_id = j.value("case_id", "");
  v = items.empty() ? EvidenceSet{} : seal_evidence_set(std::move(items), std::move(case_id));
}

void to_json(json& j, const Verdict& v) {
  j = json{{"is_ai_generated", v.is_ai_generated},
           {"label", to_string(from_bool(v.is_ai_generated))},
           {"explanation", v.explanation},
           {"decided_by", v.decided_by}};
  j["confidence_note"] = v.confidence_note ? json(*v.confidence_note) : json(nullptr);
}
void from_json(const json& j, Verdict& v) {
  j.at("is_ai_generated").get_to(v.is_ai_generated);
  j.at("explanation").get_to(v.explanation);
  j.at("decided_by").get_to(v.decided_by);
  if (j.contains("confidence_note") && !j["confidence_note"].is_null()) {
    v.confidence_note = j["confidence_note"].get<std::string>();
  } else {
    v.confidence_note.reset();
  }
}

void to_json(json& j, const DebateTranscript& v) {
  json rounds = json::array();
  for (const auto& r : v.rounds) {
    rounds.push_back({{"round_no", r.round_no},
                      {"pro_argument", r.pro_argument},
                      {"con_argument", r.con_argument},
                      {"judge_sufficient", r.judge_sufficient}});
  }
  j = json{{"rounds", rounds}, {"max_rounds", v.max_rounds}};
  j["abort_reason"] = v.abort_reason ? json(*v.abort_reason) : json(nullptr);
}
void from_json(const json& j, DebateTranscript& v) {
  v.rounds.clear();
  for (const auto& r : j.at("rounds")) {
    v.rounds.push_back({r.at("round_no").get<int>(), r.at("pro_argument").get<std::string>(),
                        r.at("con_argument").get<std::string>(),
                        r.at("judge_sufficient").get<bool>()});
  }
  j.at("max_rounds").get_to(v.max_rounds);
  if (j.contains("abort_reason") && !j["abort_reason"].is_null()) {
    v.abort_reason = j["abort_reason"].get<std::string>();
  } else {
    v.abort_reason.reset();
  }
}

void to_json(json& j, const AgentCall& v) {
  j = json{{"step", v.step},
           {"phase", v.phase},
           {"prompt_tokens", v.prompt_tokens},
           {"completion_tokens", v.completion_tokens}};
}
void from_json(const json& j, AgentCall& v) {
  j.at("step").get_to(v.step);
  j.at("phase").get_to(v.phase);
  j.at("prompt_tokens").get_to(v.prompt_tokens);
  j.at("completion_tokens").get_to(v.completion_tokens);
}

void to_json(json& j, const CaseReport& v) {
  j = json::object();
  j["case_id"] = v.case_id;
  if (v.verdict) {
    j["verdict"] = *v.verdict;
    j["verdict"]["references_evidence"] = explanation_references_evidence(*v.verdict, v.evidence);
  } else {
    j["verdict"] = nullptr;
  }
  j["evidence"] = v.evidence;
  j["transcript"] = v.transcript ? json(*v.transcript) : json(nullptr);
  j["agent_calls"] = v.agent_calls;
  j["totals"] = {{"latency_ms", v.totals.latency_ms}, {"tokens", v.totals.tokens}};
  j["error"] = v.error ? json(*v.error) : json(nullptr);
}
void from_json(const json& j, CaseReport& v) {
  j.at("case_id").get_to(v.case_id);
  if (!j.at("verdict").is_null()) {
    v.verdict = j["verdict"].get<Verdict>();
  } else {
    v.verdict.reset();
  }
  j.at("evidence").get_to(v.evidence);
  if (!j.at("transcript").is_null()) {
    v.transcript = j["transcript"].get<DebateTranscript>();
  } else {
    v.transcript.reset();
  }
  v.agent_calls = j.value("agent_calls", std::vector<AgentCall>{});
  v.totals.latency_ms = j.at("totals").at("latency_ms").get<std::int64_t>();
  v.totals.tokens = j.at("totals").at("tokens").get<std::int64_t>();
  if (j.contains("error") && !j["error"].is_null()) {
    v.error = j["error"].get<std::string>();
  } else {
    v.error.reset();
  }
}

json strip_timings(json report) {
  if (report.contains("totals")) report["totals"]["latency_ms"] = 0;
  if (report.contains("evidence") && report["evidence"].contains("items")) {
    for (auto& item : report["evidence"]["items"]) item["elapsed_ms"] = 0;
  }
  return report;
}

}  // namespace tribunal
