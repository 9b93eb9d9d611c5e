#include "tribunal/memory/memory_tool.hpp"

#include <fmt/format.h>

#include <fstream>

#include "tribunal/agents/prompts.hpp"
#include "tribunal/error.hpp"
#include "tribunal/http.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::memory {

namespace {

std::string label_text(Label l) { return l == Label::Ai ? "AI-generated" : "real"; }

}  // namespace

std::vector<double> ReplayEmbedProvider::embed(const ImageCase& image) const {
  const auto path = root_ / image.id / "embedding.json";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFixture, "no embedding fixture " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("vector")) {
    throw Error(ErrorCode::MissingFixture, "malformed embedding fixture " + path.string());
  }
  auto v = j["vector"].get<std::vector<double>>();
  if (v.size() != kEmbeddingDim) {
    throw Error(ErrorCode::DimMismatch, fmt::format("embedding fixture has {} values", v.size()));
  }
  return v;
}

std::vector<double> SidecarEmbedProvider::embed(const ImageCase& image) const {
  return client_.embed(read_file_bytes(image.path.string()));
}

std::string summarize_memory(const MemoryFinding& finding) {
  if (finding.hits.empty()) return "No sufficiently similar historical case was found.";
  std::string out;
  for (const auto& h : finding.hits) {
    if (!out.empty()) out += "\n\n";
    out += fmt::format(
        "Historical case {} (similarity {:.4f}): ground truth {}, framework prediction {}, outcome {}.",
        h.case_id, h.similarity, label_text(h.true_label), label_text(h.predicted_label),
        h.outcome == Outcome::Success ? "success (correctly classified)" : "failure (misclassified)");
    if (!h.key_evidence.empty()) out += "\nKey evidence recorded for that case:\n" + h.key_evidence;
    if (!h.reflection.empty()) out += "\nReflection on the earlier failure:\n" + h.reflection;
  }
  return out;
}

MemoryTool::MemoryTool(std::shared_ptr<const KnowledgeBase> kb, std::shared_ptr<const EmbedProvider> embedder)
    : kb_(std::move(kb)), embedder_(std::move(embedder)) {
  if (!kb_ || !embedder_) throw Error(ErrorCode::ConfigError, "memory tool needs a knowledge base and an embedder");
}

EvidenceItem MemoryTool::invoke(const ImageCase& image) const {
  std::vector<double> query;
  try {
    query = embedder_->embed(image);
  } catch (const std::exception& e) {
    return make_error_item(ToolId::Memory, std::string("embedding failed: ") + e.what());
  }
  MemoryFinding finding;
  for (auto& hit : kb_->retrieve(query)) {
    auto& c = hit.memory_case;
    finding.hits.push_back({c.case_id, hit.similarity, c.true_label, c.predicted_label, c.outcome,
                            c.evidence_snapshot, c.reflection});
  }
  EvidenceItem item;
  item.tool_id = ToolId::Memory;
  item.validity = finding.hits.empty() ? Validity::Empty : Validity::Valid;
  item.summary_text = summarize_memory(finding);
  item.payload = std::move(finding);
  return item;
}

Reflection generate_reflection(const MemoryCase& failed, agents::AgentSession& session) {
  if (failed.outcome != Outcome::Failure) {
    throw Error(ErrorCode::PreconditionViolation, "reflections are generated for failed cases only");
  }
  const auto prompt = agents::render_prompt(agents::TemplateId::Reflection,
                                            {{"true_label", label_text(failed.true_label)},
                                             {"predicted_label", label_text(failed.predicted_label)},
                                             {"tool_results", failed.evidence_snapshot},
                                             {"reasoning_trace", failed.reasoning_snapshot}});
  try {
    auto reply = session.ask("reflection", Phase::Memory, prompt);
    if (!text::trim(reply.text).empty()) return {reply.text, true};
  } catch (const Error&) {
  }
  return {fmt::format("No generated reflection is available. The framework predicted {} for an image that is {}; "
                      "treat the recorded evidence with caution.",
                      label_text(failed.predicted_label), label_text(failed.true_label)),
          false};
}

}  // namespace tribunal::memory
