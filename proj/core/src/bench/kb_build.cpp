#include "tribunal/bench/kb_build.hpp"

#include <fmt/format.h>

#include "tribunal/error.hpp"

namespace tribunal::bench {

namespace {

std::string reasoning_snapshot(const CaseReport& r) {
  const auto& v = *r.verdict;
  std::string out = fmt::format("Decided by {}: {}\n{}", to_string(v.decided_by),
                                v.is_ai_generated ? "AI-generated" : "real", v.explanation);
  if (v.confidence_note) out += fmt::format("\nNote: {}", *v.confidence_note);
  return out;
}

}  // namespace

KbBuildResult build_knowledge_base(const Manifest& manifest, PipelineConfig config, const Providers& providers,
                                   const memory::EmbedProvider& embedder, memory::KnowledgeBase& kb) {
  require_labels(manifest);
  config.memory_enabled = false;
  config.validate();
  if (!providers.chat) throw Error(ErrorCode::ConfigError, "kb build needs a chat backend");

  KbBuildResult result;
  for (const auto& entry : manifest.entries) {
    const auto image = entry.to_case();
    const auto report = detect(image, config, providers);
    if (!report.succeeded()) {
      result.skipped.push_back(entry.id);
      continue;
    }
    memory::MemoryCase mc;
    try {
      mc.embedding = embedder.embed(image);
    } catch (const Error&) {
      result.skipped.push_back(entry.id);
      continue;
    }
    mc.case_id = entry.id;
    mc.true_label = *entry.label;
    mc.predicted_label = report.verdict->is_ai_generated ? Label::Ai : Label::Real;
    mc.outcome = mc.true_label == mc.predicted_label ? Outcome::Success : Outcome::Failure;
    mc.evidence_snapshot = render_evidence(report.evidence);
    mc.reasoning_snapshot = reasoning_snapshot(report);
    if (mc.outcome == Outcome::Failure) {
      agents::AgentSession session(*providers.chat, entry.id);
      auto reflection = memory::generate_reflection(mc, session);
      mc.reflection = std::move(reflection.text);
      mc.reflection_machine_generated = reflection.machine_generated;
      result.placeholder_reflections += !reflection.machine_generated;
      ++result.failures;
    } else {
      ++result.successes;
    }
    kb.insert(std::move(mc));
  }
  return result;
}

KbBuildResult build_knowledge_base(const Manifest& manifest, const PipelineConfig& config,
                                   const Providers& providers, const memory::EmbedProvider& embedder,
                                   const std::filesystem::path& dir, memory::RetrievalParams params) {
  std::shared_ptr<memory::KnowledgeBase> kb;
  if (std::filesystem::exists(dir / "index.json")) {
    kb = memory::KnowledgeBase::load(dir, params);
  } else {
    kb = std::make_shared<memory::KnowledgeBase>(params);
  }
  auto result = build_knowledge_base(manifest, config, providers, embedder, *kb);
  kb->save(dir);
  return result;
}

}  // namespace tribunal::bench
