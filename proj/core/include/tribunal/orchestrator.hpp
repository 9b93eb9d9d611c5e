#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <utility>

#include "tribunal/agents/chat.hpp"
#include "tribunal/model.hpp"
#include "tribunal/toolbox/toolbox.hpp"

namespace tribunal {

struct PipelineConfig {
  std::set<ToolId> enabled_tools{kStandardToolIds.begin(), kStandardToolIds.end()};
  bool memory_enabled = false;
  bool debate_enabled = true;
  int max_rounds = 3;
  std::chrono::milliseconds tool_timeout{0};  // 0 waits indefinitely
  std::map<ToolId, std::chrono::milliseconds> timeout_overrides;

  [[nodiscard]] std::chrono::milliseconds timeout_for(ToolId id) const;
  /// Throws Error{ConfigError} on an empty tool set, a memory id among the
  /// standard tools, max_rounds < 1 or a negative timeout.
  void validate() const;
};

// Applied to the sealed evidence before the agents see it (attack simulation).
using EvidenceHook = std::function<EvidenceSet(const ImageCase&, EvidenceSet)>;

struct Providers {
  toolbox::Toolbox tools;
  std::shared_ptr<agents::ChatBackend> chat;
  std::shared_ptr<const toolbox::Tool> memory;  // required when memory is enabled
  EvidenceHook evidence_hook;
};

/// Runs every enabled tool concurrently, each bounded by its timeout, then the
/// memory tool when enabled. Items come back in tool-id order.
std::vector<EvidenceItem> gather_evidence(const ImageCase& image, const PipelineConfig& config,
                                          const Providers& providers);

/// Pro, con and judge check per round until the judge is satisfied or
/// max_rounds is reached, then the judge's final verdict. A backend failure
/// mid-debate ends the debate and the judge decides on the evidence alone.
std::pair<DebateTranscript, Verdict> run_debate(const EvidenceSet& set, int max_rounds,
                                                agents::AgentSession& session);

/// End-to-end detection. Agent failures produce a report with no verdict and
/// the error recorded; configuration errors throw.
CaseReport detect(const ImageCase& image, const PipelineConfig& config, const Providers& providers);

}  // namespace tribunal
