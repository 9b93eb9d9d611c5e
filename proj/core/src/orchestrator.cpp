#include "tribunal/orchestrator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "tribunal/agents/agents.hpp"
#include "tribunal/error.hpp"

namespace tribunal {

namespace {

using Clock = std::chrono::steady_clock;

struct PendingItem {
  std::mutex mu;
  std::condition_variable cv;
  std::optional<EvidenceItem> item;
};

// The worker is detached so that a stuck backend cannot hold up the case; a
// late result is simply dropped.
std::shared_ptr<PendingItem> launch(std::shared_ptr<const toolbox::Tool> tool, const ImageCase& image) {
  auto pending = std::make_shared<PendingItem>();
  std::thread([pending, tool = std::move(tool), image] {
    auto item = tool->run(image);
    std::lock_guard lock(pending->mu);
    pending->item = std::move(item);
    pending->cv.notify_all();
  }).detach();
  return pending;
}

EvidenceItem await(PendingItem& pending, ToolId id, std::chrono::milliseconds timeout, Clock::time_point start) {
  std::unique_lock lock(pending.mu);
  if (timeout.count() <= 0) {
    pending.cv.wait(lock, [&] { return pending.item.has_value(); });
  } else if (!pending.cv.wait_until(lock, start + timeout, [&] { return pending.item.has_value(); })) {
    return make_error_item(id, fmt::format("tool timed out after {} ms", timeout.count()), timeout.count());
  }
  return *pending.item;
}

constexpr std::string_view kForcedNote =
    "Evidence was judged insufficient or inconsistent and debate is disabled; this decision was forced "
    "and has low confidence.";

}  // namespace

std::chrono::milliseconds PipelineConfig::timeout_for(ToolId id) const {
  const auto it = timeout_overrides.find(id);
  return it == timeout_overrides.end() ? tool_timeout : it->second;
}

void PipelineConfig::validate() const {
  if (enabled_tools.empty()) throw Error(ErrorCode::ConfigError, "no tools enabled");
  if (enabled_tools.contains(ToolId::Memory)) {
    throw Error(ErrorCode::ConfigError, "memory is switched on with memory_enabled, not as a standard tool");
  }
  if (max_rounds < 1) throw Error(ErrorCode::ConfigError, "max_rounds must be at least 1");
  if (tool_timeout.count() < 0) throw Error(ErrorCode::ConfigError, "tool timeout must not be negative");
  for (const auto& [id, t] : timeout_overrides) {
    if (t.count() <= 0) throw Error(ErrorCode::ConfigError, fmt::format("timeout for {} must be positive", to_string(id)));
  }
}

std::vector<EvidenceItem> gather_evidence(const ImageCase& image, const PipelineConfig& config,
                                          const Providers& providers) {
  std::vector<std::pair<ToolId, std::shared_ptr<const toolbox::Tool>>> jobs;
  for (ToolId id : config.enabled_tools) {
    const auto it = providers.tools.find(id);
    if (it == providers.tools.end() || !it->second) {
      throw Error(ErrorCode::ConfigError, fmt::format("no provider wired for tool {}", to_string(id)));
    }
    jobs.emplace_back(id, it->second);
  }
  if (config.memory_enabled) {
    if (!providers.memory) throw Error(ErrorCode::ConfigError, "memory enabled without a memory tool");
    jobs.emplace_back(ToolId::Memory, providers.memory);
  }
  std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const auto start = Clock::now();
  std::vector<std::shared_ptr<PendingItem>> pending;
  pending.reserve(jobs.size());
  for (const auto& [id, tool] : jobs) pending.push_back(launch(tool, image));

  std::vector<EvidenceItem> items;
  items.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    items.push_back(await(*pending[i], jobs[i].first, config.timeout_for(jobs[i].first), start));
  }
  return items;
}

std::pair<DebateTranscript, Verdict> run_debate(const EvidenceSet& set, int max_rounds, agents::AgentSession& session) {
  DebateTranscript t;
  t.max_rounds = max_rounds;
  while (static_cast<int>(t.rounds.size()) < max_rounds) {
    try {
      auto pro = agents::debate_round(agents::DebateSide::Pro, set, t, session);
      auto con = agents::debate_round(agents::DebateSide::Con, set, t, session);
      t.rounds.push_back({static_cast<int>(t.rounds.size()) + 1, std::move(pro), std::move(con), false});
      if (agents::judge_check(t, session)) {
        t.rounds.back().judge_sufficient = true;
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DebateAborted) throw;
      t.abort_reason = e.what();
      break;
    }
  }
  auto verdict = agents::judge_final(t, set, session);
  return {std::move(t), std::move(verdict)};
}

CaseReport detect(const ImageCase& image, const PipelineConfig& config, const Providers& providers) {
  config.validate();
  if (!providers.chat) throw Error(ErrorCode::ConfigError, "detect needs a chat backend");
  const auto start = Clock::now();

  CaseReport report;
  report.case_id = image.id;
  auto set = seal_evidence_set(gather_evidence(image, config, providers), image.id);
  if (providers.evidence_hook) set = providers.evidence_hook(image, std::move(set));
  report.evidence = set;

  agents::AgentSession session(*providers.chat, image.id);
  try {
    if (agents::assess_evidence(set, session)) {
      report.verdict = agents::reason_final(set, session);
    } else if (config.debate_enabled) {
      auto [transcript, verdict] = run_debate(set, config.max_rounds, session);
      report.transcript = std::move(transcript);
      report.verdict = std::move(verdict);
    } else {
      report.verdict = agents::reason_final(set, session, std::string(kForcedNote));
    }
  } catch (const Error& e) {
    report.verdict.reset();
    report.transcript.reset();
    report.error = e.what();
  }
  report.agent_calls = session.calls();
  report.totals.tokens = sum_tokens(report.evidence, report.agent_calls);
  report.totals.latency_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  return report;
}

}  // namespace tribunal
