#include "tribunal/bench/cost.hpp"

#include "tribunal/serialization.hpp"

namespace tribunal::bench {

CostReport cost_report(std::span<const CaseReport> reports) {
  CostReport c;
  c.cases = reports.size();
  if (reports.empty()) return c;
  double latency = 0;
  double tokens = 0;
  double tool = 0;
  double reasoning = 0;
  double debate = 0;
  std::map<ToolId, std::pair<double, int>> per_tool;
  for (const auto& r : reports) {
    latency += static_cast<double>(r.totals.latency_ms);
    tokens += static_cast<double>(r.totals.tokens);
    for (const auto& item : r.evidence.items()) {
      tool += static_cast<double>(item.token_cost);
      auto& [ms, n] = per_tool[item.tool_id];
      ms += static_cast<double>(item.elapsed_ms);
      ++n;
    }
    for (const auto& call : r.agent_calls) {
      if (call.phase == Phase::Debate) {
        debate += static_cast<double>(call.tokens());
      } else {
        reasoning += static_cast<double>(call.tokens());
      }
    }
  }
  const auto n = static_cast<double>(reports.size());
  c.avg_latency_ms = latency / n;
  c.avg_tokens = tokens / n;
  c.avg_tool_tokens = tool / n;
  c.avg_reasoning_tokens = reasoning / n;
  c.avg_debate_tokens = debate / n;
  for (const auto& [id, acc] : per_tool) c.avg_tool_ms[id] = acc.first / acc.second;
  return c;
}

nlohmann::json to_json(const CostReport& c) {
  nlohmann::json tools = nlohmann::json::object();
  for (const auto& [id, ms] : c.avg_tool_ms) tools[std::string(to_string(id))] = ms;
  return {{"cases", c.cases},
          {"avg_latency_ms", c.avg_latency_ms},
          {"avg_tokens", c.avg_tokens},
          {"breakdown",
           {{"tool_tokens", c.avg_tool_tokens},
            {"reasoning_tokens", c.avg_reasoning_tokens},
            {"debate_tokens", c.avg_debate_tokens}}},
          {"avg_tool_ms", tools}};
}

}  // namespace tribunal::bench
