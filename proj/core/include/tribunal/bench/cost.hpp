#pragma once

#include <map>
#include <span>

#include <nlohmann/json.hpp>

#include "tribunal/model.hpp"

namespace tribunal::bench {

struct CostReport {
  std::size_t cases = 0;
  double avg_latency_ms = 0.0;
  double avg_tokens = 0.0;
  double avg_tool_tokens = 0.0;       // token_cost of evidence items (the VLM tool)
  double avg_reasoning_tokens = 0.0;  // sufficiency check and direct decision
  double avg_debate_tokens = 0.0;     // debaters and judge
  std::map<ToolId, double> avg_tool_ms;  // over cases where the tool ran
};

/// Arithmetic means over all reports; an empty span gives zeros.
CostReport cost_report(std::span<const CaseReport> reports);

nlohmann::json to_json(const CostReport& c);

}  // namespace tribunal::bench
