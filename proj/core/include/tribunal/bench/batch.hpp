#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tribunal/bench/attack.hpp"
#include "tribunal/bench/cost.hpp"
#include "tribunal/bench/manifest.hpp"
#include "tribunal/bench/metrics.hpp"
#include "tribunal/bench/perturb.hpp"
#include "tribunal/orchestrator.hpp"

namespace tribunal::bench {

struct BatchOptions {
  std::filesystem::path out_dir;
  int jobs = 1;
  bool resume = false;  // reuse reports already present in out_dir/reports
  std::optional<PerturbKind> perturb;
  PerturbParams perturb_params;
  std::optional<AttackKind> attack;
  std::optional<ToolId> ablate;
};

struct BatchResult {
  std::vector<CaseReport> reports;  // manifest order
  Evaluation evaluation;
  ToolStats tool_stats;
  CostReport cost;
  std::size_t resumed = 0;
  std::size_t failed = 0;
  nlohmann::json summary;
};

/// File name used for a case's report under reports/.
std::string report_file_name(const std::string& case_id);

/// Metadata blocks of every labeled entry, produced by the metadata tool.
ForgeryPool build_forgery_pool(const Manifest& manifest, const toolbox::Tool& metadata_tool);

/// Runs detection over a labeled manifest and writes reports/<id>.json,
/// summary.json and confusion.csv (plus perturbed/ images) under out_dir.
/// Per-case failures are recorded as failed reports and the run continues.
BatchResult run_batch(const Manifest& manifest, PipelineConfig config, Providers providers,
                      const BatchOptions& options);

}  // namespace tribunal::bench
