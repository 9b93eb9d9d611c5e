#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tribunal/bench/manifest.hpp"
#include "tribunal/memory/knowledge_base.hpp"
#include "tribunal/memory/memory_tool.hpp"
#include "tribunal/orchestrator.hpp"

namespace tribunal::bench {

struct KbBuildResult {
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t placeholder_reflections = 0;
  std::vector<std::string> skipped;  // detection or embedding failed
};

/// Detects every labeled entry with memory disabled, records the outcome with
/// its embedding and, for failures, a reflection. Entries are upserted by id,
/// so rebuilding over the same manifest leaves the store unchanged.
KbBuildResult build_knowledge_base(const Manifest& manifest, PipelineConfig config, const Providers& providers,
                                   const memory::EmbedProvider& embedder, memory::KnowledgeBase& kb);

/// Loads an existing store from dir (or starts empty), builds into it and saves.
KbBuildResult build_knowledge_base(const Manifest& manifest, const PipelineConfig& config,
                                   const Providers& providers, const memory::EmbedProvider& embedder,
                                   const std::filesystem::path& dir, memory::RetrievalParams params = {});

}  // namespace tribunal::bench
