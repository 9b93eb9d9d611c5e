#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tribunal/agents/chat.hpp"
#include "tribunal/memory/knowledge_base.hpp"
#include "tribunal/toolbox/sidecar_client.hpp"
#include "tribunal/toolbox/toolbox.hpp"

namespace tribunal::memory {

class EmbedProvider {
 public:
  virtual ~EmbedProvider() = default;
  /// 512 values; throws tribunal::Error on failure.
  virtual std::vector<double> embed(const ImageCase& image) const = 0;
};

// fixtures/<id>/embedding.json: {"vector": [512 reals]}
class ReplayEmbedProvider final : public EmbedProvider {
 public:
  explicit ReplayEmbedProvider(std::filesystem::path fixture_root) : root_(std::move(fixture_root)) {}
  std::vector<double> embed(const ImageCase& image) const override;

 private:
  std::filesystem::path root_;
};

class SidecarEmbedProvider final : public EmbedProvider {
 public:
  explicit SidecarEmbedProvider(toolbox::SidecarClient client) : client_(std::move(client)) {}
  std::vector<double> embed(const ImageCase& image) const override;

 private:
  toolbox::SidecarClient client_;
};

std::string summarize_memory(const MemoryFinding& finding);

// Retrieves past cases similar to the image and renders them as evidence.
class MemoryTool final : public toolbox::Tool {
 public:
  MemoryTool(std::shared_ptr<const KnowledgeBase> kb, std::shared_ptr<const EmbedProvider> embedder);

  [[nodiscard]] ToolId id() const noexcept override { return ToolId::Memory; }

 protected:
  EvidenceItem invoke(const ImageCase& image) const override;

 private:
  std::shared_ptr<const KnowledgeBase> kb_;
  std::shared_ptr<const EmbedProvider> embedder_;
};

struct Reflection {
  std::string text;
  bool machine_generated = true;
};

/// Post-mortem for a misclassified case (replay step "reflection"). If the
/// backend fails a placeholder is returned with machine_generated=false.
/// Throws Error{PreconditionViolation} for a case that is not a failure.
Reflection generate_reflection(const MemoryCase& failed, agents::AgentSession& session);

}  // namespace tribunal::memory
