#pragma once

#include <functional>
#include <map>
#include <memory>

#include "tribunal/agents/chat.hpp"
#include "tribunal/model.hpp"
#include "tribunal/toolbox/provider.hpp"

namespace tribunal::toolbox {

// One forensic tool. run() never throws: failures come back as an item with
// validity=error, and elapsed_ms is filled in here.
class Tool {
 public:
  virtual ~Tool() = default;

  [[nodiscard]] virtual ToolId id() const noexcept = 0;
  EvidenceItem run(const ImageCase& image) const;

 protected:
  virtual EvidenceItem invoke(const ImageCase& image) const = 0;
};

// Adapts a plain function; handy for tests and custom tools.
class FunctionTool final : public Tool {
 public:
  using Fn = std::function<EvidenceItem(const ImageCase&)>;
  FunctionTool(ToolId id, Fn fn) : id_(id), fn_(std::move(fn)) {}

  [[nodiscard]] ToolId id() const noexcept override { return id_; }

 protected:
  EvidenceItem invoke(const ImageCase& image) const override { return fn_(image); }

 private:
  ToolId id_;
  Fn fn_;
};

using Toolbox = std::map<ToolId, std::shared_ptr<const Tool>>;

/// The five standard tools: both reverse searches, metadata and the ensemble
/// over the provider, and the VLM over the chat backend.
Toolbox make_standard_toolbox(std::shared_ptr<const ToolProvider> provider,
                              std::shared_ptr<agents::ChatBackend> chat);

}  // namespace tribunal::toolbox
