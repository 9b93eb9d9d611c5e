#include "tribunal/toolbox/toolbox.hpp"

#include <chrono>

#include "tribunal/error.hpp"
#include "tribunal/toolbox/ensemble.hpp"
#include "tribunal/toolbox/metadata.hpp"
#include "tribunal/toolbox/reverse_search.hpp"
#include "tribunal/toolbox/vlm.hpp"

namespace tribunal::toolbox {

EvidenceItem Tool::run(const ImageCase& image) const {
  const auto start = std::chrono::steady_clock::now();
  EvidenceItem item;
  try {
    item = invoke(image);
    item.tool_id = id();
  } catch (const std::exception& e) {
    item = make_error_item(id(), e.what());
  } catch (...) {
    item = make_error_item(id(), "unknown tool failure");
  }
  item.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return item;
}

Toolbox make_standard_toolbox(std::shared_ptr<const ToolProvider> provider,
                              std::shared_ptr<agents::ChatBackend> chat) {
  if (!provider) throw Error(ErrorCode::ConfigError, "toolbox needs a provider");
  if (!chat) throw Error(ErrorCode::ConfigError, "toolbox needs a chat backend for the VLM tool");
  Toolbox box;
  auto add = [&](ToolId id, FunctionTool::Fn fn) { box[id] = std::make_shared<FunctionTool>(id, std::move(fn)); };
  add(ToolId::ReverseExact, [provider](const ImageCase& img) { return reverse_search_exact(img, *provider); });
  add(ToolId::ReverseSimilar, [provider](const ImageCase& img) { return reverse_search_similar(img, *provider); });
  add(ToolId::Metadata, [provider](const ImageCase& img) { return extract_metadata(img, *provider); });
  add(ToolId::Ensemble, [provider](const ImageCase& img) { return run_classifier_ensemble(img, *provider); });
  add(ToolId::Vlm, [chat](const ImageCase& img) { return run_vlm_analysis(img, *chat); });
  return box;
}

}  // namespace tribunal::toolbox
