#pragma once

#include "tribunal/agents/chat.hpp"
#include "tribunal/model.hpp"

namespace tribunal::toolbox {

std::string summarize_vlm(const VlmFinding& finding);

/// Sends the VLM prompt with the image attached (replay step "vlm"). An
/// unparseable answer gets one re-ask ("vlm.reask"); token_cost covers every
/// call made.
EvidenceItem run_vlm_analysis(const ImageCase& image, agents::ChatBackend& backend);

}  // namespace tribunal::toolbox
