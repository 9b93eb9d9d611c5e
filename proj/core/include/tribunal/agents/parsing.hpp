#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tribunal/model.hpp"

namespace tribunal::agents {

/// First standalone "true"/"false" (any case) in the reply.
std::optional<bool> parse_bool_token(std::string_view reply);

struct ParsedVerdict {
  bool is_ai_generated = false;
  std::string details;
};

/// Accepts JSON, JSON-like objects and numbered "field: value" lists, with
/// arbitrary prose around them. Needs an is_ai_generated boolean; details fall
/// back to the whole reply when no analysis_details/details field is present.
std::optional<ParsedVerdict> parse_verdict(std::string_view reply);

/// Free-text answer to the VLM prompt. Needs a recognisable classification;
/// confidence defaults to low when not stated.
std::optional<VlmFinding> parse_vlm_response(std::string_view reply);

}  // namespace tribunal::agents
