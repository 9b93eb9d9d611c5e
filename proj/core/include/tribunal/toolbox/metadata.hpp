#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tribunal/model.hpp"
#include "tribunal/toolbox/provider.hpp"

namespace tribunal::toolbox {

using FieldMap = std::map<std::string, std::string>;

const std::vector<std::string>& key_field_exact();
const std::vector<std::string>& key_field_prefixes();

/// True iff the field is on the exact list or starts with a kept prefix.
bool keep_field(std::string_view name);

SignalClass classify_signal(std::string_view field_name, std::string_view value,
                            const SignalRules& rules = SignalRules::defaults());

/// Flattens extractor output (ExifTool -j -G style: an array holding one
/// object, or a plain object) into "Group:Tag" -> text.
FieldMap flatten_extractor_output(const nlohmann::json& doc);

MetadataFinding filter_metadata(const FieldMap& all, const SignalRules& rules);
std::string summarize_metadata(const MetadataFinding& finding);

/// Runs the extractor binary on a file and returns its stdout.
std::string run_extractor(const std::string& binary, const std::vector<std::string>& args,
                          const std::filesystem::path& file);

// Replay reads fixtures/<id>/metadata.json, falling back to a pre-extracted
// <image>.meta.json next to the image.
EvidenceItem extract_metadata(const ImageCase& image, const ToolProvider& provider);

}  // namespace tribunal::toolbox
