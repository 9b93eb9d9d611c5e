#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tribunal/model.hpp"

namespace tribunal::bench {

enum class Setting { InTheLab, InTheWild };
std::string_view to_string(Setting s);

struct ManifestEntry {
  std::string id;  // defaults to the file stem
  std::filesystem::path path;
  std::optional<Label> label;
  Setting setting = Setting::InTheLab;
  std::string source_tag;

  [[nodiscard]] ImageCase to_case() const { return {id, path, label, source_tag}; }
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  [[nodiscard]] const ManifestEntry* find(std::string_view id) const;
  [[nodiscard]] bool fully_labeled() const;
};

/// JSON Lines: {"path", "label": "ai"|"real", "setting": "in_the_lab"|
/// "in_the_wild", "source_tag", "id"?}. Relative paths resolve against the
/// manifest's directory. Throws Error{ConfigError} for malformed lines or
/// duplicate ids and Error{UnreadableFile} for missing images.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view jsonl, const std::filesystem::path& base_dir, bool check_paths = true);

/// Throws Error{ConfigError} naming the first entry without a label.
void require_labels(const Manifest& m);

}  // namespace tribunal::bench
