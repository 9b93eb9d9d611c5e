#include "tribunal/bench/manifest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "tribunal/error.hpp"
#include "tribunal/http.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::bench {

using nlohmann::json;

std::string_view to_string(Setting s) { return s == Setting::InTheLab ? "in_the_lab" : "in_the_wild"; }

const ManifestEntry* Manifest::find(std::string_view id) const {
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.id == id; });
  return it == entries.end() ? nullptr : &*it;
}

bool Manifest::fully_labeled() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.label.has_value(); });
}

Manifest parse_manifest(std::string_view jsonl, const std::filesystem::path& base_dir, bool check_paths) {
  Manifest m;
  std::set<std::string> ids;
  int line_no = 0;
  for (const auto& raw : text::split_lines(jsonl)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto bad = [&](std::string_view why) {
      return Error(ErrorCode::ConfigError, fmt::format("manifest line {}: {}", line_no, why));
    };
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw bad("not a JSON object");
    if (!j.contains("path") || !j["path"].is_string()) throw bad("missing \"path\"");

    ManifestEntry e;
    e.path = j["path"].get<std::string>();
    if (e.path.is_relative()) e.path = base_dir / e.path;
    e.id = j.contains("id") ? j["id"].get<std::string>() : e.path.stem().string();
    if (j.contains("label") && !j["label"].is_null()) {
      e.label = parse_label(j["label"].get<std::string>());
      if (!e.label) throw bad("label must be \"ai\" or \"real\"");
    }
    const auto setting = j.value("setting", "in_the_lab");
    if (setting == "in_the_lab") {
      e.setting = Setting::InTheLab;
    } else if (setting == "in_the_wild") {
      e.setting = Setting::InTheWild;
    } else {
      throw bad("setting must be in_the_lab or in_the_wild");
    }
    e.source_tag = j.value("source_tag", "");
    if (!ids.insert(e.id).second) throw bad("duplicate id " + e.id);
    if (check_paths && !std::filesystem::is_regular_file(e.path)) {
      throw Error(ErrorCode::UnreadableFile, fmt::format("manifest line {}: no image at {}", line_no, e.path.string()));
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::string content;
  try {
    content = read_file_bytes(path.string());
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("cannot read manifest: ") + e.what());
  }
  return parse_manifest(content, path.parent_path());
}

void require_labels(const Manifest& m) {
  for (const auto& e : m.entries) {
    if (!e.label) throw Error(ErrorCode::ConfigError, "manifest entry " + e.id + " has no label");
  }
}

}  // namespace tribunal::bench
