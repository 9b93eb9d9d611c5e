#include "tribunal/toolbox/metadata.hpp"

#include <fmt/format.h>
#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/text_util.hpp"

extern char** environ;

namespace tribunal::toolbox {

namespace {

// Fields whose presence indicates a physical capture device.
const std::set<std::string, std::less<>>& capture_fields() {
  static const std::set<std::string, std::less<>> k{
      "EXIF:Make",          "EXIF:Model",           "EXIF:LensModel",     "EXIF:LensInfo",
      "EXIF:LensSerialNumber", "EXIF:ExposureTime", "EXIF:FNumber",       "EXIF:ISO",
      "EXIF:FocalLength",   "EXIF:SerialNumber",    "EXIF:GPSLatitude",   "EXIF:GPSLongitude",
      "EXIF:GPSTimeStamp",  "Composite:GPSPosition", "Composite:Aperture", "Composite:ShutterSpeed",
      "Composite:LensID"};
  return k;
}

bool is_prompt_field(std::string_view name) {
  return name == "EXIF:UserComment" || name == "File:Comment";
}

bool is_software_field(std::string_view name) {
  return name == "EXIF:Software" || name == "XMP:CreatorTool";
}

bool looks_like_prompt(std::string_view value) {
  static constexpr std::array<std::string_view, 6> kGenerationKeys{
      "negative prompt", "steps:", "sampler:", "cfg scale", "seed:", "prompt:"};
  for (auto k : kGenerationKeys) {
    if (text::contains_icase(value, k)) return true;
  }
  int words = 0;
  bool in_word = false;
  for (char c : value) {
    const bool alpha = std::isalpha(static_cast<unsigned char>(c)) != 0;
    if (alpha && !in_word) ++words;
    in_word = alpha;
  }
  return words >= 3;
}

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& e : v) parts.push_back(value_text(e));
    return text::join(parts, ", ");
  }
  if (v.is_null()) return "";
  return v.dump();
}

std::string read_all(int fd) {
  std::string out;
  std::array<char, 4096> buf{};
  for (;;) {
    const auto n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
      out.append(buf.data(), static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& key_field_exact() {
  static const std::vector<std::string> k{
      "XMP:CreatorTool",       "EXIF:Software",
      "EXIF:UserComment",      "File:Comment",
      "XMP:Description",       "XMP:Title",
      "XMP:Rights",            "XMP:Source",
      "EXIF:Make",             "EXIF:Model",
      "EXIF:LensModel",        "EXIF:LensInfo",
      "EXIF:LensSerialNumber", "EXIF:ExposureTime",
      "EXIF:FNumber",          "EXIF:ISO",
      "EXIF:FocalLength",      "EXIF:SerialNumber",
      "EXIF:GPSLatitude",      "EXIF:GPSLongitude",
      "EXIF:GPSTimeStamp",     "EXIF:DateTimeOriginal",
      "EXIF:CreateDate",       "Composite:GPSPosition",
      "Composite:Aperture",    "Composite:ShutterSpeed",
      "Composite:LensID",      "ICC_Profile:ProfileDescription",
      "ICC_Profile:ProfileCopyright", "IPTC:DocumentNotes",
      "IPTC:ApplicationRecordVersion"};
  return k;
}

const std::vector<std::string>& key_field_prefixes() {
  static const std::vector<std::string> k{"MakerNotes:", "JUMBF:", "MPF:"};
  return k;
}

bool keep_field(std::string_view name) {
  const auto& exact = key_field_exact();
  if (std::find(exact.begin(), exact.end(), name) != exact.end()) return true;
  return std::any_of(key_field_prefixes().begin(), key_field_prefixes().end(),
                     [&](const std::string& p) { return name.starts_with(p); });
}

SignalClass classify_signal(std::string_view field_name, std::string_view value, const SignalRules& rules) {
  if (field_name.starts_with("JUMBF:")) return SignalClass::AiSignal;
  const auto v = text::trim(value);
  if (v.empty()) return SignalClass::Neutral;
  for (const auto& tool : rules.ai_tool_names) {
    if (!tool.empty() && text::contains_icase(v, tool)) return SignalClass::AiSignal;
  }
  if (is_software_field(field_name)) return SignalClass::Neutral;
  if (is_prompt_field(field_name)) return looks_like_prompt(v) ? SignalClass::AiSignal : SignalClass::Neutral;
  if (field_name.starts_with("MakerNotes:") || capture_fields().contains(field_name)) {
    return SignalClass::RealSignal;
  }
  return SignalClass::Neutral;
}

FieldMap flatten_extractor_output(const json& doc) {
  const json* obj = &doc;
  if (doc.is_array()) {
    if (doc.empty()) return {};
    obj = &doc[0];
  }
  FieldMap out;
  if (!obj->is_object()) return out;
  for (const auto& [k, v] : obj->items()) {
    if (k == "SourceFile") continue;
    out[k] = value_text(v);
  }
  return out;
}

MetadataFinding filter_metadata(const FieldMap& all, const SignalRules& rules) {
  MetadataFinding f;
  for (const auto& [k, v] : all) {
    if (keep_field(k)) f.fields_kept.emplace(k, v);
  }
  for (const auto& [k, v] : f.fields_kept) f.signals.push_back({k, classify_signal(k, v, rules)});
  return f;
}

std::string summarize_metadata(const MetadataFinding& finding) {
  if (finding.fields_kept.empty()) return "No relevant metadata fields were found in the file.";
  int real = 0;
  int ai = 0;
  for (const auto& s : finding.signals) {
    real += s.signal == SignalClass::RealSignal;
    ai += s.signal == SignalClass::AiSignal;
  }
  std::string out = fmt::format(
      "Kept {} metadata field(s): {} camera/capture signal(s), {} AI-generation signal(s).",
      finding.fields_kept.size(), real, ai);
  for (const auto& s : finding.signals) {
    std::string value = finding.fields_kept.at(s.field_name);
    if (value.size() > 300) value = value.substr(0, 300) + "...";
    out += fmt::format("\n- {}: {} [{}]", s.field_name, value, to_string(s.signal));
  }
  return out;
}

std::string run_extractor(const std::string& binary, const std::vector<std::string>& args,
                          const std::filesystem::path& file) {
  int fds[2];
  if (::pipe(fds) != 0) throw Error(ErrorCode::IoError, "pipe failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

  std::vector<std::string> argv_store{binary};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  argv_store.push_back(file.string());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, binary.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw Error(ErrorCode::BackendUnavailable,
                fmt::format("cannot start extractor '{}': {}", binary, std::strerror(rc)));
  }
  auto out = read_all(fds[0]);
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(ErrorCode::BackendUnavailable, fmt::format("extractor '{}' failed", binary));
  }
  return out;
}

EvidenceItem extract_metadata(const ImageCase& image, const ToolProvider& provider) {
  try {
    json doc;
    if (provider.mode() == ProviderMode::Replay) {
      if (provider.has_fixture(image.id, "metadata")) {
        doc = provider.load_fixture(image.id, "metadata");
      } else {
        auto sidecar = image.path;
        sidecar += ".meta.json";
        std::ifstream in(sidecar);
        if (!in) throw Error(ErrorCode::MissingFixture, "no metadata fixture for " + image.id);
        doc = json::parse(in);
      }
    } else {
      std::error_code ec;
      if (!std::filesystem::is_regular_file(image.path, ec)) {
        throw Error(ErrorCode::UnreadableFile, "cannot read " + image.path.string());
      }
      const auto& ep = provider.endpoints();
      doc = json::parse(run_extractor(ep.extractor_binary, ep.extractor_args, image.path));
      provider.record_fixture(image.id, "metadata", doc);
    }
    auto finding = filter_metadata(flatten_extractor_output(doc), provider.config().signals);
    EvidenceItem item;
    item.tool_id = ToolId::Metadata;
    item.validity = finding.fields_kept.empty() ? Validity::Empty : Validity::Valid;
    item.summary_text = summarize_metadata(finding);
    item.payload = std::move(finding);
    return item;
  } catch (const std::exception& e) {
    return make_error_item(ToolId::Metadata, e.what());
  }
}

}  // namespace tribunal::toolbox
