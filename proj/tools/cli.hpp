#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tribunal/memory/memory_tool.hpp"
#include "tribunal/orchestrator.hpp"

namespace tribunal::cli {

enum class Mode { Replay, Live };

// One source of settings (config file, environment or flags). Unset fields
// fall through to the next source down.
struct ConfigLayer {
  std::optional<Mode> mode;
  std::optional<std::filesystem::path> fixtures;
  std::optional<std::filesystem::path> conversations;
  std::optional<std::filesystem::path> kb_dir;
  std::optional<std::filesystem::path> toolbox_config;
  std::optional<std::string> chat_url;
  std::optional<std::string> api_key;
  std::optional<std::string> chat_model;
  std::optional<std::string> sidecar_url;
  std::optional<std::string> vision_url;
  std::optional<std::string> vision_key;
  std::optional<std::string> similar_url;
  std::optional<bool> debate;
  std::optional<bool> memory;
  std::optional<int> max_rounds;
  std::optional<int> tool_timeout_ms;

  [[nodiscard]] bool has_live_endpoint() const;
};

struct CliConfig {
  Mode mode = Mode::Replay;
  std::filesystem::path fixtures = "fixtures";
  std::filesystem::path conversations = "conversations";
  std::optional<std::filesystem::path> kb_dir;
  std::optional<std::filesystem::path> toolbox_config;
  std::string chat_url;
  std::string api_key;
  std::string chat_model = "gpt-4.1";
  std::string sidecar_url;
  std::string vision_url;
  std::string vision_key;
  std::string similar_url;
  PipelineConfig pipeline;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Keys: mode, fixtures, conversations, kb_dir, toolbox_config,
/// chat{url, api_key, model}, sidecar_url, vision{url, key},
/// similar_search_url, debate, memory, max_rounds, tool_timeout_ms.
/// Relative paths resolve against the file's directory.
ConfigLayer load_config_file(const std::filesystem::path& path);

/// TRIBUNAL_CHAT_URL, TRIBUNAL_API_KEY, TRIBUNAL_CHAT_MODEL,
/// TRIBUNAL_SIDECAR_URL, TRIBUNAL_VISION_URL, TRIBUNAL_VISION_KEY.
ConfigLayer config_from_env(const EnvLookup& env);

/// Precedence flags > environment > file. In replay mode a live endpoint set
/// by flag or config file is an Error{ConfigError}; endpoints coming only
/// from the environment are ignored.
CliConfig resolve_config(const ConfigLayer& file, const ConfigLayer& env, const ConfigLayer& flags);

struct Runtime {
  Providers providers;
  std::shared_ptr<const memory::EmbedProvider> embedder;
};

/// Wires providers for the resolved mode. Memory is attached when the
/// pipeline enables it (requires kb_dir).
Runtime make_runtime(const CliConfig& config);

/// Entry point shared by main() and the tests. Returns 0 on success, 1 on
/// operational or configuration errors and 2 when an agent failed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env);

}  // namespace tribunal::cli
