#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tribunal/http.hpp"
#include "tribunal/toolbox/config.hpp"

namespace tribunal::toolbox {

enum class ProviderMode { Live, Replay };

struct LiveEndpoints {
  std::string web_detection_url;  // Cloud Vision images:annotate style endpoint
  std::string web_detection_key;
  std::string similar_search_url;  // adapter returning the similar-search fixture schema
  std::string sidecar_url;         // inference sidecar base URL (/classify, /embed, /health)
  std::string extractor_binary = "exiftool";
  std::vector<std::string> extractor_args{"-j", "-G"};
  std::chrono::milliseconds timeout{60'000};
};

// Backend access for the forensic tools. Replay providers answer from
// fixtures/<image_id>/<tool_id>.json and never touch the transport. Live
// providers can optionally write what they receive back out as fixtures.
class ToolProvider {
 public:
  static ToolProvider replay(std::filesystem::path fixture_root, ToolboxConfig config = {});
  static ToolProvider live(LiveEndpoints endpoints, std::shared_ptr<HttpTransport> transport,
                           ToolboxConfig config = {});

  [[nodiscard]] ProviderMode mode() const noexcept { return mode_; }
  [[nodiscard]] const std::filesystem::path& fixture_root() const noexcept { return fixture_root_; }
  [[nodiscard]] const LiveEndpoints& endpoints() const noexcept { return endpoints_; }
  [[nodiscard]] const ToolboxConfig& config() const noexcept { return config_; }
  [[nodiscard]] const std::shared_ptr<HttpTransport>& transport() const noexcept { return transport_; }

  /// Throws Error{MissingFixture} when the file is absent or malformed.
  [[nodiscard]] nlohmann::json load_fixture(const std::string& image_id, std::string_view name) const;
  [[nodiscard]] bool has_fixture(const std::string& image_id, std::string_view name) const;

  /// Live mode only; throws Error{BackendUnavailable} in replay mode.
  HttpResponse send(const HttpRequest& request) const;

  void set_record_root(std::filesystem::path root) { record_root_ = std::move(root); }
  void record_fixture(const std::string& image_id, std::string_view name,
                      const nlohmann::json& body) const;

 private:
  ToolProvider() = default;

  ProviderMode mode_ = ProviderMode::Replay;
  std::filesystem::path fixture_root_;
  LiveEndpoints endpoints_;
  ToolboxConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::optional<std::filesystem::path> record_root_;
  std::shared_ptr<std::mutex> record_mu_ = std::make_shared<std::mutex>();
};

}  // namespace tribunal::toolbox
