#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tribunal/model.hpp"

namespace tribunal::toolbox {

// Domain lists used to digest search results into a provenance hint.
struct DomainCatalog {
  std::vector<std::string> ai_platforms;
  std::vector<std::string> photo_sites;
  std::vector<std::string> news_sites;
  std::vector<std::string> ad_domains;

  static DomainCatalog defaults();
  /// Category of a page by host suffix match; Unknown if no list matches.
  [[nodiscard]] Provenance classify(std::string_view url) const;
  [[nodiscard]] bool is_ad_domain(std::string_view url) const;
};

struct SignalRules {
  // Case-insensitive substrings; a Software/CreatorTool value or any
  // descriptive text containing one of these is an AI signal.
  std::vector<std::string> ai_tool_names;

  static SignalRules defaults();
};

struct EnsembleConfig {
  std::vector<std::string> model_ids;
  std::vector<double> weights;  // parallel to model_ids

  static EnsembleConfig defaults();
  [[nodiscard]] double weight_of(std::string_view model_id) const;
};

struct ToolboxConfig {
  DomainCatalog domains = DomainCatalog::defaults();
  SignalRules signals = SignalRules::defaults();
  EnsembleConfig ensemble = EnsembleConfig::defaults();

  /// Loads a JSON config file; keys that are absent keep their defaults.
  static ToolboxConfig load(const std::filesystem::path& path);
};

}  // namespace tribunal::toolbox
