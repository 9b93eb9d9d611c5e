#include "tribunal/toolbox/provider.hpp"

#include <fstream>

#include "tribunal/error.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::toolbox {

using nlohmann::json;

namespace {

bool host_matches(const std::string& host, const std::vector<std::string>& domains) {
  for (const auto& d : domains) {
    if (host == d) return true;
    if (host.size() > d.size() && host.compare(host.size() - d.size(), d.size(), d) == 0 &&
        host[host.size() - d.size() - 1] == '.') {
      return true;
    }
  }
  return false;
}

}  // namespace

DomainCatalog DomainCatalog::defaults() {
  DomainCatalog c;
  c.ai_platforms = {"lexica.art",      "nightcafe.studio", "civitai.com",   "midjourney.com",
                    "openart.ai",      "playgroundai.com", "playground.com", "leonardo.ai",
                    "tensor.art",      "seaart.ai",        "pixai.art",     "dreamstudio.ai",
                    "craiyon.com",     "starryai.com",     "prompthero.com", "krea.ai",
                    "ideogram.ai",     "getimg.ai",        "mage.space",    "novelai.net"};
  c.photo_sites = {"flickr.com",      "staticflickr.com", "unsplash.com",   "pexels.com",
                   "500px.com",       "shutterstock.com", "gettyimages.com", "istockphoto.com",
                   "alamy.com",       "wikimedia.org",    "pixabay.com",    "dreamstime.com",
                   "smugmug.com",     "photobucket.com"};
  c.news_sites = {"reuters.com",  "apnews.com",     "bbc.com",          "bbc.co.uk",
                  "nytimes.com",  "cnn.com",        "theguardian.com",  "washingtonpost.com",
                  "aljazeera.com", "npr.org",       "nbcnews.com",      "cbsnews.com",
                  "bloomberg.com", "nationalgeographic.com", "time.com", "usatoday.com",
                  "latimes.com"};
  c.ad_domains = {"googleadservices.com", "doubleclick.net", "googlesyndication.com",
                  "adservice.google.com"};
  return c;
}

Provenance DomainCatalog::classify(std::string_view url) const {
  const auto host = text::url_host(url);
  if (host.empty()) return Provenance::Unknown;
  if (host_matches(host, ai_platforms)) return Provenance::AiPlatform;
  if (host_matches(host, photo_sites)) return Provenance::PhotoSite;
  if (host_matches(host, news_sites)) return Provenance::NewsSite;
  return Provenance::Unknown;
}

bool DomainCatalog::is_ad_domain(std::string_view url) const {
  return host_matches(text::url_host(url), ad_domains);
}

SignalRules SignalRules::defaults() {
  return {{"Stable Diffusion", "Midjourney", "DALL-E", "DALL\xC2\xB7" "E", "DALLE", "NovelAI",
           "ComfyUI", "AUTOMATIC1111", "InvokeAI", "Fooocus", "Firefly", "Leonardo.Ai", "NightCafe",
           "Lexica", "Civitai", "DreamStudio", "gpt-image", "Ideogram", "Craiyon",
           "trainedAlgorithmicMedia", "AI Generated", "AI-generated", "Generated by AI"}};
}

EnsembleConfig EnsembleConfig::defaults() {
  EnsembleConfig c;
  c.model_ids = {"haywoodsloan/ai-image-detector-deploy", "Organika/sdxl-detector",
                 "legekka/AI-Anime-Image-Detector-ViT", "Smogy/SMOGY-Ai-images-detector",
                 "NYUAD-ComNets/NYUAD_AI-generated_images_detector"};
  c.weights.assign(c.model_ids.size(), 1.0);
  return c;
}

double EnsembleConfig::weight_of(std::string_view model_id) const {
  for (std::size_t i = 0; i < model_ids.size(); ++i) {
    if (model_ids[i] == model_id) return i < weights.size() ? weights[i] : 1.0;
  }
  return 1.0;
}

ToolboxConfig ToolboxConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open toolbox config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "invalid toolbox config " + path.string() + ": " + e.what());
  }
  ToolboxConfig cfg;
  if (j.contains("ai_tool_names")) cfg.signals.ai_tool_names = j["ai_tool_names"].get<std::vector<std::string>>();
  if (j.contains("domains")) {
    const auto& d = j["domains"];
    if (d.contains("ai_platforms")) cfg.domains.ai_platforms = d["ai_platforms"].get<std::vector<std::string>>();
    if (d.contains("photo_sites")) cfg.domains.photo_sites = d["photo_sites"].get<std::vector<std::string>>();
    if (d.contains("news_sites")) cfg.domains.news_sites = d["news_sites"].get<std::vector<std::string>>();
    if (d.contains("ad_domains")) cfg.domains.ad_domains = d["ad_domains"].get<std::vector<std::string>>();
  }
  if (j.contains("ensemble_models")) {
    cfg.ensemble.model_ids.clear();
    cfg.ensemble.weights.clear();
    for (const auto& m : j["ensemble_models"]) {
      cfg.ensemble.model_ids.push_back(m.at("id").get<std::string>());
      const double w = m.value("weight", 1.0);
      if (!(w > 0.0)) throw Error(ErrorCode::ConfigError, "ensemble weights must be positive");
      cfg.ensemble.weights.push_back(w);
    }
    if (cfg.ensemble.model_ids.empty()) {
      throw Error(ErrorCode::ConfigError, "ensemble_models must not be empty");
    }
  }
  return cfg;
}

ToolProvider ToolProvider::replay(std::filesystem::path fixture_root, ToolboxConfig config) {
  ToolProvider p;
  p.mode_ = ProviderMode::Replay;
  p.fixture_root_ = std::move(fixture_root);
  p.config_ = std::move(config);
  return p;
}

ToolProvider ToolProvider::live(LiveEndpoints endpoints, std::shared_ptr<HttpTransport> transport,
                                ToolboxConfig config) {
  if (!transport) throw Error(ErrorCode::ConfigError, "live provider needs a transport");
  ToolProvider p;
  p.mode_ = ProviderMode::Live;
  p.endpoints_ = std::move(endpoints);
  p.transport_ = std::move(transport);
  p.config_ = std::move(config);
  return p;
}

bool ToolProvider::has_fixture(const std::string& image_id, std::string_view name) const {
  return std::filesystem::exists(fixture_root_ / image_id / (std::string(name) + ".json"));
}

json ToolProvider::load_fixture(const std::string& image_id, std::string_view name) const {
  const auto path = fixture_root_ / image_id / (std::string(name) + ".json");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFixture, "no fixture " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MissingFixture, "malformed fixture " + path.string() + ": " + e.what());
  }
}

HttpResponse ToolProvider::send(const HttpRequest& request) const {
  if (mode_ != ProviderMode::Live || !transport_) {
    throw Error(ErrorCode::BackendUnavailable, "replay provider cannot reach " + request.url);
  }
  return transport_->send(request);
}

void ToolProvider::record_fixture(const std::string& image_id, std::string_view name,
                                  const json& body) const {
  if (!record_root_) return;
  std::lock_guard lock(*record_mu_);
  const auto dir = *record_root_ / image_id;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / (std::string(name) + ".json"));
  out << body.dump(2) << "\n";
}

}  // namespace tribunal::toolbox
