#include "tribunal/toolbox/reverse_search.hpp"

#include <fmt/format.h>

#include <array>
#include <map>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::toolbox {

namespace {

bool is_noise_line(std::string_view line) {
  const auto t = text::trim(line);
  if (t.empty()) return true;
  static constexpr std::array<std::string_view, 5> kMarkers{"ad ", "ad\xc2\xb7", "ad:", "sponsored",
                                                            "advertisement"};
  for (auto m : kMarkers) {
    if (text::starts_with_icase(t, m)) return true;
  }
  return text::to_lower(t) == "ad";
}

bool is_ad_url(std::string_view url, const DomainCatalog& domains) {
  return domains.is_ad_domain(url) || url.find("/aclk?") != std::string_view::npos;
}

std::string_view provenance_phrase(Provenance p) {
  switch (p) {
    case Provenance::AiPlatform: return "AI image generation platform";
    case Provenance::PhotoSite: return "photo sharing or stock photography site";
    case Provenance::NewsSite: return "news site";
    case Provenance::Unknown: break;
  }
  return "no recognised category";
}

std::vector<SearchPage> pages_from_json(const json& arr) {
  std::vector<SearchPage> pages;
  if (!arr.is_array()) return pages;
  for (const auto& p : arr) {
    pages.push_back({p.value("title", ""), p.value("url", ""), p.value("snippet", "")});
  }
  return pages;
}

// Cloud Vision web detection: pages carrying a full-resolution copy of the
// image count as exact matches.
json vision_web_detection(const ImageCase& image, const ToolProvider& provider) {
  const auto& ep = provider.endpoints();
  if (ep.web_detection_url.empty()) {
    throw Error(ErrorCode::BackendUnavailable, "no web detection endpoint configured");
  }
  json body = {{"requests",
                {{{"image", {{"content", base64_encode(read_file_bytes(image.path.string()))}}},
                  {"features", {{{"type", "WEB_DETECTION"}, {"maxResults", 20}}}}}}}};
  HttpRequest req;
  req.url = ep.web_detection_url;
  if (!ep.web_detection_key.empty()) req.url += "?key=" + ep.web_detection_key;
  req.body = body.dump();
  req.timeout = ep.timeout;
  const auto resp = provider.send(req);
  if (!resp.ok()) {
    throw Error(ErrorCode::BackendUnavailable,
                fmt::format("web detection returned {} {}", resp.status, resp.error));
  }
  json out = {{"pages", json::array()}};
  const auto parsed = json::parse(resp.body, nullptr, false);
  if (parsed.is_discarded()) throw Error(ErrorCode::BackendUnavailable, "web detection sent invalid JSON");
  const auto& responses = parsed.value("responses", json::array());
  if (responses.empty()) return out;
  const auto& web = responses[0].value("webDetection", json::object());
  for (const auto& page : web.value("pagesWithMatchingImages", json::array())) {
    if (!page.contains("fullMatchingImages")) continue;
    out["pages"].push_back({{"title", page.value("pageTitle", "")},
                            {"url", page.value("url", "")},
                            {"snippet", ""}});
  }
  return out;
}

json similar_search(const ImageCase& image, const ToolProvider& provider) {
  const auto& ep = provider.endpoints();
  if (ep.similar_search_url.empty()) {
    throw Error(ErrorCode::BackendUnavailable, "no similar-image search endpoint configured");
  }
  HttpRequest req;
  req.url = ep.similar_search_url;
  req.body = json{{"image_b64", base64_encode(read_file_bytes(image.path.string()))}}.dump();
  req.timeout = ep.timeout;
  const auto resp = provider.send(req);
  if (!resp.ok()) {
    throw Error(ErrorCode::BackendUnavailable,
                fmt::format("similar search returned {} {}", resp.status, resp.error));
  }
  auto parsed = json::parse(resp.body, nullptr, false);
  if (parsed.is_discarded()) throw Error(ErrorCode::BackendUnavailable, "similar search sent invalid JSON");
  return parsed;
}

json fetch(const ImageCase& image, const ToolProvider& provider, ToolId tool) {
  const auto name = to_string(tool);
  if (provider.mode() == ProviderMode::Replay) return provider.load_fixture(image.id, name);
  auto body = tool == ToolId::ReverseExact ? vision_web_detection(image, provider)
                                           : similar_search(image, provider);
  provider.record_fixture(image.id, name, body);
  return body;
}

}  // namespace

Provenance majority_provenance(const std::vector<SearchPage>& pages, const DomainCatalog& domains) {
  std::map<Provenance, int> votes;
  for (const auto& p : pages) {
    const auto cat = domains.classify(p.url);
    if (cat != Provenance::Unknown) ++votes[cat];
  }
  Provenance best = Provenance::Unknown;
  int best_count = 0;
  bool tied = false;
  for (const auto& [cat, n] : votes) {
    if (n > best_count) {
      best = cat;
      best_count = n;
      tied = false;
    } else if (n == best_count) {
      tied = true;
    }
  }
  return tied ? Provenance::Unknown : best;
}

std::vector<SearchPage> strip_noise(std::vector<SearchPage> pages, const DomainCatalog& domains) {
  std::vector<SearchPage> kept;
  for (auto& p : pages) {
    if (is_ad_url(p.url, domains)) continue;
    if (is_noise_line(p.title)) p.title.clear();
    std::vector<std::string> lines;
    for (auto& line : text::split_lines(p.snippet)) {
      if (!is_noise_line(line)) lines.push_back(text::trim(line));
    }
    p.snippet = text::join(lines, "\n");
    if (p.title.empty() && p.snippet.empty()) continue;
    kept.push_back(std::move(p));
  }
  return kept;
}

std::string summarize_reverse_search(const ReverseSearchFinding& finding) {
  if (finding.pages.empty()) return "No matching or similar images were found online.";
  std::string out;
  if (finding.match_kind == MatchKind::Exact) {
    out = fmt::format("Found {} web page(s) containing an exact match of the image.", finding.pages.size());
  } else {
    out = fmt::format("Found {} web page(s) containing visually similar images.", finding.pages.size());
  }
  out += fmt::format(" Most recognised sources: {} (provenance hint: {}).",
                     provenance_phrase(finding.provenance_hint), to_string(finding.provenance_hint));
  int n = 0;
  for (const auto& p : finding.pages) {
    out += fmt::format("\n{}. {} ({})", ++n, p.title.empty() ? "(untitled page)" : p.title,
                       text::url_host(p.url).empty() ? p.url : text::url_host(p.url));
    if (!p.snippet.empty()) out += ": " + p.snippet;
  }
  return out;
}

EvidenceItem reverse_search_item(ToolId tool, ReverseSearchFinding finding) {
  EvidenceItem item;
  item.tool_id = tool;
  if (finding.pages.empty()) {
    finding.match_kind = MatchKind::None;
    finding.provenance_hint = Provenance::Unknown;
    item.validity = Validity::Empty;
  } else {
    item.validity = Validity::Valid;
  }
  item.summary_text = summarize_reverse_search(finding);
  item.payload = std::move(finding);
  return item;
}

EvidenceItem reverse_search_exact(const ImageCase& image, const ToolProvider& provider) {
  try {
    const auto body = fetch(image, provider, ToolId::ReverseExact);
    const auto& domains = provider.config().domains;
    ReverseSearchFinding f;
    f.pages = strip_noise(pages_from_json(body.value("pages", json::array())), domains);
    f.match_kind = f.pages.empty() ? MatchKind::None : MatchKind::Exact;
    f.provenance_hint = majority_provenance(f.pages, domains);
    return reverse_search_item(ToolId::ReverseExact, std::move(f));
  } catch (const std::exception& e) {
    return make_error_item(ToolId::ReverseExact, e.what());
  }
}

EvidenceItem reverse_search_similar(const ImageCase& image, const ToolProvider& provider) {
  try {
    const auto body = fetch(image, provider, ToolId::ReverseSimilar);
    const auto& domains = provider.config().domains;
    const auto entries = body.value("entries", json::array());
    ReverseSearchFinding f;
    f.pages = strip_noise(pages_from_json(entries), domains);
    bool any_exact = false;
    for (const auto& e : entries) {
      if (e.value("match", "similar") == "exact" && !is_ad_url(e.value("url", ""), domains)) any_exact = true;
    }
    if (f.pages.empty()) {
      f.match_kind = MatchKind::None;
    } else {
      f.match_kind = any_exact ? MatchKind::Exact : MatchKind::Similar;
    }
    f.provenance_hint = majority_provenance(f.pages, domains);
    return reverse_search_item(ToolId::ReverseSimilar, std::move(f));
  } catch (const std::exception& e) {
    return make_error_item(ToolId::ReverseSimilar, e.what());
  }
}

}  // namespace tribunal::toolbox
