#include "tribunal/toolbox/sidecar_client.hpp"

#include <fmt/format.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "tribunal/error.hpp"

namespace tribunal::toolbox {

using nlohmann::json;

namespace {

constexpr std::size_t kEmbedDim = 512;

json parse_body(const HttpResponse& resp, std::string_view what) {
  if (!resp.ok()) {
    throw Error(ErrorCode::BackendUnavailable,
                fmt::format("sidecar {} returned {} {}", what, resp.status, resp.error));
  }
  auto j = json::parse(resp.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::BackendUnavailable, fmt::format("sidecar {} sent invalid JSON", what));
  }
  return j;
}

}  // namespace

SidecarClient::SidecarClient(std::string base_url, std::shared_ptr<HttpTransport> transport,
                             std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), transport_(std::move(transport)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw Error(ErrorCode::ConfigError, "sidecar URL is empty");
  if (!transport_) throw Error(ErrorCode::ConfigError, "sidecar client needs a transport");
}

std::string SidecarClient::post_image(const std::string& path, const std::string& image_bytes) const {
  HttpRequest req;
  req.url = base_url_ + path;
  req.body = image_bytes;
  req.content_type = "application/octet-stream";
  req.timeout = timeout_;
  const auto resp = transport_->send(req);
  return parse_body(resp, path).dump();
}

ClassifyResponse SidecarClient::classify(const std::string& image_bytes) const {
  const auto j = json::parse(post_image("/classify", image_bytes));
  ClassifyResponse out;
  try {
    for (const auto& m : j.value("per_model", json::array())) {
      out.per_model.emplace_back(m.at("model_id").get<std::string>(), m.at("ai_score").get<double>());
    }
    for (const auto& f : j.value("failed", json::array())) out.failed.push_back(f.get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BackendUnavailable, std::string("malformed /classify response: ") + e.what());
  }
  return out;
}

std::vector<double> SidecarClient::embed(const std::string& image_bytes) const {
  const auto j = json::parse(post_image("/embed", image_bytes));
  std::vector<double> v;
  try {
    v = j.at("vector").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BackendUnavailable, std::string("malformed /embed response: ") + e.what());
  }
  if (v.size() != kEmbedDim) {
    throw Error(ErrorCode::DimMismatch, fmt::format("/embed returned {} values, expected {}", v.size(), kEmbedDim));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::DimMismatch, "/embed returned a non-finite value");
  }
  return v;
}

SidecarHealth SidecarClient::health() const {
  HttpRequest req;
  req.method = "GET";
  req.url = base_url_ + "/health";
  req.timeout = timeout_;
  const auto j = parse_body(transport_->send(req), "/health");
  return {j.value("models_loaded", 0), j.value("embedder_loaded", false)};
}

}  // namespace tribunal::toolbox
