#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tribunal/http.hpp"

namespace tribunal::toolbox {

struct ClassifyResponse {
  std::vector<std::pair<std::string, double>> per_model;  // model_id, ai_score
  std::vector<std::string> failed;
};

struct SidecarHealth {
  int models_loaded = 0;
  bool embedder_loaded = false;
};

// Client for the inference sidecar. Image bytes are posted raw; responses
// are JSON. Transport or protocol problems throw Error{BackendUnavailable}.
class SidecarClient {
 public:
  SidecarClient(std::string base_url, std::shared_ptr<HttpTransport> transport,
                std::chrono::milliseconds timeout = std::chrono::seconds(60));

  ClassifyResponse classify(const std::string& image_bytes) const;
  /// Throws Error{DimMismatch} when the vector is not 512 finite values.
  std::vector<double> embed(const std::string& image_bytes) const;
  SidecarHealth health() const;

 private:
  std::string post_image(const std::string& path, const std::string& image_bytes) const;

  std::string base_url_;
  std::shared_ptr<HttpTransport> transport_;
  std::chrono::milliseconds timeout_;
};

}  // namespace tribunal::toolbox
