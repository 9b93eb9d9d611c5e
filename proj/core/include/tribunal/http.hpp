#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace tribunal {

struct HttpRequest {
  std::string method = "POST";
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  std::string content_type = "application/json";
  std::chrono::milliseconds timeout{60'000};
};

struct HttpResponse {
  int status = 0;  // 0 means the request never reached a server
  std::string body;
  std::string error;

  [[nodiscard]] bool ok() const noexcept { return status >= 200 && status < 300; }
};

// Every outbound call from the library goes through one of these, so tests
// can count or script traffic.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport; supports http:// and https://.
std::shared_ptr<HttpTransport> make_http_transport();

/// Counts calls and answers every request with a fixed response.
class CountingTransport final : public HttpTransport {
 public:
  explicit CountingTransport(HttpResponse canned = {503, "", "offline"}) : canned_(std::move(canned)) {}

  HttpResponse send(const HttpRequest&) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return canned_;
  }
  [[nodiscard]] int calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

 private:
  HttpResponse canned_;
  std::atomic<int> calls_{0};
};

std::string base64_encode(std::string_view bytes);
std::string read_file_bytes(const std::string& path);

}  // namespace tribunal
