#include "tribunal/http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "tribunal/error.hpp"

namespace tribunal {

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    const auto scheme_end = request.url.find("://");
    if (scheme_end == std::string::npos) {
      return {0, "", "malformed url: " + request.url};
    }
    const auto path_start = request.url.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? request.url : request.url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

    httplib::Client client(base);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    client.set_connection_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    client.set_read_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    client.set_write_timeout(secs.count() > 0 ? secs.count() : 1, 0);

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);

    httplib::Result result;
    if (request.method == "GET") {
      result = client.Get(path, headers);
    } else {
      result = client.Post(path, headers, request.body, request.content_type);
    }
    if (!result) {
      return {0, "", httplib::to_string(result.error())};
    }
    return {result->status, result->body, ""};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tribunal
