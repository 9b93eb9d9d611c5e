#include "tribunal/agents/chat.hpp"

#include <fmt/format.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "tribunal/error.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::agents {

using nlohmann::json;

namespace {

TokenUsage usage_from(const json& j) {
  TokenUsage u;
  if (j.is_object()) {
    u.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
    u.completion_tokens = j.value("completion_tokens", std::int64_t{0});
  }
  return u;
}

std::string mime_for(const std::filesystem::path& p) {
  const auto ext = text::to_lower(p.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".webp") return "image/webp";
  if (ext == ".gif") return "image/gif";
  return "image/jpeg";
}

std::string prompt_text(const ChatRequest& request) {
  std::string all;
  for (const auto& m : request.messages) {
    all += m.content;
    all += '\n';
  }
  return all;
}

json reply_to_json(const ChatReply& r) {
  return {{"text", r.text},
          {"usage", {{"prompt_tokens", r.usage.prompt_tokens}, {"completion_tokens", r.usage.completion_tokens}}}};
}

}  // namespace

ChatReply ChatBackend::complete(const ChatRequest& request) {
  auto reply = do_complete(request);
  meter_.add(reply.usage);
  return reply;
}

HttpChatBackend::HttpChatBackend(HttpChatConfig config, std::shared_ptr<HttpTransport> transport, Determinism d)
    : ChatBackend(d), config_(std::move(config)), transport_(std::move(transport)) {
  if (config_.url.empty()) throw Error(ErrorCode::ConfigError, "chat endpoint URL is empty");
  if (!transport_) throw Error(ErrorCode::ConfigError, "chat backend needs a transport");
}

std::string HttpChatBackend::request_body(const ChatRequest& request) const {
  json messages = json::array();
  for (const auto& m : request.messages) {
    if (!m.image) {
      messages.push_back({{"role", m.role}, {"content", m.content}});
      continue;
    }
    const auto data = base64_encode(read_file_bytes(m.image->string()));
    messages.push_back(
        {{"role", m.role},
         {"content",
          {{{"type", "text"}, {"text", m.content}},
           {{"type", "image_url"},
            {"image_url", {{"url", fmt::format("data:{};base64,{}", mime_for(*m.image), data)}}}}}}});
  }
  return json{{"model", config_.model},
              {"temperature", determinism().temperature},
              {"seed", determinism().seed},
              {"messages", messages}}
      .dump();
}

ChatReply HttpChatBackend::do_complete(const ChatRequest& request) {
  HttpRequest req;
  req.url = config_.url;
  req.body = request_body(request);
  req.timeout = config_.timeout;
  if (!config_.api_key.empty()) req.headers["Authorization"] = "Bearer " + config_.api_key;
  const auto resp = transport_->send(req);
  if (!resp.ok()) {
    throw Error(ErrorCode::BackendUnavailable,
                fmt::format("chat endpoint returned {} {}", resp.status, resp.error));
  }
  const auto j = json::parse(resp.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::BackendUnavailable, "chat endpoint sent invalid JSON");
  }
  ChatReply out;
  out.usage = usage_from(j.value("usage", json::object()));
  if (j.contains("text") && j["text"].is_string()) {
    out.text = j["text"].get<std::string>();
  } else if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& msg = j["choices"][0].value("message", json::object());
    if (!msg.contains("content") || !msg["content"].is_string()) {
      throw Error(ErrorCode::BackendUnavailable, "chat response has no message content");
    }
    out.text = msg["content"].get<std::string>();
  } else {
    throw Error(ErrorCode::BackendUnavailable, "chat response has neither text nor choices");
  }
  return out;
}

ReplayChatBackend::ReplayChatBackend(std::filesystem::path root, Determinism d)
    : ChatBackend(d), root_(std::move(root)) {}

ChatReply ReplayChatBackend::do_complete(const ChatRequest& request) {
  const auto path = root_ / request.case_id / (request.step + ".json");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFixture, "no replay transcript " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::MissingFixture, "malformed replay transcript " + path.string());
  }
  if (!j.contains("responses")) {
    return {j.value("text", ""), usage_from(j.value("usage", json::object()))};
  }
  const auto prompt = prompt_text(request);
  const json* fallback = nullptr;
  for (const auto& r : j["responses"]) {
    if (!r.contains("when_contains")) {
      if (!fallback) fallback = &r;
      continue;
    }
    if (prompt.find(r["when_contains"].get<std::string>()) != std::string::npos) {
      return {r.value("text", ""), usage_from(r.value("usage", json::object()))};
    }
  }
  if (!fallback) throw Error(ErrorCode::MissingFixture, "no replay response matches in " + path.string());
  return {fallback->value("text", ""), usage_from(fallback->value("usage", json::object()))};
}

RecordingChatBackend::RecordingChatBackend(std::shared_ptr<ChatBackend> inner, std::filesystem::path root)
    : ChatBackend(inner ? inner->determinism() : Determinism{}), inner_(std::move(inner)), root_(std::move(root)) {
  if (!inner_) throw Error(ErrorCode::ConfigError, "recording backend needs an inner backend");
}

ChatReply RecordingChatBackend::do_complete(const ChatRequest& request) {
  auto reply = inner_->complete(request);
  std::lock_guard lock(mu_);
  const auto dir = root_ / request.case_id;
  std::filesystem::create_directories(dir);
  std::ofstream(dir / (request.step + ".json")) << reply_to_json(reply).dump(2) << "\n";
  return reply;
}

ChatReply AgentSession::ask(const std::string& step, Phase phase, std::vector<ChatMessage> messages) {
  ChatRequest req{case_id_, step, std::move(messages)};
  auto reply = backend_.complete(req);
  calls_.push_back({step, phase, reply.usage.prompt_tokens, reply.usage.completion_tokens});
  return reply;
}

ChatReply AgentSession::ask(const std::string& step, Phase phase, const std::string& prompt) {
  return ask(step, phase, std::vector<ChatMessage>{{"user", prompt, std::nullopt}});
}

std::int64_t AgentSession::tokens() const noexcept {
  std::int64_t t = 0;
  for (const auto& c : calls_) t += c.tokens();
  return t;
}

}  // namespace tribunal::agents
