#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tribunal/http.hpp"
#include "tribunal/model.hpp"

namespace tribunal::agents {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
  std::optional<std::filesystem::path> image;  // attached to user turns for the VLM tool
};

struct ChatRequest {
  std::string case_id;
  std::string step;  // replay key, e.g. "sufficiency" or "debate_pro_r2"
  std::vector<ChatMessage> messages;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  [[nodiscard]] std::int64_t total() const noexcept { return prompt_tokens + completion_tokens; }
};

struct ChatReply {
  std::string text;
  TokenUsage usage;
};

struct Determinism {
  double temperature = 0.0;
  int seed = 42;
};

class UsageMeter {
 public:
  void add(const TokenUsage& u) noexcept {
    prompt_.fetch_add(u.prompt_tokens, std::memory_order_relaxed);
    completion_.fetch_add(u.completion_tokens, std::memory_order_relaxed);
    calls_.fetch_add(1, std::memory_order_relaxed);
  }
  [[nodiscard]] std::int64_t prompt_tokens() const noexcept { return prompt_.load(); }
  [[nodiscard]] std::int64_t completion_tokens() const noexcept { return completion_.load(); }
  [[nodiscard]] std::int64_t total() const noexcept { return prompt_tokens() + completion_tokens(); }
  [[nodiscard]] std::int64_t calls() const noexcept { return calls_.load(); }

 private:
  std::atomic<std::int64_t> prompt_{0};
  std::atomic<std::int64_t> completion_{0};
  std::atomic<std::int64_t> calls_{0};
};

// A chat-completion backend shared by every agent and the VLM tool. complete()
// must be thread-safe; failures throw Error{BackendUnavailable} or
// Error{MissingFixture}. Every successful call is added to the meter.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  ChatReply complete(const ChatRequest& request);

  [[nodiscard]] const UsageMeter& meter() const noexcept { return meter_; }
  [[nodiscard]] Determinism determinism() const noexcept { return determinism_; }

 protected:
  explicit ChatBackend(Determinism d = {}) : determinism_(d) {}
  virtual ChatReply do_complete(const ChatRequest& request) = 0;

 private:
  UsageMeter meter_;
  Determinism determinism_;
};

struct HttpChatConfig {
  std::string url;  // full chat-completions URL
  std::string api_key;
  std::string model = "gpt-4.1";
  std::chrono::milliseconds timeout{120'000};
};

// Wire format: request {model, temperature, seed, messages[]}; accepts either
// {text, usage{prompt_tokens, completion_tokens}} or an OpenAI-style
// {choices[0].message.content, usage} response.
class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(HttpChatConfig config, std::shared_ptr<HttpTransport> transport, Determinism d = {});

  /// The JSON body that would be sent for a request; exposed for tests.
  [[nodiscard]] std::string request_body(const ChatRequest& request) const;

 private:
  ChatReply do_complete(const ChatRequest& request) override;

  HttpChatConfig config_;
  std::shared_ptr<HttpTransport> transport_;
};

// Answers from conversations/<case_id>/<step>.json. A file holds either
// {text, usage} or {responses:[{when_contains?, text, usage}]}, where the
// first entry whose when_contains occurs in the prompt wins and an entry
// without when_contains is the fallback.
class ReplayChatBackend final : public ChatBackend {
 public:
  explicit ReplayChatBackend(std::filesystem::path root, Determinism d = {});

  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

 private:
  ChatReply do_complete(const ChatRequest& request) override;

  std::filesystem::path root_;
};

// Forwards to another backend and writes each reply as a replay file.
class RecordingChatBackend final : public ChatBackend {
 public:
  RecordingChatBackend(std::shared_ptr<ChatBackend> inner, std::filesystem::path root);

 private:
  ChatReply do_complete(const ChatRequest& request) override;

  std::shared_ptr<ChatBackend> inner_;
  std::filesystem::path root_;
  std::mutex mu_;
};

// Per-case view of a backend that records each call for the report.
class AgentSession {
 public:
  AgentSession(ChatBackend& backend, std::string case_id) : backend_(backend), case_id_(std::move(case_id)) {}

  ChatReply ask(const std::string& step, Phase phase, std::vector<ChatMessage> messages);
  ChatReply ask(const std::string& step, Phase phase, const std::string& prompt);

  [[nodiscard]] const std::string& case_id() const noexcept { return case_id_; }
  [[nodiscard]] const std::vector<AgentCall>& calls() const noexcept { return calls_; }
  [[nodiscard]] std::int64_t tokens() const noexcept;

 private:
  ChatBackend& backend_;
  std::string case_id_;
  std::vector<AgentCall> calls_;
};

}  // namespace tribunal::agents
