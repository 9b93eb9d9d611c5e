#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include "tribunal/bench/batch.hpp"
#include "tribunal/bench/kb_build.hpp"
#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/toolbox/provider.hpp"

namespace tribunal::cli {

namespace {

template <typename T>
void overlay(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

ConfigLayer merge(ConfigLayer base, const ConfigLayer& top) {
  overlay(base.mode, top.mode);
  overlay(base.fixtures, top.fixtures);
  overlay(base.conversations, top.conversations);
  overlay(base.kb_dir, top.kb_dir);
  overlay(base.toolbox_config, top.toolbox_config);
  overlay(base.chat_url, top.chat_url);
  overlay(base.api_key, top.api_key);
  overlay(base.chat_model, top.chat_model);
  overlay(base.sidecar_url, top.sidecar_url);
  overlay(base.vision_url, top.vision_url);
  overlay(base.vision_key, top.vision_key);
  overlay(base.similar_url, top.similar_url);
  overlay(base.debate, top.debate);
  overlay(base.memory, top.memory);
  overlay(base.max_rounds, top.max_rounds);
  overlay(base.tool_timeout_ms, top.tool_timeout_ms);
  return base;
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "replay") return Mode::Replay;
  if (s == "live") return Mode::Live;
  return std::nullopt;
}

template <typename T>
std::optional<T> opt_value(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string timestamp_dir() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string("runs/") + buf;
}

std::shared_ptr<memory::KnowledgeBase> open_kb(const std::filesystem::path& dir) {
  if (std::filesystem::exists(dir / "index.json")) return memory::KnowledgeBase::load(dir);
  return std::make_shared<memory::KnowledgeBase>();
}

void print_verdict(std::ostream& out, const CaseReport& r) {
  if (!r.verdict) return;
  fmt::print(out, "{} (decided by {})\n", r.verdict->is_ai_generated ? "AI-GENERATED" : "REAL",
             to_string(r.verdict->decided_by));
}

int exit_code_for(const Error& e) { return e.code() == ErrorCode::AgentFailure ? 2 : 1; }

}  // namespace

bool ConfigLayer::has_live_endpoint() const {
  return chat_url || api_key || sidecar_url || vision_url || vision_key || similar_url;
}

ConfigLayer load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::ConfigError, "config file is not a JSON object: " + path.string());
  const auto base = path.parent_path();
  auto rel = [&](const char* key) -> std::optional<std::filesystem::path> {
    auto s = opt_value<std::string>(j, key);
    if (!s) return std::nullopt;
    std::filesystem::path p(*s);
    return p.is_absolute() ? p : base / p;
  };
  ConfigLayer c;
  try {
    if (auto m = opt_value<std::string>(j, "mode")) {
      c.mode = parse_mode(*m);
      if (!c.mode) throw Error(ErrorCode::ConfigError, "mode must be replay or live, got " + *m);
    }
    c.fixtures = rel("fixtures");
    c.conversations = rel("conversations");
    c.kb_dir = rel("kb_dir");
    c.toolbox_config = rel("toolbox_config");
    if (j.contains("chat")) {
      const auto& chat = j.at("chat");
      c.chat_url = opt_value<std::string>(chat, "url");
      c.api_key = opt_value<std::string>(chat, "api_key");
      c.chat_model = opt_value<std::string>(chat, "model");
    }
    c.sidecar_url = opt_value<std::string>(j, "sidecar_url");
    if (j.contains("vision")) {
      c.vision_url = opt_value<std::string>(j.at("vision"), "url");
      c.vision_key = opt_value<std::string>(j.at("vision"), "key");
    }
    c.similar_url = opt_value<std::string>(j, "similar_search_url");
    c.debate = opt_value<bool>(j, "debate");
    c.memory = opt_value<bool>(j, "memory");
    c.max_rounds = opt_value<int>(j, "max_rounds");
    c.tool_timeout_ms = opt_value<int>(j, "tool_timeout_ms");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("config file {}: {}", path.string(), e.what()));
  }
  return c;
}

ConfigLayer config_from_env(const EnvLookup& env) {
  ConfigLayer c;
  c.chat_url = env("TRIBUNAL_CHAT_URL");
  c.api_key = env("TRIBUNAL_API_KEY");
  c.chat_model = env("TRIBUNAL_CHAT_MODEL");
  c.sidecar_url = env("TRIBUNAL_SIDECAR_URL");
  c.vision_url = env("TRIBUNAL_VISION_URL");
  c.vision_key = env("TRIBUNAL_VISION_KEY");
  return c;
}

CliConfig resolve_config(const ConfigLayer& file, const ConfigLayer& env, const ConfigLayer& flags) {
  const auto mode = flags.mode.value_or(file.mode.value_or(Mode::Replay));
  if (mode == Mode::Replay && (file.has_live_endpoint() || flags.has_live_endpoint())) {
    throw Error(ErrorCode::ConfigError, "replay mode does not accept live endpoint settings");
  }
  ConfigLayer env_layer = env;
  if (mode == Mode::Replay) env_layer = ConfigLayer{};
  const auto m = merge(merge(file, env_layer), flags);

  CliConfig c;
  c.mode = mode;
  if (m.fixtures) c.fixtures = *m.fixtures;
  if (m.conversations) c.conversations = *m.conversations;
  c.kb_dir = m.kb_dir;
  c.toolbox_config = m.toolbox_config;
  c.chat_url = m.chat_url.value_or("");
  c.api_key = m.api_key.value_or("");
  if (m.chat_model) c.chat_model = *m.chat_model;
  c.sidecar_url = m.sidecar_url.value_or("");
  c.vision_url = m.vision_url.value_or("");
  c.vision_key = m.vision_key.value_or("");
  c.similar_url = m.similar_url.value_or("");
  if (m.debate) c.pipeline.debate_enabled = *m.debate;
  if (m.memory) c.pipeline.memory_enabled = *m.memory;
  if (m.max_rounds) c.pipeline.max_rounds = *m.max_rounds;
  if (m.tool_timeout_ms) c.pipeline.tool_timeout = std::chrono::milliseconds(*m.tool_timeout_ms);
  if (c.mode == Mode::Live && c.chat_url.empty()) {
    throw Error(ErrorCode::ConfigError, "live mode needs a chat endpoint (--chat-url or TRIBUNAL_CHAT_URL)");
  }
  if (c.pipeline.memory_enabled && !c.kb_dir) throw Error(ErrorCode::ConfigError, "--memory needs --kb");
  c.pipeline.validate();
  return c;
}

Runtime make_runtime(const CliConfig& config) {
  const auto tb = config.toolbox_config ? toolbox::ToolboxConfig::load(*config.toolbox_config) : toolbox::ToolboxConfig{};
  Runtime rt;
  std::shared_ptr<const toolbox::ToolProvider> provider;
  if (config.mode == Mode::Replay) {
    provider = std::make_shared<toolbox::ToolProvider>(toolbox::ToolProvider::replay(config.fixtures, tb));
    rt.providers.chat = std::make_shared<agents::ReplayChatBackend>(config.conversations);
    rt.embedder = std::make_shared<memory::ReplayEmbedProvider>(config.fixtures);
  } else {
    auto transport = make_http_transport();
    toolbox::LiveEndpoints ep;
    ep.web_detection_url = config.vision_url;
    ep.web_detection_key = config.vision_key;
    ep.similar_search_url = config.similar_url;
    ep.sidecar_url = config.sidecar_url;
    provider = std::make_shared<toolbox::ToolProvider>(toolbox::ToolProvider::live(ep, transport, tb));
    rt.providers.chat = std::make_shared<agents::HttpChatBackend>(
        agents::HttpChatConfig{config.chat_url, config.api_key, config.chat_model}, transport);
    rt.embedder = std::make_shared<memory::SidecarEmbedProvider>(toolbox::SidecarClient(config.sidecar_url, transport));
  }
  rt.providers.tools = toolbox::make_standard_toolbox(provider, rt.providers.chat);
  if (config.pipeline.memory_enabled) {
    rt.providers.memory = std::make_shared<memory::MemoryTool>(open_kb(*config.kb_dir), rt.embedder);
  }
  return rt;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Multi-agent forensic detection of AI-generated images"};
  app.name("tribunal");
  app.require_subcommand(1);

  std::optional<std::filesystem::path> config_path;
  ConfigLayer flags;
  std::string mode;
  std::string fixtures, conversations, kb, toolbox_cfg, chat_url, chat_model, sidecar_url, vision_url,
      similar_url;
  int max_rounds = 0;
  int tool_timeout_ms = -1;
  bool no_debate = false;
  bool use_memory = false;

  app.add_option("--config", config_path, "JSON config file (flags > environment > file)");
  app.add_option("--mode", mode, "Backend mode")->check(CLI::IsMember({"replay", "live"}));
  app.add_option("--fixtures", fixtures, "Tool fixture root (replay): <root>/<image_id>/<tool>.json");
  app.add_option("--conversations", conversations, "Chat replay root: <root>/<case_id>/<step>.json");
  app.add_option("--kb", kb, "Knowledge base directory");
  app.add_option("--toolbox-config", toolbox_cfg, "Domain lists, AI tool names and ensemble models (JSON)");
  app.add_option("--chat-url", chat_url, "Chat completions endpoint (live; env TRIBUNAL_CHAT_URL)");
  app.add_option("--chat-model", chat_model, "Chat model name (env TRIBUNAL_CHAT_MODEL)");
  app.add_option("--sidecar-url", sidecar_url, "Inference sidecar base URL (live; env TRIBUNAL_SIDECAR_URL)");
  app.add_option("--vision-url", vision_url, "Web detection endpoint (live; env TRIBUNAL_VISION_URL)");
  app.add_option("--similar-url", similar_url, "Similar-image search endpoint (live)");
  app.add_option("--max-rounds", max_rounds, "Debate round limit")->check(CLI::PositiveNumber);
  app.add_option("--tool-timeout-ms", tool_timeout_ms, "Per-tool timeout, 0 waits indefinitely")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-debate", no_debate, "Decide directly when the evidence is insufficient");
  app.add_flag("--memory", use_memory, "Add the knowledge-base memory tool (needs --kb)");
  app.footer("API key: env TRIBUNAL_API_KEY. Vision key: env TRIBUNAL_VISION_KEY.\n"
             "Exit codes: 0 success, 1 operational or configuration error, 2 agent failure.");

  auto* detect_cmd = app.add_subcommand("detect", "Run the pipeline on one image");
  std::filesystem::path image_path;
  std::string image_id;
  std::optional<std::filesystem::path> report_out;
  detect_cmd->add_option("image", image_path, "Image file")->required();
  detect_cmd->add_option("--id", image_id, "Case id (default: file stem)");
  detect_cmd->add_option("--out", report_out, "Write the report here instead of stdout");

  auto* bench_cmd = app.add_subcommand("bench", "Evaluate a labeled manifest");
  std::filesystem::path manifest_path;
  bench::BatchOptions batch;
  std::string perturb_kind, attack_kind, ablate;
  std::string bench_out;
  bench_cmd->add_option("manifest", manifest_path, "JSON Lines manifest")->required();
  bench_cmd->add_option("--out", bench_out, "Run directory (default runs/<timestamp>)");
  bench_cmd->add_option("--jobs", batch.jobs, "Parallel cases")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--resume", batch.resume, "Skip cases whose report already exists");
  bench_cmd->add_option("--perturb", perturb_kind, "Image perturbation")
      ->check(CLI::IsMember({"blur", "sharpen", "noise"}));
  bench_cmd->add_option("--blur-radius", batch.perturb_params.blur_radius, "Gaussian blur radius");
  bench_cmd->add_option("--sharpen-factor", batch.perturb_params.sharpen_factor, "Sharpen factor");
  bench_cmd->add_option("--noise-variance", batch.perturb_params.noise_variance, "Gaussian noise variance");
  bench_cmd->add_option("--seed", batch.perturb_params.seed, "Noise seed");
  bench_cmd->add_option("--attack", attack_kind, "Adversarial evidence attack")
      ->check(CLI::IsMember({"reverse_manipulation", "metadata_forgery", "reverse", "metadata"}));
  bench_cmd->add_option("--ablate", ablate, "Leave one tool out")
      ->check(CLI::IsMember({"reverse_exact", "reverse_similar", "metadata", "ensemble", "vlm", "memory"}));

  auto* kb_cmd = app.add_subcommand("kb", "Knowledge base maintenance");
  kb_cmd->require_subcommand(1);
  auto* kb_build = kb_cmd->add_subcommand("build", "Detect a labeled manifest and store the outcomes");
  std::filesystem::path kb_manifest;
  kb_build->add_option("manifest", kb_manifest, "Labeled JSON Lines manifest")->required();
  auto* kb_inspect = kb_cmd->add_subcommand("inspect", "Print index sizes and stored cases");

  for (auto* sub : {detect_cmd, bench_cmd, kb_cmd, kb_build, kb_inspect}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!mode.empty()) flags.mode = parse_mode(mode);
    if (!fixtures.empty()) flags.fixtures = fixtures;
    if (!conversations.empty()) flags.conversations = conversations;
    if (!kb.empty()) flags.kb_dir = kb;
    if (!toolbox_cfg.empty()) flags.toolbox_config = toolbox_cfg;
    if (!chat_url.empty()) flags.chat_url = chat_url;
    if (!chat_model.empty()) flags.chat_model = chat_model;
    if (!sidecar_url.empty()) flags.sidecar_url = sidecar_url;
    if (!vision_url.empty()) flags.vision_url = vision_url;
    if (!similar_url.empty()) flags.similar_url = similar_url;
    if (max_rounds > 0) flags.max_rounds = max_rounds;
    if (tool_timeout_ms >= 0) flags.tool_timeout_ms = tool_timeout_ms;
    if (no_debate) flags.debate = false;
    if (use_memory) flags.memory = true;

    const auto file_layer = config_path ? load_config_file(*config_path) : ConfigLayer{};
    auto config = resolve_config(file_layer, config_from_env(env), flags);

    if (*detect_cmd) {
      if (!std::filesystem::is_regular_file(image_path)) {
        throw Error(ErrorCode::UnreadableFile, "no such image: " + image_path.string());
      }
      const auto rt = make_runtime(config);
      ImageCase image{image_id.empty() ? image_path.stem().string() : image_id, image_path, std::nullopt, ""};
      const auto report = detect(image, config.pipeline, rt.providers);
      const auto body = json(report).dump(2);
      if (report_out) {
        std::ofstream f(*report_out);
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + report_out->string());
        f << body << "\n";
      }
      print_verdict(out, report);
      if (!report_out) out << body << "\n";
      if (!report.succeeded()) {
        fmt::print(err, "detection failed: {}\n", report.error.value_or("unknown error"));
        return 2;
      }
      return 0;
    }

    if (*bench_cmd) {
      const auto manifest = bench::load_manifest(manifest_path);
      batch.out_dir = bench_out.empty() ? timestamp_dir() : bench_out;
      if (!perturb_kind.empty()) batch.perturb = bench::parse_perturb_kind(perturb_kind);
      if (!attack_kind.empty()) batch.attack = bench::parse_attack_kind(attack_kind);
      if (!ablate.empty()) batch.ablate = parse_tool_id(ablate);
      const auto rt = make_runtime(config);
      const auto result = bench::run_batch(manifest, config.pipeline, rt.providers, batch);
      const auto& m = result.evaluation.overall;
      fmt::print(out, "cases={} failed={} resumed={}\n", result.reports.size(), result.failed, result.resumed);
      fmt::print(out, "accuracy={:.4f} precision={:.4f} recall={:.4f} f1={:.4f}\n", m.accuracy, m.precision,
                 m.recall, m.f1);
      fmt::print(out, "run directory: {}\n", batch.out_dir.string());
      return 0;
    }

    if (*kb_build) {
      if (!config.kb_dir) throw Error(ErrorCode::ConfigError, "kb build needs --kb");
      const auto manifest = bench::load_manifest(kb_manifest);
      auto build_config = config;
      build_config.pipeline.memory_enabled = false;
      const auto rt = make_runtime(build_config);
      const auto r = bench::build_knowledge_base(manifest, build_config.pipeline, rt.providers, *rt.embedder,
                                                 *config.kb_dir);
      const auto kb_store = open_kb(*config.kb_dir);
      fmt::print(out, "success_index={} failure_index={} reflections={} placeholders={} skipped={}\n",
                 kb_store->success_size(), kb_store->failure_size(), r.failures, r.placeholder_reflections,
                 r.skipped.size());
      for (const auto& id : r.skipped) fmt::print(err, "skipped {}\n", id);
      return 0;
    }

    if (*kb_inspect) {
      if (!config.kb_dir) throw Error(ErrorCode::ConfigError, "kb inspect needs --kb");
      const auto kb_store = open_kb(*config.kb_dir);
      fmt::print(out, "success_index={} failure_index={}\n", kb_store->success_size(), kb_store->failure_size());
      for (const auto& c : kb_store->cases()) {
        fmt::print(out, "{}\t{}\ttrue={}\tpredicted={}\n", c.case_id, to_string(c.outcome), to_string(c.true_label),
                   to_string(c.predicted_label));
      }
      return 0;
    }
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace tribunal::cli
