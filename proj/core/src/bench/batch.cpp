#include "tribunal/bench/batch.hpp"

#include <fmt/format.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::bench {

namespace {

std::optional<CaseReport> load_existing(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  try {
    return j.get<CaseReport>();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

CaseReport failed_report(const std::string& case_id, const std::string& message) {
  CaseReport r;
  r.case_id = case_id;
  r.error = message;
  return r;
}

json options_json(const BatchOptions& o, const PipelineConfig& c) {
  json tools = json::array();
  for (auto id : c.enabled_tools) tools.push_back(std::string(to_string(id)));
  return {{"jobs", o.jobs},
          {"resume", o.resume},
          {"perturb", o.perturb ? json(std::string(to_string(*o.perturb))) : json()},
          {"attack", o.attack ? json(std::string(to_string(*o.attack))) : json()},
          {"ablate", o.ablate ? json(std::string(to_string(*o.ablate))) : json()},
          {"enabled_tools", tools},
          {"memory_enabled", c.memory_enabled},
          {"debate_enabled", c.debate_enabled},
          {"max_rounds", c.max_rounds}};
}

}  // namespace

std::string report_file_name(const std::string& case_id) {
  std::string safe;
  bool changed = false;
  for (char c : case_id) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') {
      safe += c;
    } else {
      safe += '_';
      changed = true;
    }
  }
  if (safe.empty() || safe.front() == '.') changed = true;
  if (changed) safe += fmt::format("-{:016x}", text::stable_hash(case_id));
  return safe + ".json";
}

ForgeryPool build_forgery_pool(const Manifest& manifest, const toolbox::Tool& metadata_tool) {
  ForgeryPool pool;
  for (const auto& e : manifest.entries) {
    if (!e.label) continue;
    const auto item = metadata_tool.run(e.to_case());
    if (item.validity != Validity::Valid) continue;
    if (const auto* f = std::get_if<MetadataFinding>(&item.payload)) pool.add(*e.label, *f);
  }
  return pool;
}

BatchResult run_batch(const Manifest& manifest, PipelineConfig config, Providers providers,
                      const BatchOptions& options) {
  require_labels(manifest);
  if (options.jobs < 1) throw Error(ErrorCode::ConfigError, "--jobs must be at least 1");
  if (options.ablate) {
    if (*options.ablate == ToolId::Memory) {
      config.memory_enabled = false;
    } else {
      config.enabled_tools.erase(*options.ablate);
    }
  }
  config.validate();

  const auto reports_dir = options.out_dir / "reports";
  std::filesystem::create_directories(reports_dir);
  if (options.perturb) std::filesystem::create_directories(options.out_dir / "perturbed");

  if (options.attack) {
    std::shared_ptr<ForgeryPool> pool = std::make_shared<ForgeryPool>();
    if (*options.attack == AttackKind::MetadataForgery) {
      const auto it = providers.tools.find(ToolId::Metadata);
      if (it == providers.tools.end()) throw Error(ErrorCode::ConfigError, "metadata forgery needs the metadata tool");
      *pool = build_forgery_pool(manifest, *it->second);
    }
    const auto kind = *options.attack;
    providers.evidence_hook = [pool, kind](const ImageCase& image, EvidenceSet set) {
      if (!image.claimed_label) throw Error(ErrorCode::ConfigError, "attack simulation needs labels");
      return simulate_attack(set, kind, *image.claimed_label, *pool);
    };
  }

  BatchResult result;
  result.reports.resize(manifest.entries.size());
  std::vector<char> resumed(manifest.entries.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= manifest.entries.size()) return;
      const auto& entry = manifest.entries[i];
      const auto file = reports_dir / report_file_name(entry.id);
      if (options.resume) {
        if (auto existing = load_existing(file)) {
          result.reports[i] = std::move(*existing);
          resumed[i] = 1;
          continue;
        }
      }
      auto image = entry.to_case();
      CaseReport report;
      try {
        if (options.perturb) {
          const auto out = options.out_dir / "perturbed" / (entry.id + ".png");
          save_image(perturb(load_image(entry.path), *options.perturb, options.perturb_params), out);
          image.path = out;
        }
        report = detect(image, config, providers);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) {
          std::lock_guard lock(fatal_mu);
          if (!fatal) fatal = std::current_exception();
          return;
        }
        report = failed_report(entry.id, e.what());
      } catch (const std::exception& e) {
        report = failed_report(entry.id, e.what());
      }
      std::ofstream(file) << json(report).dump(2) << "\n";
      result.reports[i] = std::move(report);
    }
  };

  if (options.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < options.jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    result.resumed += resumed[i];
    result.failed += !result.reports[i].succeeded();
  }
  result.evaluation = evaluate(result.reports, manifest);
  result.tool_stats = tool_reliability(result.reports);
  result.cost = cost_report(result.reports);
  result.summary = {{"cases", result.reports.size()},
                    {"failed", result.failed},
                    {"resumed", result.resumed},
                    {"metrics", to_json(result.evaluation)},
                    {"tool_stats", to_json(result.tool_stats)},
                    {"cost", to_json(result.cost)},
                    {"options", options_json(options, config)}};
  std::ofstream(options.out_dir / "summary.json") << result.summary.dump(2) << "\n";
  std::ofstream(options.out_dir / "confusion.csv") << confusion_csv(result.evaluation);
  return result;
}

}  // namespace tribunal::bench
