// Runs every primary acceptance criterion and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "published.hpp"
#include "test_support.hpp"
#include "tribunal/agents/agents.hpp"
#include "tribunal/agents/prompts.hpp"
#include "tribunal/bench/attack.hpp"
#include "tribunal/bench/batch.hpp"
#include "tribunal/bench/kb_build.hpp"
#include "tribunal/bench/manifest.hpp"
#include "tribunal/bench/metrics.hpp"
#include "tribunal/bench/perturb.hpp"
#include "tribunal/error.hpp"
#include "tribunal/memory/knowledge_base.hpp"
#include "tribunal/memory/memory_tool.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/toolbox/ensemble.hpp"
#include "tribunal/toolbox/metadata.hpp"

namespace tribunal {
namespace {

using testing::valid_item;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  std::string name;
  std::optional<double> limit_s;
  std::function<Check()> run;
};

// ---- criteria -------------------------------------------------------------------

Check ensemble_formula() {
  Check o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> score(0.0, 1.0), weight(0.01, 5.0);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<double> s(n), w(n), ones(n, 1.0);
    double num = 0, den = 0, sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = score(rng);
      w[i] = weight(rng);
      num += w[i] * s[i];
      den += w[i];
      sum += s[i];
    }
    worst = std::max(worst, std::abs(toolbox::ensemble_score(s, w) - num / den));
    worst = std::max(worst, std::abs(toolbox::ensemble_score(s, ones) - sum / static_cast<double>(n)));
  }
  o.require(worst <= 1e-12, fmt::format("max deviation {:.3e}", worst));
  if (o.ok) o.detail = fmt::format("1000 instances, max deviation {:.1e}", worst);
  return o;
}

Check metric_consistency() {
  Check o;
  double worst = 0;
  for (const auto& c : testing::kPublishedMetrics) {
    const double d = std::abs(bench::f1_score(c.precision, c.recall) - c.f1);
    worst = std::max(worst, d);
    o.require(d <= 1e-3, fmt::format("{} {} off by {:.5f}", c.method, c.split, d));
  }
  const double headline = bench::f1_score(0.9920, 0.9487);
  o.require(std::abs(headline - 0.9698) <= 1e-3, fmt::format("headline f1 {:.4f}", headline));
  if (o.ok) o.detail = fmt::format("21 cells, max deviation {:.5f}", worst);
  return o;
}

Check pipeline_determinism() {
  Check o;
  testing::ReplayRig rig;
  const auto real = detect(testing::fixture_case("walkthrough_real"), {}, rig.providers);
  o.require(real.verdict && !real.verdict->is_ai_generated, "first walkthrough not real");
  o.require(real.verdict && real.verdict->decided_by == DecidedBy::ReasoningAgent,
            "first walkthrough not decided by the reasoning agent");
  o.require(!real.transcript, "first walkthrough debated");
  const auto ai = detect(testing::fixture_case("walkthrough_debate"), {}, rig.providers);
  o.require(ai.transcript && !ai.transcript->rounds.empty(), "second walkthrough did not debate");
  o.require(ai.verdict && ai.verdict->is_ai_generated, "second walkthrough not ai-generated");
  o.require(ai.verdict && ai.verdict->decided_by == DecidedBy::JudgeAgent,
            "second walkthrough not decided by the judge");
  for (const auto* id : {"walkthrough_real", "walkthrough_debate"}) {
    const json a = detect(testing::fixture_case(id), {}, rig.providers);
    const json b = detect(testing::fixture_case(id), {}, rig.providers);
    o.require(strip_timings(a).dump() == strip_timings(b).dump(), fmt::format("{} differs between runs", id));
  }
  if (o.ok) o.detail = fmt::format("real via reasoning, ai via judge after {} rounds", ai.transcript->rounds.size());
  return o;
}

Check debate_termination() {
  Check o;
  std::mt19937_64 rng(77);
  const auto set = seal_evidence_set({valid_item(ToolId::Vlm, "v")}, "p");
  int early = 0;
  for (int trial = 0; trial < 10000 && o.ok; ++trial) {
    const int max_rounds = 1 + static_cast<int>(rng() % 5);
    std::vector<bool> schedule(8);
    for (auto&& b : schedule) b = rng() % 3 == 0;
    testing::ScriptedChat chat([&](const agents::ChatRequest& r) {
      if (r.step.rfind("judge_check_r", 0) == 0) {
        return testing::reply(schedule[std::stoul(r.step.substr(13)) - 1] ? "true" : "false", 1, 1);
      }
      if (r.step == "judge_final") return testing::reply(R"({"is_ai_generated": true, "details": "d"})", 1, 1);
      return testing::reply("argument", 1, 1);
    });
    agents::AgentSession s(chat, "p");
    const auto [t, v] = run_debate(set, max_rounds, s);
    int expected = max_rounds;
    for (int i = 0; i < max_rounds; ++i) {
      if (schedule[i]) {
        expected = i + 1;
        break;
      }
    }
    early += expected < max_rounds;
    o.require(static_cast<int>(t.rounds.size()) <= max_rounds, fmt::format("trial {} exceeded max_rounds", trial));
    o.require(static_cast<int>(t.rounds.size()) == expected, fmt::format("trial {} ignored early stop", trial));
  }
  if (o.ok) o.detail = fmt::format("10000 schedules, {} stopped early", early);
  return o;
}

Check memory_retrieval() {
  Check o;
  memory::KnowledgeBase defaults;
  o.require(defaults.params().k == 1 && defaults.params().threshold == 0.85, "defaults are not k=1, 0.85");

  std::mt19937_64 rng(5);
  memory::KnowledgeBase kb;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::vector<std::vector<double>> anchors;
  for (int a = 0; a < 20; ++a) anchors.push_back(testing::random_unit(rng, memory::kEmbeddingDim));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    // Clusters around shared anchors so that many neighbours clear 0.85.
    auto v = anchors[rng() % anchors.size()];
    const double spread = 0.005 * static_cast<double>(rng() % 8);
    for (auto& x : v) x += spread * noise(rng);
    memory::MemoryCase c;
    c.case_id = fmt::format("m{:04d}", i);
    c.embedding = v;
    c.true_label = rng() % 2 ? Label::Ai : Label::Real;
    c.outcome = rng() % 4 ? Outcome::Success : Outcome::Failure;
    c.predicted_label = c.outcome == Outcome::Success ? c.true_label
                                                                : (c.true_label == Label::Ai ? Label::Real : Label::Ai);
    if (c.outcome == Outcome::Failure) c.reflection = "r";
    kb.insert(c);
    rows.emplace_back(c.case_id, v);
  }
  auto brute = [&](const std::vector<double>& q, const memory::RetrievalParams& p) {
    std::vector<std::pair<double, std::string>> all;
    for (const auto& [id, v] : rows) {
      double dot = 0, nq = 0, nv = 0;
      for (std::size_t d = 0; d < q.size(); ++d) {
        dot += q[d] * v[d];
        nq += q[d] * q[d];
        nv += v[d] * v[d];
      }
      const double s = dot / std::sqrt(nq * nv);
      if (s >= p.threshold) all.emplace_back(s, id);
    }
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    if (all.size() > p.k) all.resize(p.k);
    std::vector<std::string> ids;
    for (const auto& e : all) ids.push_back(e.second);
    return ids;
  };
  int nonempty = 0;
  for (int q = 0; q < 100 && o.ok; ++q) {
    auto query = anchors[rng() % anchors.size()];
    for (auto& x : query) x += 0.01 * noise(rng);
    const memory::RetrievalParams p = q % 2 ? kb.params() : memory::RetrievalParams{1 + rng() % 10, 0.85};
    std::vector<std::string> got;
    for (const auto& h : kb.retrieve(query, p)) {
      got.push_back(h.memory_case.case_id);
      o.require(h.similarity >= p.threshold, "hit below threshold");
    }
    o.require(got.size() <= p.k, "more than k hits");
    o.require(got == brute(query, p), fmt::format("query {} differs from brute force", q));
    nonempty += !got.empty();
  }
  if (o.ok) o.detail = fmt::format("1000 cases, 100 queries, {} with hits", nonempty);
  return o;
}

Check memory_correction() {
  Check o;
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto seed = bench::load_manifest(testing::manifest_path("memory_seed"));
  const auto suite = bench::load_manifest(testing::manifest_path("memory_suite"));
  const auto built = bench::build_knowledge_base(seed, {}, rig.providers, *rig.embedder, dir / "kb");
  o.require(built.failures == seed.entries.size(), fmt::format("seed produced {} failures", built.failures));

  auto correct = [&](const bench::BatchResult& r) {
    int n = 0;
    for (std::size_t i = 0; i < r.reports.size(); ++i) {
      const auto& v = r.reports[i].verdict;
      n += v && (v->is_ai_generated == (suite.entries[i].label == Label::Ai));
    }
    return n;
  };
  bench::BatchOptions off_opt;
  off_opt.out_dir = dir / "off";
  const int off = correct(bench::run_batch(suite, {}, rig.providers, off_opt));

  auto providers = rig.providers;
  providers.memory = std::make_shared<memory::MemoryTool>(memory::KnowledgeBase::load(dir / "kb"), rig.embedder);
  PipelineConfig on_cfg;
  on_cfg.memory_enabled = true;
  bench::BatchOptions on_opt;
  on_opt.out_dir = dir / "on";
  const int on = correct(bench::run_batch(suite, on_cfg, providers, on_opt));

  o.require(off == 0, fmt::format("{} corrected with memory disabled", off));
  o.require(on >= 4, fmt::format("only {} corrected with memory enabled", on));
  if (o.ok) o.detail = fmt::format("{}/10 corrected with memory, {}/10 without", on, off);
  return o;
}

Check metadata_filter() {
  Check o;
  std::mt19937_64 rng(21);
  const std::string alpha = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  const std::vector<std::string> groups{"EXIF:", "XMP:", "File:", "Composite:", "IPTC:", "PNG:", "ICC_Profile:"};
  std::vector<std::string> names(testing::kKeptFieldsExact.begin(), testing::kKeptFieldsExact.end());
  for (const auto& p : testing::kKeptFieldPrefixes) names.push_back(p + "Anything");
  int random_added = 0;
  while (random_added < 100) {
    std::string name = groups[rng() % groups.size()];
    for (int k = 0, len = 3 + static_cast<int>(rng() % 10); k < len; ++k) name += alpha[rng() % alpha.size()];
    if (testing::oracle_keep(name)) continue;
    names.push_back(name);
    ++random_added;
  }
  int agree = 0;
  for (const auto& n : names) {
    const bool same = toolbox::keep_field(n) == testing::oracle_keep(n);
    agree += same;
    o.require(same, "disagreement on " + n);
  }
  o.require(toolbox::classify_signal("EXIF:Make", "Canon") == SignalClass::RealSignal, "Canon make not real_signal");
  o.require(toolbox::classify_signal("JUMBF:Description", "AI Generated Image") == SignalClass::AiSignal,
            "JUMBF description not ai_signal");
  o.require(toolbox::classify_signal("EXIF:Software", "Stable Diffusion XL") == SignalClass::AiSignal,
            "generator software not ai_signal");
  if (o.ok) o.detail = fmt::format("{}/{} names agree, examples classify as printed", agree, names.size());
  return o;
}

Check robustness_plumbing() {
  Check o;
  const Image gray(400, 300, 3, 128.0f);
  const auto noisy = bench::perturb(gray, bench::PerturbKind::Noise);
  double sum = 0, sq = 0;
  for (float v : noisy.data) {
    const double d = static_cast<double>(v) - 128.0;
    sum += d;
    sq += d * d;
  }
  const auto n = static_cast<double>(noisy.data.size());
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  o.require(n >= 1e5, "too few samples");
  o.require(std::abs(mean) < 0.1, fmt::format("mean {:.4f}", mean));
  o.require(std::abs(var - 2.0) <= 0.3, fmt::format("variance {:.4f}", var));
  std::mt19937_64 rng(2);
  Image img(37, 23, 3);
  for (auto& v : img.data) v = static_cast<float>(rng() % 256);
  o.require(bench::gaussian_blur(img, 0.0) == img, "blur radius 0 changed the image");
  o.require(bench::sharpen(img, 1.0) == img, "sharpen factor 1 changed the image");
  if (o.ok) o.detail = fmt::format("{:.0f} samples, mean {:+.4f}, variance {:.4f}", n, mean, var);
  return o;
}

Check attack_simulation() {
  Check o;
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto m = bench::load_manifest(testing::manifest_path("attack"));
  const auto pool = bench::build_forgery_pool(m, *rig.providers.tools.at(ToolId::Metadata));
  PipelineConfig cfg;
  for (const auto& e : m.entries) {
    const auto set = seal_evidence_set(gather_evidence(e.to_case(), cfg, rig.providers), e.id);
    for (auto kind : {bench::AttackKind::ReverseManipulation, bench::AttackKind::MetadataForgery}) {
      const auto out = bench::simulate_attack(set, kind, *e.label, pool);
      const std::set<ToolId> targets = kind == bench::AttackKind::ReverseManipulation
                                           ? std::set<ToolId>{ToolId::ReverseExact, ToolId::ReverseSimilar}
                                           : std::set<ToolId>{ToolId::Metadata};
      for (const auto& item : set.items()) {
        if (targets.contains(item.tool_id)) continue;
        const auto* after = out.find(item.tool_id);
        o.require(after && *after == item, fmt::format("{} changed {} under {}", e.id, to_string(item.tool_id),
                                                       to_string(kind)));
      }
      for (const auto& item : out.items()) {
        o.require(targets.contains(item.tool_id) || set.contains(item.tool_id), "attack added an untargeted tool");
      }
    }
  }
  auto accuracy = [&](std::optional<bench::AttackKind> kind, const std::string& sub) {
    bench::BatchOptions opt;
    opt.out_dir = dir / sub;
    opt.attack = kind;
    return bench::run_batch(m, cfg, rig.providers, opt).evaluation.overall.accuracy;
  };
  const double clean = accuracy(std::nullopt, "clean");
  const double reverse = accuracy(bench::AttackKind::ReverseManipulation, "reverse");
  const double forged = accuracy(bench::AttackKind::MetadataForgery, "metadata");
  o.require(reverse < clean, fmt::format("reverse manipulation did not degrade ({:.2f} vs {:.2f})", reverse, clean));
  o.require(forged < clean, fmt::format("metadata forgery did not degrade ({:.2f} vs {:.2f})", forged, clean));
  if (o.ok) o.detail = fmt::format("accuracy clean {:.2f}, reverse {:.2f}, metadata {:.2f}", clean, reverse, forged);
  return o;
}

CaseReport stat_report(const std::string& id, std::optional<bool> ai, std::vector<EvidenceItem> items) {
  CaseReport r;
  r.case_id = id;
  r.evidence = seal_evidence_set(std::move(items), id);
  if (ai) r.verdict = Verdict{*ai, "d", DecidedBy::ReasoningAgent, std::nullopt};
  return r;
}

EvidenceItem ensemble(double s) { return valid_item(ToolId::Ensemble, "e", EnsembleFinding{{{"m", s, 1.0}}, {}, s}); }

Check tool_stats() {
  Check o;
  // Same trace as the unit test: 16 valid of 20, 3 + 3 consistent.
  std::vector<CaseReport> reports;
  for (int i = 0; i < 20; ++i) {
    auto item = i % 5 == 4 ? make_error_item(ToolId::Ensemble, "down") : ensemble(i % 3 == 0 ? 0.9 : 0.2);
    reports.push_back(stat_report(fmt::format("t{}", i), i < 12, {item}));
  }
  const auto s = bench::tool_reliability(reports).at(ToolId::Ensemble);
  o.require(s.decisions_total == 20 && s.valid_count == 16 && s.consistent_count == 6, "counts differ from tally");
  o.require(s.reliability && *s.reliability == 0.375, "reliability differs from 6/16");
  o.require(s.coverage == 0.8, "coverage differs from 16/20");

  std::mt19937_64 rng(31);
  for (int t = 0; t < 500 && o.ok; ++t) {
    std::vector<CaseReport> trace;
    for (int i = 0, n = static_cast<int>(rng() % 30); i < n; ++i) {
      std::vector<EvidenceItem> items;
      for (auto id : kStandardToolIds) {
        const auto roll = rng() % 4;
        if (roll == 0) {
          items.push_back(testing::empty_item(id));
        } else if (roll == 1) {
          items.push_back(make_error_item(id, "x"));
        } else if (id == ToolId::Ensemble) {
          items.push_back(ensemble(static_cast<double>(rng() % 101) / 100.0));
        } else if (id == ToolId::Vlm) {
          items.push_back(valid_item(id, "", VlmFinding{rng() % 2 == 0, {}, Confidence::Low}));
        } else {
          items.push_back(valid_item(id, "text"));
        }
      }
      std::optional<bool> v;
      if (rng() % 5) v = rng() % 2 == 0;
      trace.push_back(stat_report(fmt::format("r{}", i), v, items));
    }
    for (const auto& [id, st] : bench::tool_reliability(trace)) {
      o.require(st.consistent_count <= st.valid_count && st.valid_count <= st.decisions_total,
                fmt::format("ordering broken for {} in trace {}", to_string(id), t));
    }
  }
  if (o.ok) o.detail = "hand tally matches; ordering holds on 500 random traces";
  return o;
}

Check prompt_fidelity() {
  Check o;
  int matched = 0;
  for (auto id : agents::kAllTemplates) {
    const auto path = testing::golden_dir() / "prompts" / (std::string(agents::to_string(id)) + ".txt");
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    const bool same = std::filesystem::exists(path) && s.str() == agents::template_body(id);
    matched += same;
    o.require(same, fmt::format("{} differs from its golden file", agents::to_string(id)));
  }
  if (o.ok) o.detail = fmt::format("{}/9 templates byte-identical", matched);
  return o;
}

}  // namespace
}  // namespace tribunal

int main() {
  using namespace tribunal;
  const std::vector<Criterion> criteria{
      {"ensemble formula", 1.0, ensemble_formula},
      {"metric consistency", 1.0, metric_consistency},
      {"pipeline determinism and branch coverage", 10.0, pipeline_determinism},
      {"debate termination", 10.0, debate_termination},
      {"memory retrieval", 30.0, memory_retrieval},
      {"memory correction scenario", std::nullopt, memory_correction},
      {"metadata filter", std::nullopt, metadata_filter},
      {"robustness plumbing", std::nullopt, robustness_plumbing},
      {"attack simulation", std::nullopt, attack_simulation},
      {"tool stats", std::nullopt, tool_stats},
      {"prompt fidelity", std::nullopt, prompt_fidelity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_s && secs > *c.limit_s) {
      o = {false, fmt::format("took {:.2f}s, limit {:.0f}s", secs, *c.limit_s)};
    }
    failed += !o.ok;
    fmt::print("{} {} ({:.2f}s): {}\n", o.ok ? "PASS" : "FAIL", c.name, secs, o.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  std::cout.flush();
  return failed == 0 ? 0 : 1;
}
