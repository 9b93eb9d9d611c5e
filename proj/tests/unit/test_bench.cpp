#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "published.hpp"
#include "test_support.hpp"
#include "tribunal/bench/attack.hpp"
#include "tribunal/bench/batch.hpp"
#include "tribunal/bench/cost.hpp"
#include "tribunal/bench/kb_build.hpp"
#include "tribunal/bench/manifest.hpp"
#include "tribunal/bench/metrics.hpp"
#include "tribunal/bench/perturb.hpp"
#include "tribunal/error.hpp"
#include "tribunal/image.hpp"
#include "tribunal/serialization.hpp"

namespace tribunal::bench {
namespace {

using testing::empty_item;
using testing::valid_item;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tribunal::Error";
  return ErrorCode::IoError;
}

CaseReport report_with(std::string id, std::optional<bool> ai, std::vector<EvidenceItem> items = {}) {
  CaseReport r;
  r.case_id = id;
  if (items.empty()) items.push_back(valid_item(ToolId::Vlm, "v"));
  r.evidence = seal_evidence_set(std::move(items), id);
  if (ai) r.verdict = Verdict{*ai, "details", DecidedBy::ReasoningAgent, std::nullopt};
  return r;
}

EvidenceItem ensemble_item(double score) {
  return valid_item(ToolId::Ensemble, "scores", EnsembleFinding{{{"m", score, 1.0}}, {}, score});
}

// ---- manifest -----------------------------------------------------------------

TEST(Manifest, ParsesAndResolvesPaths) {
  const auto m = load_manifest(testing::manifest_path("bench4"));
  ASSERT_EQ(m.entries.size(), 4u);
  EXPECT_TRUE(m.fully_labeled());
  EXPECT_EQ(m.entries[0].id, "b_real_1");
  EXPECT_EQ(m.entries[1].setting, Setting::InTheWild);
  EXPECT_TRUE(std::filesystem::exists(m.entries[2].path));
  EXPECT_EQ(m.find("b_ai_2")->label, Label::Ai);
  EXPECT_EQ(m.find("nope"), nullptr);
}

TEST(Manifest, Errors) {
  const auto base = std::filesystem::path("/tmp");
  EXPECT_EQ(code_of([&] { (void)parse_manifest("{not json}\n", base, false); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([&] { (void)parse_manifest(R"({"path":"a.png","label":"maybe"})", base, false); }),
            ErrorCode::ConfigError);
  EXPECT_EQ(code_of([&] {
              (void)parse_manifest("{\"path\":\"a.png\"}\n{\"path\":\"x/a.png\"}\n", base, false);
            }),
            ErrorCode::ConfigError);
  EXPECT_EQ(code_of([&] { (void)parse_manifest(R"({"path":"does-not-exist.png"})", base); }),
            ErrorCode::UnreadableFile);
  const auto unlabeled = parse_manifest("{\"path\":\"a.png\"}\n\n", base, false);
  ASSERT_EQ(unlabeled.entries.size(), 1u);
  EXPECT_EQ(unlabeled.entries[0].id, "a");
  EXPECT_FALSE(unlabeled.fully_labeled());
  EXPECT_EQ(code_of([&] { require_labels(unlabeled); }), ErrorCode::ConfigError);
}

// ---- metrics ------------------------------------------------------------------

TEST(Metrics, Formulas) {
  const auto perfect = EvalMetrics::from_counts(2, 2, 0, 0);
  EXPECT_DOUBLE_EQ(perfect.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(perfect.f1, 1.0);
  const auto none = EvalMetrics::from_counts(0, 5, 0, 0);
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.recall, 0.0);
  EXPECT_DOUBLE_EQ(none.f1, 0.0);
  EXPECT_DOUBLE_EQ(EvalMetrics::from_counts(0, 0, 0, 0).accuracy, 0.0);
  const auto m = EvalMetrics::from_counts(3, 4, 1, 2);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_DOUBLE_EQ(m.f1, 2 * 0.75 * 0.6 / 1.35);
  EXPECT_NEAR(f1_score(0.9920, 0.9487), 0.9698, 5e-4);
}

TEST(Metrics, PublishedF1Recomputes) {
  for (const auto& c : testing::kPublishedMetrics) {
    EXPECT_NEAR(f1_score(c.precision, c.recall), c.f1, 1e-3) << c.method << " " << c.split;
  }
}

TEST(Metrics, EvaluateTalliesAndSplits) {
  const auto m = load_manifest(testing::manifest_path("bench4"));
  // b_real_1 right, b_real_2 wrong, b_ai_1 right, b_ai_2 failed (counts wrong).
  std::vector<CaseReport> reports{report_with("b_ai_2", std::nullopt), report_with("b_real_1", false),
                                  report_with("b_real_2", true), report_with("b_ai_1", true)};
  const auto e = evaluate(reports, m);
  EXPECT_EQ(e.overall, EvalMetrics::from_counts(1, 1, 1, 1));
  EXPECT_EQ(e.per_setting.at(Setting::InTheLab), EvalMetrics::from_counts(1, 1, 0, 0));
  EXPECT_EQ(e.per_setting.at(Setting::InTheWild), EvalMetrics::from_counts(0, 0, 1, 1));
  reports.pop_back();
  EXPECT_EQ(code_of([&] { (void)evaluate(reports, m); }), ErrorCode::MissingReport);
  const auto csv = confusion_csv(e);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "split,tp,tn,fp,fn,accuracy,precision,recall,f1");
}

// Property: random labels and predictions tally like a direct count, in any
// report order.
TEST(Metrics, PropertyTallyAndPermutationInvariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Manifest m;
    std::vector<CaseReport> reports;
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
    const int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      const bool truth_ai = rng() % 2;
      const bool pred_ai = rng() % 2;
      const auto id = fmt::format("c{}", i);
      m.entries.push_back({id, "", truth_ai ? Label::Ai : Label::Real, Setting::InTheLab, ""});
      reports.push_back(report_with(id, pred_ai));
      if (truth_ai && pred_ai) ++tp;
      if (!truth_ai && !pred_ai) ++tn;
      if (!truth_ai && pred_ai) ++fp;
      if (truth_ai && !pred_ai) ++fn;
    }
    const auto a = evaluate(reports, m);
    ASSERT_EQ(a.overall, EvalMetrics::from_counts(tp, tn, fp, fn));
    std::shuffle(reports.begin(), reports.end(), rng);
    ASSERT_EQ(evaluate(reports, m).overall, a.overall);
  }
}

// ---- tool stats -----------------------------------------------------------------

TEST(ToolStats, DirectionRules) {
  EXPECT_EQ(direction_of(ensemble_item(0.51)), Direction::AiLeaning);
  EXPECT_EQ(direction_of(ensemble_item(0.5)), Direction::RealLeaning);
  EXPECT_EQ(direction_of(valid_item(ToolId::Vlm, "", VlmFinding{true, {}, Confidence::Low})), Direction::AiLeaning);
  EXPECT_EQ(direction_of(valid_item(ToolId::ReverseExact, "",
                                    ReverseSearchFinding{MatchKind::Exact, {}, Provenance::AiPlatform})),
            Direction::AiLeaning);
  EXPECT_EQ(direction_of(valid_item(ToolId::ReverseExact, "",
                                    ReverseSearchFinding{MatchKind::Exact, {}, Provenance::NewsSite})),
            Direction::RealLeaning);
  EXPECT_EQ(direction_of(valid_item(ToolId::ReverseExact, "",
                                    ReverseSearchFinding{MatchKind::Exact, {}, Provenance::Unknown})),
            Direction::Neutral);
  MetadataFinding md;
  md.fields_kept = {{"EXIF:Make", "Canon"}, {"EXIF:Model", "EOS"}, {"JUMBF:Description", "x"}};
  md.signals = {{"EXIF:Make", SignalClass::RealSignal},
                {"EXIF:Model", SignalClass::RealSignal},
                {"JUMBF:Description", SignalClass::AiSignal}};
  EXPECT_EQ(direction_of(valid_item(ToolId::Metadata, "", md)), Direction::RealLeaning);
  auto failed = make_error_item(ToolId::Ensemble, "down");
  failed.payload = EnsembleFinding{{}, {}, 0.9};
  EXPECT_EQ(direction_of(failed), Direction::Neutral);
}

// 20 cases: verdict ai for i < 12, real after. The ensemble item is an error
// for i % 5 == 4 and otherwise scores 0.9 when i % 3 == 0, else 0.2.
//   valid: 16 of 20
//   consistent, ai verdicts  (0 1 2 3 5 6 7 8 10 11 -> score 0.9 at 0 3 6): 3
//   consistent, real verdicts (12 13 15 16 17 18  -> score 0.2 at 13 16 17): 3
// A 21st case without a verdict is ignored.
TEST(ToolStats, TwentyCaseHandTally) {
  std::vector<CaseReport> reports;
  for (int i = 0; i < 20; ++i) {
    auto item = i % 5 == 4 ? make_error_item(ToolId::Ensemble, "down") : ensemble_item(i % 3 == 0 ? 0.9 : 0.2);
    reports.push_back(report_with(fmt::format("t{}", i), i < 12, {item, empty_item(ToolId::Metadata)}));
  }
  reports.push_back(report_with("failed", std::nullopt, {ensemble_item(0.9)}));
  const auto stats = tool_reliability(reports);
  const auto& e = stats.at(ToolId::Ensemble);
  EXPECT_EQ(e.decisions_total, 20);
  EXPECT_EQ(e.valid_count, 16);
  EXPECT_EQ(e.directional_count, 16);
  EXPECT_EQ(e.consistent_count, 6);
  ASSERT_TRUE(e.reliability);
  EXPECT_DOUBLE_EQ(*e.reliability, 0.375);
  EXPECT_DOUBLE_EQ(e.coverage, 0.8);
  const auto& md = stats.at(ToolId::Metadata);
  EXPECT_EQ(md.valid_count, 0);
  EXPECT_DOUBLE_EQ(md.coverage, 0.0);
  EXPECT_FALSE(md.reliability);
  EXPECT_TRUE(to_json(stats)["metadata"]["reliability"].is_null());
}

TEST(ToolStats, SingleAgreeingCase) {
  const std::vector<CaseReport> r{
      report_with("a", true, {valid_item(ToolId::Vlm, "", VlmFinding{true, {}, Confidence::High})})};
  const auto s = tool_reliability(r).at(ToolId::Vlm);
  EXPECT_DOUBLE_EQ(*s.reliability, 1.0);
  EXPECT_DOUBLE_EQ(s.coverage, 1.0);
}

// Property: consistent <= directional <= valid <= total on random traces.
TEST(ToolStats, PropertyCountsAreNested) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<CaseReport> reports;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      std::vector<EvidenceItem> items;
      for (auto id : kStandardToolIds) {
        switch (rng() % 4) {
          case 0: items.push_back(empty_item(id)); break;
          case 1: items.push_back(make_error_item(id, "x")); break;
          default:
            if (id == ToolId::Ensemble) {
              items.push_back(ensemble_item(static_cast<double>(rng() % 101) / 100.0));
            } else if (id == ToolId::Vlm) {
              items.push_back(valid_item(id, "", VlmFinding{rng() % 2 == 0, {}, Confidence::Low}));
            } else {
              items.push_back(valid_item(id, "plain text"));
            }
        }
      }
      std::optional<bool> verdict;
      if (rng() % 5) verdict = rng() % 2 == 0;
      reports.push_back(report_with(fmt::format("r{}", i), verdict, items));
    }
    for (const auto& [id, s] : tool_reliability(reports)) {
      ASSERT_LE(s.consistent_count, s.directional_count);
      ASSERT_LE(s.directional_count, s.valid_count);
      ASSERT_LE(s.valid_count, s.decisions_total);
      ASSERT_GE(s.coverage, 0.0);
      ASSERT_LE(s.coverage, 1.0);
      if (s.reliability) {
        ASSERT_GE(*s.reliability, 0.0);
        ASSERT_LE(*s.reliability, 1.0);
      }
    }
  }
}

// ---- perturbations ----------------------------------------------------------------

Image random_image(std::mt19937_64& rng, int w, int h, int c) {
  Image img(w, h, c);
  for (auto& v : img.data) v = static_cast<float>(rng() % 256);
  return img;
}

TEST(Perturb, Defaults) {
  const PerturbParams p;
  EXPECT_DOUBLE_EQ(p.blur_radius, 2.0);
  EXPECT_DOUBLE_EQ(p.sharpen_factor, 2.0);
  EXPECT_DOUBLE_EQ(p.noise_variance, 2.0);
  EXPECT_EQ(parse_perturb_kind("noise"), PerturbKind::Noise);
  EXPECT_FALSE(parse_perturb_kind("jpeg"));
}

TEST(Perturb, NoiseStatistics) {
  const Image gray(400, 300, 3, 128.0f);
  const auto noisy = add_gaussian_noise(gray, 2.0, 42);
  const auto n = static_cast<double>(noisy.data.size());
  ASSERT_GE(n, 1e5);
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < noisy.data.size(); ++i) {
    const double d = static_cast<double>(noisy.data[i]) - 128.0;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_LT(std::abs(mean), 0.1);
  EXPECT_NEAR(var, 2.0, 0.3);
  EXPECT_EQ(noisy, add_gaussian_noise(gray, 2.0, 42));
  EXPECT_NE(noisy, add_gaussian_noise(gray, 2.0, 43));
}

TEST(Perturb, NoiseIsClamped) {
  const Image white(50, 50, 1, 255.0f);
  const auto out = add_gaussian_noise(white, 400.0, 1);
  for (float v : out.data) {
    ASSERT_GE(v, 0.0f);
    ASSERT_LE(v, 255.0f);
  }
}

TEST(Perturb, NeutralParametersAreIdentities) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto img = random_image(rng, 1 + rng() % 40, 1 + rng() % 40, 1 + rng() % 3);
    EXPECT_EQ(gaussian_blur(img, 0.0), img);
    EXPECT_EQ(sharpen(img, 1.0), img);
  }
}

// Property: every perturbation keeps the shape and the sample range.
TEST(Perturb, PropertyShapePreserved) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto img = random_image(rng, 1 + rng() % 30, 1 + rng() % 30, 1 + rng() % 4);
    for (auto kind : {PerturbKind::Blur, PerturbKind::Sharpen, PerturbKind::Noise}) {
      const auto out = perturb(img, kind);
      ASSERT_EQ(out.width, img.width);
      ASSERT_EQ(out.height, img.height);
      ASSERT_EQ(out.channels, img.channels);
      for (float v : out.data) {
        ASSERT_GE(v, 0.0f);
        ASSERT_LE(v, 255.0f);
      }
    }
  }
}

TEST(Perturb, BlurSmoothsAConstantImageToItself) {
  const Image flat(20, 10, 3, 77.0f);
  const auto out = gaussian_blur(flat, 2.0);
  for (float v : out.data) ASSERT_NEAR(v, 77.0f, 1e-3);
}

TEST(Image, RoundTripAndDecodeErrors) {
  testing::TempDir dir;
  std::mt19937_64 rng(4);
  const auto img = random_image(rng, 17, 9, 3);
  save_image(img, dir / "a.png");
  EXPECT_EQ(load_image(dir / "a.png"), img);
  save_image(img, dir / "a.ppm");
  EXPECT_EQ(load_image(dir / "a.ppm"), img);
  save_image(img, dir / "a.jpg");
  const auto jpg = load_image(dir / "a.jpg");
  EXPECT_EQ(jpg.width, 17);
  EXPECT_EQ(jpg.channels, 3);
  std::ofstream(dir / "bad.png") << "not an image";
  EXPECT_EQ(code_of([&] { (void)load_image(dir / "bad.png"); }), ErrorCode::DecodeError);
  const auto fixture = load_image(testing::image_path("walkthrough_real"));
  EXPECT_EQ(fixture.width, 16);
}

// ---- attacks ---------------------------------------------------------------------

EvidenceSet full_set(const std::string& id) {
  MetadataFinding real_md;
  real_md.fields_kept = {{"EXIF:Make", "Canon"}};
  real_md.signals = {{"EXIF:Make", SignalClass::RealSignal}};
  return seal_evidence_set({valid_item(ToolId::ReverseExact, "original exact"),
                            valid_item(ToolId::ReverseSimilar, "original similar"),
                            valid_item(ToolId::Metadata, "original metadata", real_md), ensemble_item(0.3),
                            valid_item(ToolId::Vlm, "original vlm")},
                           id);
}

ForgeryPool sample_pool() {
  ForgeryPool pool;
  MetadataFinding ai_md;
  ai_md.fields_kept = {{"JUMBF:Description", "c2pa"}};
  ai_md.signals = {{"JUMBF:Description", SignalClass::AiSignal}};
  pool.add(Label::Ai, ai_md);
  MetadataFinding real_md;
  real_md.fields_kept = {{"EXIF:Make", "Nikon"}};
  real_md.signals = {{"EXIF:Make", SignalClass::RealSignal}};
  pool.add(Label::Real, real_md);
  return pool;
}

TEST(Attack, CounterfactualProvenance) {
  EXPECT_EQ(counterfactual_search(Label::Real, MatchKind::Exact, "x").provenance_hint, Provenance::AiPlatform);
  EXPECT_NE(counterfactual_search(Label::Ai, MatchKind::Similar, "x").provenance_hint, Provenance::AiPlatform);
  EXPECT_EQ(counterfactual_search(Label::Ai, MatchKind::Exact, "x"), counterfactual_search(Label::Ai, MatchKind::Exact, "x"));
}

// Property: an attack changes only its targeted tools, keeps tool order and
// points the replaced items away from the true label.
TEST(Attack, PropertyFrame) {
  const auto pool = sample_pool();
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto id = fmt::format("case{}", rng());
    auto set = full_set(id);
    if (rng() % 3 == 0) set = set.without(ToolId::Metadata);
    if (rng() % 3 == 0) set = set.without(ToolId::ReverseSimilar);
    const auto truth = rng() % 2 ? Label::Ai : Label::Real;
    const auto kind = rng() % 2 ? AttackKind::ReverseManipulation : AttackKind::MetadataForgery;
    const auto out = simulate_attack(set, kind, truth, pool);
    const std::set<ToolId> targets = kind == AttackKind::ReverseManipulation
                                         ? std::set<ToolId>{ToolId::ReverseExact, ToolId::ReverseSimilar}
                                         : std::set<ToolId>{ToolId::Metadata};
    for (const auto& item : set.items()) {
      if (targets.contains(item.tool_id)) continue;
      ASSERT_EQ(*out.find(item.tool_id), item);
    }
    const auto away = truth == Label::Ai ? Direction::RealLeaning : Direction::AiLeaning;
    for (auto target : targets) {
      ASSERT_NE(out.find(target), nullptr);
      ASSERT_EQ(direction_of(*out.find(target)), away);
    }
    ToolId prev = out.items().front().tool_id;
    for (const auto& item : out.items()) {
      ASSERT_GE(item.tool_id, prev);
      prev = item.tool_id;
    }
    ASSERT_EQ(out.case_id(), id);
  }
}

TEST(Attack, EmptyPool) {
  EXPECT_EQ(code_of([] { (void)simulate_attack(full_set("x"), AttackKind::MetadataForgery, Label::Ai, ForgeryPool{}); }),
            ErrorCode::EmptyPool);
  EXPECT_NO_THROW((void)simulate_attack(full_set("x"), AttackKind::ReverseManipulation, Label::Ai, ForgeryPool{}));
}

// ---- cost ------------------------------------------------------------------------

TEST(Cost, Means) {
  EXPECT_EQ(cost_report({}).cases, 0u);
  std::vector<CaseReport> reports;
  double latency = 0, tokens = 0, debate = 0;
  for (int i = 0; i < 10; ++i) {
    auto r = report_with(fmt::format("c{}", i), true);
    r.totals = {1000 + 100 * i, 500 + 10 * i};
    r.agent_calls = {{"sufficiency", Phase::Reasoning, 10, 1}, {"judge_final", Phase::Debate, i, 0}};
    latency += 1000 + 100 * i;
    tokens += 500 + 10 * i;
    debate += i;
    reports.push_back(r);
  }
  const auto c = cost_report(reports);
  EXPECT_DOUBLE_EQ(c.avg_latency_ms, latency / 10);
  EXPECT_DOUBLE_EQ(c.avg_tokens, tokens / 10);
  EXPECT_DOUBLE_EQ(c.avg_reasoning_tokens, 11.0);
  EXPECT_DOUBLE_EQ(c.avg_debate_tokens, debate / 10);
  const auto one = cost_report(std::vector<CaseReport>{reports[0]});
  EXPECT_DOUBLE_EQ(one.avg_latency_ms, 1000);
  EXPECT_DOUBLE_EQ(one.avg_tokens, 500);
}

// ---- batch and kb build -------------------------------------------------------------

TEST(Batch, ReportFileNames) {
  EXPECT_EQ(report_file_name("b_real_1"), "b_real_1.json");
  const auto odd = report_file_name("a/b");
  EXPECT_EQ(odd.find('/'), std::string::npos);
  EXPECT_NE(odd, report_file_name("a_b"));
}

TEST(Batch, RunsWritesAndResumes) {
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto m = load_manifest(testing::manifest_path("bench4"));
  BatchOptions opt;
  opt.out_dir = dir.path();
  opt.jobs = 2;
  const auto r = run_batch(m, {}, rig.providers, opt);
  ASSERT_EQ(r.reports.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.reports[i].case_id, m.entries[i].id);
    EXPECT_TRUE(std::filesystem::exists(dir / "reports" / report_file_name(m.entries[i].id)));
  }
  EXPECT_EQ(r.failed, 0u);
  EXPECT_DOUBLE_EQ(r.evaluation.overall.accuracy, 1.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "confusion.csv"));
  EXPECT_EQ(r.summary["cases"], 4);

  opt.resume = true;
  const auto again = run_batch(m, {}, rig.providers, opt);
  EXPECT_EQ(again.resumed, 4u);
  EXPECT_EQ(again.evaluation.overall, r.evaluation.overall);
}

TEST(Batch, AblationAndPerturbation) {
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto m = load_manifest(testing::manifest_path("bench4"));
  BatchOptions opt;
  opt.out_dir = dir / "ablate";
  opt.ablate = ToolId::Vlm;
  const auto r = run_batch(m, {}, rig.providers, opt);
  for (const auto& rep : r.reports) EXPECT_FALSE(rep.evidence.contains(ToolId::Vlm));

  BatchOptions blur;
  blur.out_dir = dir / "blur";
  blur.perturb = PerturbKind::Blur;
  const auto b = run_batch(m, {}, rig.providers, blur);
  EXPECT_EQ(b.reports.size(), 4u);
  for (const auto& e : m.entries) {
    EXPECT_TRUE(std::filesystem::exists(dir / "blur" / "perturbed" / (e.id + ".png")));
  }
  EXPECT_EQ(code_of([&] {
              BatchOptions bad;
              bad.out_dir = dir / "bad";
              bad.jobs = 0;
              (void)run_batch(m, {}, rig.providers, bad);
            }),
            ErrorCode::ConfigError);
}

TEST(Batch, AttacksDegradeAccuracy) {
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto m = load_manifest(testing::manifest_path("attack"));
  BatchOptions clean;
  clean.out_dir = dir / "clean";
  const double base = run_batch(m, {}, rig.providers, clean).evaluation.overall.accuracy;
  for (auto kind : {AttackKind::ReverseManipulation, AttackKind::MetadataForgery}) {
    BatchOptions opt;
    opt.out_dir = dir / std::string(to_string(kind));
    opt.attack = kind;
    const double acc = run_batch(m, {}, rig.providers, opt).evaluation.overall.accuracy;
    EXPECT_LT(acc, base) << to_string(kind);
  }
}

TEST(KbBuild, CountsAndIdempotence) {
  testing::TempDir dir;
  testing::ReplayRig rig;
  const auto m = load_manifest(testing::manifest_path("kb6"));
  const auto r = build_knowledge_base(m, {}, rig.providers, *rig.embedder, dir.path());
  EXPECT_EQ(r.successes, 5u);
  EXPECT_EQ(r.failures, 1u);
  EXPECT_EQ(r.placeholder_reflections, 0u);
  EXPECT_TRUE(r.skipped.empty());
  const auto kb = memory::KnowledgeBase::load(dir.path());
  EXPECT_EQ(kb->success_size(), 5u);
  EXPECT_EQ(kb->failure_size(), 1u);
  const auto failed = kb->get("kb_fail_1");
  ASSERT_TRUE(failed);
  EXPECT_FALSE(failed->reflection.empty());

  (void)build_knowledge_base(m, {}, rig.providers, *rig.embedder, dir.path());
  const auto again = memory::KnowledgeBase::load(dir.path());
  EXPECT_EQ(again->cases(), kb->cases());
}

}  // namespace
}  // namespace tribunal::bench
