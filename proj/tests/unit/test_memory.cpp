#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "test_support.hpp"
#include "tribunal/error.hpp"
#include "tribunal/memory/knowledge_base.hpp"
#include "tribunal/memory/memory_tool.hpp"

namespace tribunal::memory {
namespace {

using testing::random_unit;
using testing::reply;
using testing::ScriptedChat;

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

MemoryCase make_case(std::string id, std::vector<double> emb, Outcome outcome = Outcome::Success,
                     Label truth = Label::Real) {
  MemoryCase c;
  c.case_id = std::move(id);
  c.embedding = std::move(emb);
  c.true_label = truth;
  c.outcome = outcome;
  c.predicted_label = outcome == Outcome::Success ? truth : (truth == Label::Ai ? Label::Real : Label::Ai);
  c.evidence_snapshot = "evidence";
  c.reasoning_snapshot = "reasoning";
  if (outcome == Outcome::Failure) c.reflection = "lesson";
  return c;
}

std::vector<double> axis(std::size_t i) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  v[i] = 1.0;
  return v;
}

// Unit vector at the given cosine to axis(a), in the a/b plane.
std::vector<double> tilted(std::size_t a, std::size_t b, double cosine) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  v[a] = cosine;
  v[b] = std::sqrt(1.0 - cosine * cosine);
  return v;
}

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

TEST(Cosine, ValuesAndErrors) {
  const std::vector<double> a{1, 0}, b{0, 2}, c{-3, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, c), -1.0);
  const std::vector<double> z{0, 0}, three{1, 2, 3};
  EXPECT_EQ(code_of([&] { (void)cosine_similarity(a, z); }), ErrorCode::ZeroVector);
  EXPECT_EQ(code_of([&] { (void)cosine_similarity(a, three); }), ErrorCode::DimMismatch);
}

TEST(Cosine, PropertyBoundedSymmetricScaleInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> a(1 + rng() % 64), b;
    for (auto& x : a) x = u(rng);
    for (std::size_t i = 0; i < a.size(); ++i) b.push_back(u(rng));
    const double s = cosine_similarity(a, b);
    ASSERT_LE(std::abs(s), 1.0 + 1e-12);
    ASSERT_NEAR(s, cosine_similarity(b, a), 1e-12);
    auto scaled = a;
    for (auto& x : scaled) x *= 3.5;
    ASSERT_NEAR(s, cosine_similarity(scaled, b), 1e-12);
    ASSERT_NEAR(s, naive_cosine(a, b), 1e-9);
  }
}

TEST(KnowledgeBase, Defaults) {
  KnowledgeBase kb;
  EXPECT_EQ(kb.params().k, 1u);
  EXPECT_DOUBLE_EQ(kb.params().threshold, 0.85);
  EXPECT_EQ(code_of([] { RetrievalParams{0, 0.5}.validate(); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { RetrievalParams{1, 1.5}.validate(); }), ErrorCode::ConfigError);
}

TEST(KnowledgeBase, ThresholdBoundaryAndTopOne) {
  KnowledgeBase kb;
  kb.insert(make_case("above", tilted(0, 1, 0.86)));
  kb.insert(make_case("below", tilted(0, 2, 0.84)));
  kb.insert(make_case("best", tilted(0, 3, 0.95), Outcome::Failure, Label::Ai));
  auto hits = kb.retrieve(axis(0));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].memory_case.case_id, "best");
  EXPECT_NEAR(hits[0].similarity, 0.95, 1e-12);

  hits = kb.retrieve(axis(0), {5, 0.85});
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[1].memory_case.case_id, "above");
  EXPECT_TRUE(kb.retrieve(axis(7)).empty());
}

TEST(KnowledgeBase, TiesBrokenByCaseId) {
  KnowledgeBase kb({3, 0.5});
  kb.insert(make_case("b", axis(0)));
  kb.insert(make_case("a", axis(0), Outcome::Failure));
  kb.insert(make_case("c", axis(0)));
  const auto hits = kb.retrieve(axis(0));
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].memory_case.case_id, "a");
  EXPECT_EQ(hits[1].memory_case.case_id, "b");
  EXPECT_EQ(hits[2].memory_case.case_id, "c");
}

// Property: retrieval matches a brute-force scan for random stores, queries,
// k and threshold.
TEST(KnowledgeBase, PropertyMatchesBruteForce) {
  std::mt19937_64 rng(99);
  constexpr std::size_t kDim = kEmbeddingDim;
  for (int trial = 0; trial < 30; ++trial) {
    KnowledgeBase kb;
    std::vector<MemoryCase> all;
    const auto base = random_unit(rng, kDim);
    const int n = 20 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      // Mix near-duplicates of a base vector with unrelated ones.
      auto v = random_unit(rng, kDim);
      if (rng() % 2) {
        for (std::size_t d = 0; d < kDim; ++d) v[d] = base[d] + 0.02 * (rng() % 10) * v[d];
      }
      auto c = make_case(fmt::format("c{:03d}", i), v, rng() % 3 ? Outcome::Success : Outcome::Failure);
      kb.insert(c);
      all.push_back(c);
    }
    const RetrievalParams params{1 + rng() % 5, 0.3 + 0.1 * (rng() % 7)};
    const auto query = base;
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& c : all) {
      const double s = naive_cosine(query, c.embedding);
      if (s >= params.threshold) expected.emplace_back(s, c.case_id);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    if (expected.size() > params.k) expected.resize(params.k);
    const auto hits = kb.retrieve(query, params);
    ASSERT_EQ(hits.size(), expected.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      ASSERT_EQ(hits[i].memory_case.case_id, expected[i].second);
      ASSERT_NEAR(hits[i].similarity, expected[i].first, 1e-9);
    }
  }
}

TEST(KnowledgeBase, UpsertMovesBetweenIndices) {
  KnowledgeBase kb;
  kb.insert(make_case("x", axis(0)));
  EXPECT_EQ(kb.success_size(), 1u);
  kb.insert(make_case("x", axis(1), Outcome::Failure));
  EXPECT_EQ(kb.success_size(), 0u);
  EXPECT_EQ(kb.failure_size(), 1u);
  EXPECT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb.get("x")->outcome, Outcome::Failure);
  EXPECT_FALSE(kb.get("y"));
}

TEST(KnowledgeBase, RejectsInvalidCases) {
  KnowledgeBase kb;
  EXPECT_EQ(code_of([&] { kb.insert(make_case("short", {1.0, 0.0})); }), ErrorCode::InvariantViolation);
  auto no_reflection = make_case("f", axis(0), Outcome::Failure);
  no_reflection.reflection.clear();
  EXPECT_EQ(code_of([&] { kb.insert(no_reflection); }), ErrorCode::InvariantViolation);
  auto inconsistent = make_case("s", axis(0));
  inconsistent.predicted_label = Label::Ai;
  EXPECT_EQ(code_of([&] { validate_memory_case(inconsistent); }), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of([&] { (void)kb.retrieve(std::vector<double>{1.0}); }), ErrorCode::DimMismatch);
  EXPECT_EQ(kb.size(), 0u);
}

TEST(KnowledgeBase, SaveLoadRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(5);
  KnowledgeBase kb({2, 0.4});
  for (int i = 0; i < 25; ++i) {
    auto c = make_case(fmt::format("case/{}", i), random_unit(rng, kEmbeddingDim),
                       i % 4 == 0 ? Outcome::Failure : Outcome::Success, i % 2 ? Label::Ai : Label::Real);
    c.reflection_machine_generated = i % 8 != 0;
    kb.insert(c);
  }
  kb.save(dir.path());
  const auto back = KnowledgeBase::load(dir.path());
  EXPECT_EQ(back->cases(), kb.cases());
  EXPECT_EQ(back->success_size(), kb.success_size());
  EXPECT_EQ(back->params().k, 2u);
  const auto q = random_unit(rng, kEmbeddingDim);
  const auto a = kb.retrieve(q, {3, -1.0});
  const auto b = back->retrieve(q, {3, -1.0});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].memory_case.case_id, b[i].memory_case.case_id);

  const auto overridden = KnowledgeBase::load(dir.path(), RetrievalParams{1, 0.85});
  EXPECT_EQ(overridden->params().k, 1u);
  EXPECT_ANY_THROW((void)KnowledgeBase::load(dir / "missing"));
}

class FixedEmbedder final : public EmbedProvider {
 public:
  explicit FixedEmbedder(std::vector<double> v) : v_(std::move(v)) {}
  std::vector<double> embed(const ImageCase&) const override {
    if (v_.empty()) throw Error(ErrorCode::BackendUnavailable, "sidecar down");
    return v_;
  }

 private:
  std::vector<double> v_;
};

TEST(MemoryTool, RendersHitWithReflection) {
  auto kb = std::make_shared<KnowledgeBase>();
  auto c = make_case("old", tilted(0, 1, 0.9), Outcome::Failure, Label::Ai);
  c.reflection = "stripped metadata fooled the judge";
  kb->insert(c);
  MemoryTool tool(kb, std::make_shared<FixedEmbedder>(axis(0)));
  const auto item = tool.run({"q", "", std::nullopt, ""});
  EXPECT_EQ(item.validity, Validity::Valid);
  EXPECT_NE(item.summary_text.find("old"), std::string::npos);
  EXPECT_NE(item.summary_text.find("stripped metadata fooled the judge"), std::string::npos);
  const auto& f = std::get<MemoryFinding>(item.payload);
  ASSERT_EQ(f.hits.size(), 1u);
  EXPECT_EQ(f.hits[0].outcome, Outcome::Failure);

  MemoryTool miss(kb, std::make_shared<FixedEmbedder>(axis(5)));
  EXPECT_EQ(miss.run({"q", "", std::nullopt, ""}).validity, Validity::Empty);
  MemoryTool broken(kb, std::make_shared<FixedEmbedder>(std::vector<double>{}));
  EXPECT_EQ(broken.run({"q", "", std::nullopt, ""}).validity, Validity::Error);
}

TEST(MemoryTool, ReplayEmbeddingsAreUnitLength) {
  ReplayEmbedProvider e(testing::tool_fixtures());
  const auto v = e.embed(testing::fixture_case("ms_query_01"));
  ASSERT_EQ(v.size(), kEmbeddingDim);
  EXPECT_NEAR(naive_cosine(v, v), 1.0, 1e-12);
  EXPECT_EQ(code_of([&] { (void)e.embed({"nope", "", std::nullopt, ""}); }), ErrorCode::MissingFixture);
}

TEST(Reflection, GeneratedAndPlaceholder) {
  const auto failed = make_case("f", axis(0), Outcome::Failure, Label::Ai);
  ScriptedChat ok([](const agents::ChatRequest&) { return reply("Do not trust stripped metadata."); });
  agents::AgentSession s1(ok, "f");
  const auto r = generate_reflection(failed, s1);
  EXPECT_TRUE(r.machine_generated);
  EXPECT_EQ(ok.steps(), std::vector<std::string>{"reflection"});
  const auto& prompt = ok.requests()[0].messages.back().content;
  EXPECT_NE(prompt.find("AI-generated"), std::string::npos);
  EXPECT_NE(prompt.find("evidence"), std::string::npos);

  ScriptedChat down([](const agents::ChatRequest&) -> agents::ChatReply {
    throw Error(ErrorCode::BackendUnavailable, "down");
  });
  agents::AgentSession s2(down, "f");
  const auto p = generate_reflection(failed, s2);
  EXPECT_FALSE(p.machine_generated);
  EXPECT_FALSE(p.text.empty());

  agents::AgentSession s3(ok, "s");
  EXPECT_EQ(code_of([&] { (void)generate_reflection(make_case("s", axis(0)), s3); }),
            ErrorCode::PreconditionViolation);
}

}  // namespace
}  // namespace tribunal::memory
