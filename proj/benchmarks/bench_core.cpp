#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "tribunal/bench/perturb.hpp"
#include "tribunal/memory/knowledge_base.hpp"
#include "tribunal/model.hpp"
#include "tribunal/toolbox/ensemble.hpp"

namespace {

using namespace tribunal;

std::vector<double> random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(memory::kEmbeddingDim);
  double norm = 0;
  for (auto& x : v) {
    x = n(rng);
    norm += x * x;
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

void BM_EnsembleScore(benchmark::State& state) {
  const std::vector<double> scores{0.91, 0.86, 0.64, 0.95, 0.79};
  const std::vector<double> weights(scores.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(toolbox::ensemble_score(scores, weights));
}
BENCHMARK(BM_EnsembleScore);

void BM_KbRetrieve(benchmark::State& state) {
  std::mt19937_64 rng(1);
  memory::KnowledgeBase kb;
  for (int i = 0; i < state.range(0); ++i) {
    memory::MemoryCase c;
    c.case_id = "case" + std::to_string(i);
    c.embedding = random_unit(rng);
    kb.insert(std::move(c));
  }
  const auto query = random_unit(rng);
  for (auto _ : state) benchmark::DoNotOptimize(kb.retrieve(query));
}
BENCHMARK(BM_KbRetrieve)->Arg(100)->Arg(1000);

void BM_RenderEvidence(benchmark::State& state) {
  std::vector<EvidenceItem> items;
  for (auto id : kStandardToolIds) {
    EvidenceItem item;
    item.tool_id = id;
    item.validity = Validity::Valid;
    item.summary_text = std::string(400, 'x');
    items.push_back(std::move(item));
  }
  const auto set = seal_evidence_set(items, "bench");
  for (auto _ : state) benchmark::DoNotOptimize(render_evidence(set));
}
BENCHMARK(BM_RenderEvidence);

void BM_GaussianBlur(benchmark::State& state) {
  Image img(256, 256, 3, 100.0f);
  for (auto _ : state) benchmark::DoNotOptimize(bench::gaussian_blur(img, 2.0));
}
BENCHMARK(BM_GaussianBlur);

}  // namespace

BENCHMARK_MAIN();
