#include "tribunal/memory/knowledge_base.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::memory {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'R', 'K', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

std::string case_file_name(const std::string& id) {
  std::string safe;
  bool changed = false;
  for (char c : id) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') {
      safe += c;
    } else {
      safe += '_';
      changed = true;
    }
  }
  if (safe.empty() || safe.front() == '.') changed = true;
  if (changed) safe += fmt::format("-{:016x}", text::stable_hash(id));
  return safe + ".json";
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::IoError, "truncated knowledge base index");
  return v;
}

bool ranks_before(const ScoredCase& a, const ScoredCase& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.memory_case.case_id < b.memory_case.case_id;
}

}  // namespace

void to_json(nlohmann::json& j, const MemoryCase& c) {
  j = {{"case_id", c.case_id},
       {"true_label", c.true_label},
       {"predicted_label", c.predicted_label},
       {"outcome", c.outcome},
       {"evidence_snapshot", c.evidence_snapshot},
       {"reasoning_snapshot", c.reasoning_snapshot},
       {"reflection", c.reflection},
       {"reflection_machine_generated", c.reflection_machine_generated}};
}

void from_json(const nlohmann::json& j, MemoryCase& c) {
  j.at("case_id").get_to(c.case_id);
  j.at("true_label").get_to(c.true_label);
  j.at("predicted_label").get_to(c.predicted_label);
  j.at("outcome").get_to(c.outcome);
  c.evidence_snapshot = j.value("evidence_snapshot", "");
  c.reasoning_snapshot = j.value("reasoning_snapshot", "");
  c.reflection = j.value("reflection", "");
  c.reflection_machine_generated = j.value("reflection_machine_generated", true);
}

void validate_memory_case(const MemoryCase& c) {
  auto fail = [&](std::string_view why) {
    throw Error(ErrorCode::InvariantViolation, fmt::format("memory case '{}': {}", c.case_id, why));
  };
  if (c.case_id.empty()) fail("empty case id");
  if (c.embedding.size() != kEmbeddingDim) fail(fmt::format("embedding has {} values, expected {}", c.embedding.size(), kEmbeddingDim));
  if (std::any_of(c.embedding.begin(), c.embedding.end(), [](double x) { return !std::isfinite(x); })) {
    fail("embedding has non-finite values");
  }
  if (std::all_of(c.embedding.begin(), c.embedding.end(), [](double x) { return x == 0.0; })) fail("embedding is all zeros");
  const bool correct = c.predicted_label == c.true_label;
  if (c.outcome == Outcome::Success && !correct) fail("success case with a wrong prediction");
  if (c.outcome == Outcome::Failure && correct) fail("failure case with a correct prediction");
  if (c.outcome == Outcome::Failure && text::trim(c.reflection).empty()) fail("failure case without a reflection");
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, fmt::format("{} vs {} dimensions", a.size(), b.size()));
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

void RetrievalParams::validate() const {
  if (k == 0) throw Error(ErrorCode::ConfigError, "retrieval k must be positive");
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw Error(ErrorCode::ConfigError, "threshold must lie in [-1, 1]");
}

KnowledgeBase::KnowledgeBase(RetrievalParams params) : params_(params) { params_.validate(); }

std::string KnowledgeBase::insert(MemoryCase c) {
  validate_memory_case(c);
  std::unique_lock lock(mu_);
  for (auto* index : {&success_, &failure_}) {
    std::erase_if(*index, [&](const MemoryCase& m) { return m.case_id == c.case_id; });
  }
  auto id = c.case_id;
  index_for(c.outcome).push_back(std::move(c));
  return id;
}

std::vector<ScoredCase> KnowledgeBase::retrieve(std::span<const double> query) const {
  return retrieve(query, params_);
}

std::vector<ScoredCase> KnowledgeBase::retrieve(std::span<const double> query, RetrievalParams params) const {
  params.validate();
  if (query.size() != kEmbeddingDim) {
    throw Error(ErrorCode::DimMismatch, fmt::format("query has {} values, expected {}", query.size(), kEmbeddingDim));
  }
  std::shared_lock lock(mu_);
  std::vector<ScoredCase> hits;
  for (const auto* index : {&success_, &failure_}) {
    for (const auto& c : *index) {
      const double sim = cosine_similarity(query, c.embedding);
      if (sim >= params.threshold) hits.push_back({c, sim});
    }
  }
  std::sort(hits.begin(), hits.end(), ranks_before);
  if (hits.size() > params.k) hits.resize(params.k);
  return hits;
}

std::size_t KnowledgeBase::success_size() const {
  std::shared_lock lock(mu_);
  return success_.size();
}

std::size_t KnowledgeBase::failure_size() const {
  std::shared_lock lock(mu_);
  return failure_.size();
}

std::size_t KnowledgeBase::size() const {
  std::shared_lock lock(mu_);
  return success_.size() + failure_.size();
}

std::optional<MemoryCase> KnowledgeBase::get(const std::string& case_id) const {
  std::shared_lock lock(mu_);
  for (const auto* index : {&success_, &failure_}) {
    for (const auto& c : *index) {
      if (c.case_id == case_id) return c;
    }
  }
  return std::nullopt;
}

std::vector<MemoryCase> KnowledgeBase::cases() const {
  std::vector<MemoryCase> all;
  {
    std::shared_lock lock(mu_);
    all.insert(all.end(), success_.begin(), success_.end());
    all.insert(all.end(), failure_.begin(), failure_.end());
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  return all;
}

void KnowledgeBase::save(const std::filesystem::path& dir) const {
  const auto all = cases();
  std::filesystem::create_directories(dir / "cases");

  std::ofstream bin(dir / "index.bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw Error(ErrorCode::IoError, "cannot write " + (dir / "index.bin").string());
  bin.write(kMagic.data(), kMagic.size());
  write_pod(bin, kFormatVersion);
  write_pod(bin, static_cast<std::uint32_t>(kEmbeddingDim));
  write_pod(bin, static_cast<std::uint64_t>(all.size()));
  for (const auto& c : all) {
    bin.write(reinterpret_cast<const char*>(c.embedding.data()),
              static_cast<std::streamsize>(c.embedding.size() * sizeof(double)));
  }
  if (!bin) throw Error(ErrorCode::IoError, "failed writing knowledge base index");

  json rows = json::array();
  std::set<std::string> files;
  for (const auto& c : all) {
    const auto file = case_file_name(c.case_id);
    files.insert(file);
    rows.push_back({{"id", c.case_id}, {"file", file}});
    std::ofstream(dir / "cases" / file) << json(c).dump(2) << "\n";
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir / "cases")) {
    if (entry.path().extension() == ".json" && !files.contains(entry.path().filename().string())) {
      std::filesystem::remove(entry.path());
    }
  }
  const json index = {{"version", kFormatVersion},
                      {"dim", kEmbeddingDim},
                      {"k", params_.k},
                      {"threshold", params_.threshold},
                      {"rows", rows}};
  std::ofstream(dir / "index.json") << index.dump(2) << "\n";
}

std::shared_ptr<KnowledgeBase> KnowledgeBase::load(const std::filesystem::path& dir,
                                                   std::optional<RetrievalParams> params) {
  std::ifstream idx(dir / "index.json");
  if (!idx) throw Error(ErrorCode::IoError, "no knowledge base at " + dir.string());
  const auto index = json::parse(idx, nullptr, false);
  if (index.is_discarded()) throw Error(ErrorCode::IoError, "corrupt index.json in " + dir.string());

  RetrievalParams p = params.value_or(RetrievalParams{index.value("k", std::size_t{1}), index.value("threshold", 0.85)});
  auto kb = std::make_shared<KnowledgeBase>(p);

  std::ifstream bin(dir / "index.bin", std::ios::binary);
  if (!bin) throw Error(ErrorCode::IoError, "missing index.bin in " + dir.string());
  std::array<char, 4> magic{};
  bin.read(magic.data(), magic.size());
  if (!bin || magic != kMagic) throw Error(ErrorCode::IoError, "index.bin has a bad header");
  if (read_pod<std::uint32_t>(bin) != kFormatVersion) throw Error(ErrorCode::IoError, "unsupported index.bin version");
  if (read_pod<std::uint32_t>(bin) != kEmbeddingDim) throw Error(ErrorCode::DimMismatch, "index.bin dimension mismatch");
  const auto count = read_pod<std::uint64_t>(bin);
  const auto& rows = index.at("rows");
  if (rows.size() != count) throw Error(ErrorCode::IoError, "index.json and index.bin disagree on row count");

  for (const auto& row : rows) {
    std::vector<double> v(kEmbeddingDim);
    bin.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!bin) throw Error(ErrorCode::IoError, "truncated index.bin");
    std::ifstream cf(dir / "cases" / row.at("file").get<std::string>());
    if (!cf) throw Error(ErrorCode::IoError, "missing case file for " + row.at("id").get<std::string>());
    auto c = json::parse(cf).get<MemoryCase>();
    c.embedding = std::move(v);
    kb->insert(std::move(c));
  }
  return kb;
}

}  // namespace tribunal::memory
