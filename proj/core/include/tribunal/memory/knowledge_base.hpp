#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tribunal/model.hpp"

namespace tribunal::memory {

inline constexpr std::size_t kEmbeddingDim = 512;

struct MemoryCase {
  std::string case_id;
  std::vector<double> embedding;
  Label true_label = Label::Real;
  Label predicted_label = Label::Real;
  Outcome outcome = Outcome::Success;
  std::string evidence_snapshot;
  std::string reasoning_snapshot;
  std::string reflection;                   // required for failures
  bool reflection_machine_generated = true;  // false for placeholder reflections

  bool operator==(const MemoryCase&) const = default;
};

void to_json(nlohmann::json& j, const MemoryCase& c);  // without the embedding
void from_json(const nlohmann::json& j, MemoryCase& c);

/// Throws Error{InvariantViolation} when a case breaks the record rules
/// (dimension, reflection for failures, labels agreeing with the outcome).
void validate_memory_case(const MemoryCase& c);

/// Throws Error{DimMismatch} for unequal lengths and Error{ZeroVector} when
/// either vector is all zeros.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct RetrievalParams {
  std::size_t k = 1;
  double threshold = 0.85;

  void validate() const;
};

struct ScoredCase {
  MemoryCase memory_case;
  double similarity = 0.0;
};

// Exact-scan case memory with separate success and failure indices. Reads
// may run concurrently; inserts take an exclusive lock.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(RetrievalParams params = {});
  KnowledgeBase(const KnowledgeBase&) = delete;
  KnowledgeBase& operator=(const KnowledgeBase&) = delete;

  /// Inserts or replaces (by case_id) and returns the id.
  std::string insert(MemoryCase c);

  /// Both indices, filtered by threshold, ranked by similarity (ties by
  /// case_id ascending), then truncated to k.
  [[nodiscard]] std::vector<ScoredCase> retrieve(std::span<const double> query) const;
  [[nodiscard]] std::vector<ScoredCase> retrieve(std::span<const double> query, RetrievalParams params) const;

  [[nodiscard]] std::size_t success_size() const;
  [[nodiscard]] std::size_t failure_size() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] std::optional<MemoryCase> get(const std::string& case_id) const;
  /// Every case, ordered by case_id.
  [[nodiscard]] std::vector<MemoryCase> cases() const;
  [[nodiscard]] const RetrievalParams& params() const noexcept { return params_; }

  // Directory layout: index.bin (header + row-major float64 embeddings),
  // index.json (row ids and case file names), cases/<file>.json.
  void save(const std::filesystem::path& dir) const;
  static std::shared_ptr<KnowledgeBase> load(const std::filesystem::path& dir,
                                             std::optional<RetrievalParams> params = std::nullopt);

 private:
  using Index = std::vector<MemoryCase>;
  Index& index_for(Outcome o) { return o == Outcome::Success ? success_ : failure_; }

  RetrievalParams params_;
  mutable std::shared_mutex mu_;
  Index success_;
  Index failure_;
};

}  // namespace tribunal::memory
