#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "tribunal/model.hpp"

namespace tribunal::bench {

enum class AttackKind { ReverseManipulation, MetadataForgery };
std::string_view to_string(AttackKind k);
std::optional<AttackKind> parse_attack_kind(std::string_view s);

// Metadata blocks grouped by the label of the image they came from.
class ForgeryPool {
 public:
  void add(Label source_label, MetadataFinding finding);
  [[nodiscard]] std::size_t size(Label source_label) const;
  /// Deterministic pick keyed by the case id. Throws Error{EmptyPool}.
  [[nodiscard]] const MetadataFinding& sample(Label source_label, std::string_view case_id) const;

 private:
  std::map<Label, std::vector<MetadataFinding>> blocks_;
};

/// Counterfactual search results asserting the opposite provenance of the
/// true label, drawn from a fixed template bank.
ReverseSearchFinding counterfactual_search(Label true_label, MatchKind kind, std::string_view case_id);

/// reverse_manipulation replaces (or adds) both reverse-search items;
/// metadata_forgery replaces (or adds) the metadata item with a block from
/// the opposite label. Other items are untouched and tool-id order is kept.
EvidenceSet simulate_attack(const EvidenceSet& set, AttackKind kind, Label true_label, const ForgeryPool& pool);

}  // namespace tribunal::bench
