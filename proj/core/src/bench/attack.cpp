#include "tribunal/bench/attack.hpp"

#include <algorithm>
#include <array>

#include "tribunal/error.hpp"
#include "tribunal/text_util.hpp"
#include "tribunal/toolbox/metadata.hpp"
#include "tribunal/toolbox/reverse_search.hpp"

namespace tribunal::bench {

namespace {

struct PageTemplate {
  std::string_view title;
  std::string_view url;
  std::string_view snippet;
};

// Pages claiming the image was produced on a generation platform.
constexpr std::array<PageTemplate, 4> kAiPlatformPages{{
    {"Prompt gallery: photorealistic scene", "https://lexica.art/prompt/", "Generated with Stable Diffusion XL. Prompt and seed shared by the creator."},
    {"Community model showcase", "https://civitai.com/images/", "Image generated with a community checkpoint; generation parameters attached."},
    {"Creation by a NightCafe artist", "https://creator.nightcafe.studio/creation/", "AI art created with the NightCafe generator."},
    {"Top prompts of the week", "https://lexica.art/?q=", "Featured AI generations with their full prompts."},
}};

// Pages claiming the image is a published photograph.
constexpr std::array<PageTemplate, 4> kPhotoSitePages{{
    {"Photo by a contributing photographer", "https://www.flickr.com/photos/", "Taken with a Canon EOS R5, 24-70mm f/2.8. All rights reserved."},
    {"Editor's choice photograph", "https://500px.com/photo/", "Shot on location; camera and lens details in the photo info."},
    {"Free stock photo", "https://unsplash.com/photos/", "Photographed by an Unsplash contributor with a Sony A7 III."},
    {"Explore: recent uploads", "https://www.flickr.com/explore/", "Original capture uploaded by the photographer with full EXIF data."},
}};

EvidenceSet replace_items(const EvidenceSet& set, std::vector<EvidenceItem> replacements) {
  std::vector<EvidenceItem> items(set.items().begin(), set.items().end());
  for (auto& r : replacements) {
    const auto it = std::find_if(items.begin(), items.end(), [&](const auto& i) { return i.tool_id == r.tool_id; });
    if (it != items.end()) {
      *it = std::move(r);
    } else {
      items.push_back(std::move(r));
    }
  }
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.tool_id < b.tool_id; });
  return seal_evidence_set(std::move(items), set.case_id());
}

}  // namespace

std::string_view to_string(AttackKind k) {
  return k == AttackKind::ReverseManipulation ? "reverse_manipulation" : "metadata_forgery";
}

std::optional<AttackKind> parse_attack_kind(std::string_view s) {
  if (s == "reverse_manipulation" || s == "reverse") return AttackKind::ReverseManipulation;
  if (s == "metadata_forgery" || s == "metadata") return AttackKind::MetadataForgery;
  return std::nullopt;
}

void ForgeryPool::add(Label source_label, MetadataFinding finding) {
  blocks_[source_label].push_back(std::move(finding));
}

std::size_t ForgeryPool::size(Label source_label) const {
  const auto it = blocks_.find(source_label);
  return it == blocks_.end() ? 0 : it->second.size();
}

const MetadataFinding& ForgeryPool::sample(Label source_label, std::string_view case_id) const {
  const auto it = blocks_.find(source_label);
  if (it == blocks_.end() || it->second.empty()) {
    throw Error(ErrorCode::EmptyPool, std::string("no metadata blocks from ") + std::string(to_string(source_label)) + " images");
  }
  return it->second[text::stable_hash(case_id) % it->second.size()];
}

ReverseSearchFinding counterfactual_search(Label true_label, MatchKind kind, std::string_view case_id) {
  const auto& bank = true_label == Label::Real ? kAiPlatformPages : kPhotoSitePages;
  const auto h = text::stable_hash(case_id);
  const std::string suffix = std::to_string(h % 1000000);
  ReverseSearchFinding f;
  f.match_kind = kind;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& t = bank[(h + i + (kind == MatchKind::Similar ? 1 : 0)) % bank.size()];
    f.pages.push_back({std::string(t.title), std::string(t.url) + suffix, std::string(t.snippet)});
  }
  f.provenance_hint = true_label == Label::Real ? Provenance::AiPlatform : Provenance::PhotoSite;
  return f;
}

EvidenceSet simulate_attack(const EvidenceSet& set, AttackKind kind, Label true_label, const ForgeryPool& pool) {
  if (kind == AttackKind::ReverseManipulation) {
    return replace_items(
        set, {toolbox::reverse_search_item(ToolId::ReverseExact,
                                           counterfactual_search(true_label, MatchKind::Exact, set.case_id())),
              toolbox::reverse_search_item(ToolId::ReverseSimilar,
                                           counterfactual_search(true_label, MatchKind::Similar, set.case_id()))});
  }
  const Label donor = true_label == Label::Ai ? Label::Real : Label::Ai;
  auto finding = pool.sample(donor, set.case_id());
  EvidenceItem item;
  item.tool_id = ToolId::Metadata;
  item.validity = finding.fields_kept.empty() ? Validity::Empty : Validity::Valid;
  item.summary_text = toolbox::summarize_metadata(finding);
  item.payload = std::move(finding);
  return replace_items(set, {std::move(item)});
}

}  // namespace tribunal::bench
