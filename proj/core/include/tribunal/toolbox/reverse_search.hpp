#pragma once

#include <vector>

#include "tribunal/model.hpp"
#include "tribunal/toolbox/provider.hpp"

namespace tribunal::toolbox {

/// Majority category over pages whose domain is recognised. Unknown pages
/// do not vote; a tie between categories yields Unknown.
Provenance majority_provenance(const std::vector<SearchPage>& pages, const DomainCatalog& domains);

/// Drops ad pages and strips sponsored/ad lines from snippets. Pages left with
/// neither title nor snippet are removed.
std::vector<SearchPage> strip_noise(std::vector<SearchPage> pages, const DomainCatalog& domains);

std::string summarize_reverse_search(const ReverseSearchFinding& finding);

/// Builds the evidence item for a finding; Empty when there are no pages.
EvidenceItem reverse_search_item(ToolId tool, ReverseSearchFinding finding);

// Replay fixture schemas:
//   reverse_exact.json    {"pages":   [{"title","url","snippet"}]}
//   reverse_similar.json  {"entries": [{"title","url","snippet","match":"exact"|"similar"}]}
EvidenceItem reverse_search_exact(const ImageCase& image, const ToolProvider& provider);
EvidenceItem reverse_search_similar(const ImageCase& image, const ToolProvider& provider);

}  // namespace tribunal::toolbox
