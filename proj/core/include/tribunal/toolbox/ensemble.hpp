#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tribunal/model.hpp"
#include "tribunal/toolbox/provider.hpp"

namespace tribunal::toolbox {

/// Weighted mean sum(w*s)/sum(w). Throws Error{LengthMismatch} on unequal or
/// empty input and Error{DomainError} for s outside [0,1] or w <= 0.
double ensemble_score(std::span<const double> scores, std::span<const double> weights);

/// Combines raw per-model answers under the configured model list. Configured
/// models that did not answer, or answered out of range, are listed as failed;
/// the survivors' weights are renormalised by the mean itself.
EnsembleFinding aggregate_ensemble(const std::vector<std::pair<std::string, double>>& answers,
                                   const std::vector<std::string>& failed, const EnsembleConfig& config);

std::string summarize_ensemble(const EnsembleFinding& finding);

// Replay fixture ensemble.json: {"per_model":[{"model_id","ai_score"}], "failed":[ids]}.
// Live mode posts the image to the sidecar's /classify.
EvidenceItem run_classifier_ensemble(const ImageCase& image, const ToolProvider& provider);

}  // namespace tribunal::toolbox
