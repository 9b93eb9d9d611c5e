#include "tribunal/toolbox/ensemble.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "tribunal/error.hpp"
#include "tribunal/serialization.hpp"
#include "tribunal/toolbox/sidecar_client.hpp"

namespace tribunal::toolbox {

double ensemble_score(std::span<const double> scores, std::span<const double> weights) {
  if (scores.size() != weights.size() || scores.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("{} scores vs {} weights", scores.size(), weights.size()));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    const double w = weights[i];
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::DomainError, fmt::format("score {} outside [0,1]", s));
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::DomainError, fmt::format("weight {} not positive", w));
    num += w * s;
    den += w;
  }
  return num / den;
}

EnsembleFinding aggregate_ensemble(const std::vector<std::pair<std::string, double>>& answers,
                                   const std::vector<std::string>& failed, const EnsembleConfig& config) {
  std::map<std::string, double, std::less<>> by_id(answers.begin(), answers.end());
  EnsembleFinding f;
  for (const auto& id : config.model_ids) {
    const auto it = by_id.find(id);
    const bool reported_failed = std::find(failed.begin(), failed.end(), id) != failed.end();
    if (it == by_id.end() || reported_failed || !(it->second >= 0.0 && it->second <= 1.0)) {
      f.failed_models.push_back(id);
      continue;
    }
    f.per_model.push_back({id, it->second, config.weight_of(id)});
  }
  if (!f.per_model.empty()) {
    std::vector<double> s;
    std::vector<double> w;
    for (const auto& m : f.per_model) {
      s.push_back(m.score);
      w.push_back(m.weight);
    }
    f.prediction_score = ensemble_score(s, w);
  }
  return f;
}

std::string summarize_ensemble(const EnsembleFinding& finding) {
  const bool ai_leaning = finding.prediction_score > 0.5;
  std::string out = fmt::format(
      "Weighted prediction score from {} classifier(s): {:.4f} ({}; scores above 0.5 lean towards AI generation).",
      finding.per_model.size(), finding.prediction_score, ai_leaning ? "AI-leaning" : "real-leaning");
  for (const auto& m : finding.per_model) {
    out += fmt::format("\n- {}: {:.4f} (weight {:g})", m.model_id, m.score, m.weight);
  }
  if (!finding.failed_models.empty()) {
    out += "\nUnavailable models: ";
    for (std::size_t i = 0; i < finding.failed_models.size(); ++i) {
      out += (i ? ", " : "") + finding.failed_models[i];
    }
  }
  return out;
}

EvidenceItem run_classifier_ensemble(const ImageCase& image, const ToolProvider& provider) {
  try {
    std::vector<std::pair<std::string, double>> answers;
    std::vector<std::string> failed;
    if (provider.mode() == ProviderMode::Replay) {
      const auto j = provider.load_fixture(image.id, "ensemble");
      for (const auto& m : j.value("per_model", json::array())) {
        answers.emplace_back(m.at("model_id").get<std::string>(), m.at("ai_score").get<double>());
      }
      for (const auto& id : j.value("failed", json::array())) failed.push_back(id.get<std::string>());
    } else {
      const auto& ep = provider.endpoints();
      if (ep.sidecar_url.empty()) throw Error(ErrorCode::BackendUnavailable, "no sidecar URL configured");
      SidecarClient client(ep.sidecar_url, provider.transport(), ep.timeout);
      auto resp = client.classify(read_file_bytes(image.path.string()));
      answers = std::move(resp.per_model);
      failed = std::move(resp.failed);
      json rec = {{"per_model", json::array()}, {"failed", failed}};
      for (const auto& [id, s] : answers) rec["per_model"].push_back({{"model_id", id}, {"ai_score", s}});
      provider.record_fixture(image.id, "ensemble", rec);
    }
    auto finding = aggregate_ensemble(answers, failed, provider.config().ensemble);
    if (finding.per_model.empty()) {
      return make_error_item(ToolId::Ensemble, "every classifier in the ensemble failed");
    }
    EvidenceItem item;
    item.tool_id = ToolId::Ensemble;
    item.validity = Validity::Valid;
    item.summary_text = summarize_ensemble(finding);
    item.payload = std::move(finding);
    return item;
  } catch (const std::exception& e) {
    return make_error_item(ToolId::Ensemble, e.what());
  }
}

}  // namespace tribunal::toolbox
