#pragma once

#include <string>

#include "json.hpp"

#include "absa/explain.hpp"
#include "absa/pipeline.hpp"

namespace absa {

/// Assembles the full analysis report ("absa-report/1"): corpus counts, the
/// semantic config knobs, per-aspect sections (distribution, keywords per
/// sentiment bucket, examples, one explained review), and per-review detail.
/// Deterministic: no timestamps, no absolute paths, no worker-count effects.
nlohmann::ordered_json build_report(const Engine& engine, const CorpusAnalysis& analysis);

/// One analyzed review as JSON: clause scores, aspect aggregates, overall
/// distribution with polarity index, label, lean, and confidence.
nlohmann::ordered_json review_to_json(const ReviewAnalysis& analysis);

/// Structural check mirroring docs/report.schema.json: required keys, label
/// distributions summing to 1 within 1e-9, keyword lists within k. Throws
/// with the offending location.
void validate_report(const nlohmann::ordered_json& report);

/// Static HTML view rendered purely from the report JSON.
std::string render_report_html(const nlohmann::ordered_json& report);

nlohmann::ordered_json lime_to_json(const LimeExplanation& explanation, const std::string& text,
                                    const std::vector<std::string>& tokens);
nlohmann::ordered_json shap_to_json(const ShapExplanation& explanation, const std::string& text,
                                    const std::vector<std::string>& tokens);

/// Token-highlight snippet (standalone page) for one explanation JSON.
std::string render_explanation_html(const nlohmann::ordered_json& explanation);

}  // namespace absa
