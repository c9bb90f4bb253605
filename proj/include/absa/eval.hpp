#pragma once

#include <array>
#include <string>
#include <vector>

#include "absa/classify.hpp"
#include "absa/corpus.hpp"
#include "absa/lexicon.hpp"
#include "absa/types.hpp"

namespace absa {

/// Rows are gold labels, columns predictions, both in enum order.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, kNumSentiments>, kNumSentiments> counts{};

    std::size_t total() const;
    std::size_t diagonal() const;
};

ConfusionMatrix confusion(const std::vector<Sentiment>& golds,
                          const std::vector<Sentiment>& preds);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::array<ClassMetrics, kNumSentiments> per_class{};
    double macro_f1 = 0.0;
};

/// Standard metrics with the 0/0 -> 0 convention for precision, recall,
/// and F1; macro F1 is the unweighted class mean.
MetricsReport metrics(const ConfusionMatrix& cm);

struct BackendSpec {
    const ScorerBackend* backend = nullptr;
    bool use_lexicon = false;
};

struct ComparisonRow {
    std::string backend;
    bool lexicon = false;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::size_t n = 0;
    std::string error;  // non-empty when this backend failed
};

/// Scores every gold-labeled review through each (backend, lexicon) pair and
/// tabulates accuracy and macro F1. A failing backend yields a row carrying
/// its error; other rows are unaffected.
std::vector<ComparisonRow> compare_backends(const std::vector<BackendSpec>& specs,
                                            const Dataset& test, const Lexicon& lexicon,
                                            double beta);

std::string comparison_to_json(const std::vector<ComparisonRow>& rows);
std::string comparison_to_text(const std::vector<ComparisonRow>& rows);

/// One review's prediction under a backend, optionally lexicon-corrected.
Sentiment predict_sentiment(const ScorerBackend& backend, const std::string& text,
                            const Lexicon* lexicon, double beta);

}  // namespace absa
