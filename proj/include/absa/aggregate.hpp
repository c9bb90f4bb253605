#pragma once

#include <array>
#include <string>
#include <vector>

#include "absa/textprep.hpp"
#include "absa/types.hpp"

namespace absa {

enum class Lean { None, Positive, Negative };
std::string to_string(Lean lean);

/// One scored clause: class distribution after lexicon correction, the
/// assigned aspect, and that aspect's relevance (the aggregation weight).
struct ClauseSentiment {
    Clause clause;
    SentimentScores scores;
    Aspect aspect = Aspect::General;
    double relevance = 0.0;
    double confidence = 0.0;  // max class probability
};

struct AspectAggregate {
    Aspect aspect = Aspect::General;
    SentimentScores scores;  // relevance-weighted mean distribution
    double polarity_index = 0.5;
    Sentiment label = Sentiment::Neutral;
    Lean lean = Lean::None;
    std::size_t support = 0;  // clause count
};

/// Relevance-weighted componentwise mean of the clause distributions.
/// All-zero relevance falls back to the unweighted mean. Requires a
/// non-empty, single-aspect input.
AspectAggregate aggregate_clauses(const std::vector<ClauseSentiment>& items);

/// Scalar polarity: p_pos + 0.5 * p_neu, in [0, 1].
double polarity_index(const SentimentScores& scores);

struct IndexLabel {
    Sentiment label = Sentiment::Neutral;
    Lean lean = Lean::None;
};

/// Banding: index < neutral_low Negative; [neutral_low, neutral_high]
/// Neutral with a lean toward the side of 0.5; > neutral_high Positive.
IndexLabel label_from_index(double index, double neutral_low = 0.40, double neutral_high = 0.60);

struct AspectSummary {
    Aspect aspect = Aspect::General;
    std::array<double, kNumSentiments> label_distribution{};  // fractions, sum 1
    double mean_polarity_index = 0.0;
    std::size_t support = 0;  // review-level aggregates seen
};

/// Per-aspect corpus roll-up over review-level aggregates, in enum order.
/// Aspects with no aggregates are omitted.
std::vector<AspectSummary> aggregate_corpus(const std::vector<AspectAggregate>& aggregates);

}  // namespace absa
