#include "absa/aggregate.hpp"

#include <cmath>
#include <stdexcept>

namespace absa {

std::string to_string(Lean lean) {
    switch (lean) {
        case Lean::None: return "None";
        case Lean::Positive: return "Positive";
        case Lean::Negative: return "Negative";
    }
    return "None";
}

AspectAggregate aggregate_clauses(const std::vector<ClauseSentiment>& items) {
    if (items.empty()) throw std::invalid_argument("cannot aggregate zero clauses");
    const Aspect aspect = items.front().aspect;
    double wsum = 0.0;
    for (const auto& it : items) {
        if (it.aspect != aspect)
            throw std::invalid_argument("clauses span multiple aspects: " + to_string(aspect) +
                                        " vs " + to_string(it.aspect));
        if (it.relevance < 0.0)
            throw std::invalid_argument("negative clause relevance");
        wsum += it.relevance;
    }

    AspectAggregate agg;
    agg.aspect = aspect;
    agg.support = items.size();
    if (items.size() == 1) {
        // weights cancel; bypass the arithmetic so the identity is exact
        agg.scores = items.front().scores;
        agg.polarity_index = polarity_index(agg.scores);
        auto il = label_from_index(agg.polarity_index);
        agg.label = il.label;
        agg.lean = il.lean;
        return agg;
    }
    double acc[kNumSentiments] = {0.0, 0.0, 0.0};
    if (wsum > 0.0) {
        for (const auto& it : items)
            for (int c = 0; c < kNumSentiments; ++c) acc[c] += it.relevance * it.scores[c];
        for (int c = 0; c < kNumSentiments; ++c) acc[c] /= wsum;
    } else {
        for (const auto& it : items)
            for (int c = 0; c < kNumSentiments; ++c) acc[c] += it.scores[c];
        for (int c = 0; c < kNumSentiments; ++c) acc[c] /= static_cast<double>(items.size());
    }
    agg.scores = SentimentScores{acc[0], acc[1], acc[2]};
    agg.polarity_index = polarity_index(agg.scores);
    auto il = label_from_index(agg.polarity_index);
    agg.label = il.label;
    agg.lean = il.lean;
    return agg;
}

double polarity_index(const SentimentScores& scores) {
    return scores.pos + 0.5 * scores.neu;
}

IndexLabel label_from_index(double index, double neutral_low, double neutral_high) {
    if (index < -1e-12 || index > 1.0 + 1e-12)
        throw std::invalid_argument("polarity index outside [0, 1]: " + std::to_string(index));
    if (!(neutral_low > 0.0 && neutral_low <= neutral_high && neutral_high < 1.0))
        throw std::invalid_argument("neutral band edges must satisfy 0 < low <= high < 1");
    index = std::min(1.0, std::max(0.0, index));
    IndexLabel out;
    if (index < neutral_low) {
        out.label = Sentiment::Negative;
        out.lean = Lean::None;
    } else if (index <= neutral_high) {
        out.label = Sentiment::Neutral;
        if (index > 0.5)
            out.lean = Lean::Positive;
        else if (index < 0.5)
            out.lean = Lean::Negative;
        else
            out.lean = Lean::None;
    } else {
        out.label = Sentiment::Positive;
        out.lean = Lean::None;
    }
    return out;
}

std::vector<AspectSummary> aggregate_corpus(const std::vector<AspectAggregate>& aggregates) {
    constexpr int kAspectCount = kNumNamedAspects + 1;
    std::array<std::array<std::size_t, kNumSentiments>, kAspectCount> counts{};
    std::array<double, kAspectCount> index_sum{};
    std::array<std::size_t, kAspectCount> support{};
    for (const auto& agg : aggregates) {
        auto a = static_cast<std::size_t>(agg.aspect);
        counts[a][static_cast<std::size_t>(agg.label)]++;
        index_sum[a] += agg.polarity_index;
        support[a]++;
    }
    std::vector<AspectSummary> out;
    for (int a = 0; a < kAspectCount; ++a) {
        auto ai = static_cast<std::size_t>(a);
        if (support[ai] == 0) continue;
        AspectSummary s;
        s.aspect = static_cast<Aspect>(a);
        s.support = support[ai];
        for (int c = 0; c < kNumSentiments; ++c)
            s.label_distribution[static_cast<std::size_t>(c)] =
                static_cast<double>(counts[ai][static_cast<std::size_t>(c)]) /
                static_cast<double>(support[ai]);
        s.mean_polarity_index = index_sum[ai] / static_cast<double>(support[ai]);
        out.push_back(s);
    }
    return out;
}

}  // namespace absa
