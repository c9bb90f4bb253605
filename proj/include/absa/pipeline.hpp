#pragma once

#include <memory>
#include <string>
#include <vector>

#include "absa/aggregate.hpp"
#include "absa/aspect.hpp"
#include "absa/classify.hpp"
#include "absa/config.hpp"
#include "absa/corpus.hpp"
#include "absa/lexicon.hpp"
#include "absa/tokenize.hpp"
#include "absa/types.hpp"

namespace absa {

/// Everything the end-to-end pipeline needs, loaded once from a config.
struct Engine {
    EngineConfig config;
    std::shared_ptr<const SubwordVocab> vocab;
    Lexicon lexicon;
    AspectSeeds seeds;
    std::unique_ptr<ScorerBackend> backend;
};

/// Loads vocabulary, lexicons, aspect seeds, and the configured backend.
/// Failures name the config key whose file or value caused them.
Engine build_engine(const EngineConfig& config);

/// One review after the full pipeline: clause segmentation, per-clause
/// scoring with lexicon correction, aspect assignment, and aggregation.
struct ReviewAnalysis {
    std::string id;
    std::string text;  // normalized
    Variant variant = Variant::Unknown;
    std::vector<ClauseSentiment> clauses;
    std::vector<AspectAggregate> aspects;  // distinct clause aspects, enum order
    SentimentScores overall_scores;        // relevance-weighted over all clauses
    double overall_index = 0.5;
    Sentiment overall_label = Sentiment::Neutral;
    Lean overall_lean = Lean::None;
};

/// Runs the clause pipeline on one review. The idf table weights aspect
/// keywords; the default table treats every keyword equally.
ReviewAnalysis analyze_review(const Engine& engine, const Review& review,
                              const IdfTable& idf = {});

ReviewAnalysis analyze_text(const Engine& engine, const std::string& text,
                            const IdfTable& idf = {});

struct CorpusAnalysis {
    std::vector<ReviewAnalysis> reviews;   // dataset order
    std::vector<AspectSummary> summaries;  // per-aspect roll-up, enum order
};

/// Analyzes every review (reviews may be scored concurrently; the result is
/// identical for any worker count) and rolls up per-aspect summaries over
/// review-level aggregates. The idf table is built from the corpus itself.
CorpusAnalysis analyze_corpus(const Engine& engine, const Dataset& dataset);

/// Relevance-weighted mean of clause distributions across aspects (the
/// review-level overall); zero total relevance falls back to the unweighted
/// mean.
SentimentScores overall_scores(const std::vector<ClauseSentiment>& clauses);

}  // namespace absa
