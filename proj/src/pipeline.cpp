#include "absa/pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "absa/parallel.hpp"
#include "absa/scorer_client.hpp"
#include "absa/textprep.hpp"

namespace absa {

namespace {

std::unique_ptr<ScorerBackend> build_backend(const EngineConfig& config,
                                             std::shared_ptr<const SubwordVocab> vocab) {
    if (config.backend == "nb") {
        if (config.nb_model.empty())
            throw std::runtime_error("classify.nb_model is required for the nb backend");
        return std::make_unique<NBBackend>(load_nb_model(config.nb_model), std::move(vocab));
    }
    if (config.backend == "linear") {
        if (config.linear_model.empty())
            throw std::runtime_error("classify.linear_model is required for the linear backend");
        return std::make_unique<LinearBackend>(load_linear_model(config.linear_model),
                                               std::move(vocab));
    }
    if (config.backend == "external") return std::make_unique<ExternalScorer>(parse_adapter(config));
    throw std::runtime_error("unknown backend \"" + config.backend + "\"");
}

}  // namespace

Engine build_engine(const EngineConfig& config) {
    validate_config(config);
    Engine engine;
    engine.config = config;
    if (config.vocab_path.empty())
        throw std::runtime_error("tokenize.vocab is required");
    try {
        engine.vocab = std::make_shared<const SubwordVocab>(load_vocab(config.vocab_path));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("tokenize.vocab: ") + e.what());
    }
    if (config.lexicon_enabled && !config.lexicon_paths.empty()) {
        try {
            engine.lexicon = load_lexicons(config.lexicon_paths);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("lexicon.paths: ") + e.what());
        }
    }
    if (config.seeds_path.empty())
        throw std::runtime_error("aspect.seeds is required");
    try {
        engine.seeds = load_aspect_seeds(config.seeds_path);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("aspect.seeds: ") + e.what());
    }
    try {
        engine.backend = build_backend(config, engine.vocab);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("classify backend: ") + e.what());
    }
    return engine;
}

SentimentScores overall_scores(const std::vector<ClauseSentiment>& clauses) {
    if (clauses.empty()) throw std::invalid_argument("cannot aggregate zero clauses");
    double acc[kNumSentiments] = {0.0, 0.0, 0.0};
    double wsum = 0.0;
    for (const auto& c : clauses) wsum += c.relevance;
    if (wsum > 0.0) {
        for (const auto& c : clauses)
            for (int k = 0; k < kNumSentiments; ++k) acc[k] += c.relevance * c.scores[k];
        for (int k = 0; k < kNumSentiments; ++k) acc[k] /= wsum;
    } else {
        for (const auto& c : clauses)
            for (int k = 0; k < kNumSentiments; ++k) acc[k] += c.scores[k];
        for (int k = 0; k < kNumSentiments; ++k) acc[k] /= static_cast<double>(clauses.size());
    }
    return SentimentScores{acc[0], acc[1], acc[2]};
}

ReviewAnalysis analyze_review(const Engine& engine, const Review& review, const IdfTable& idf) {
    if (review.raw_text.empty()) throw std::invalid_argument("empty review text");
    const EngineConfig& cfg = engine.config;

    ReviewAnalysis out;
    out.id = review.id;
    NormalizedText normalized = normalize(review.raw_text);
    out.text = normalized.text;
    out.variant = review.variant != Variant::Unknown
                      ? review.variant
                      : detect_variant(review.raw_text, engine.lexicon);

    std::vector<Clause> clauses = segment_clauses(normalized);
    if (clauses.empty())
        throw std::invalid_argument("review \"" + review.id + "\" has no content after normalization");
    for (const Clause& clause : clauses) {
        ClauseSentiment cs;
        cs.clause = clause;
        cs.scores = score(*engine.backend, clause.text);

        std::vector<std::string> words;
        for (const WordToken& w : word_tokens(clause.text)) words.push_back(w.text);

        if (cfg.lexicon_enabled && !engine.lexicon.empty() && cfg.beta > 0.0) {
            double L = lexicon_score(engine.lexicon.match_phrases(words));
            cs.scores = apply_correction(cs.scores, L, cfg.beta);
        }

        AspectScores relevance = score_aspects(words, engine.seeds, idf);
        cs.aspect = assign_aspect(relevance, cfg.aspect_threshold);
        cs.relevance = cs.aspect == Aspect::General
                           ? relevance.max_relevance()
                           : relevance.relevance[static_cast<std::size_t>(cs.aspect)];
        cs.confidence = cs.scores.confidence();
        out.clauses.push_back(std::move(cs));
    }

    // Per-aspect aggregates in enum order, then the cross-aspect overall.
    std::map<Aspect, std::vector<ClauseSentiment>> by_aspect;
    for (const auto& cs : out.clauses) by_aspect[cs.aspect].push_back(cs);
    for (const auto& [aspect, group] : by_aspect) {
        AspectAggregate agg = aggregate_clauses(group);
        IndexLabel banded = label_from_index(agg.polarity_index, cfg.neutral_low, cfg.neutral_high);
        agg.label = banded.label;
        agg.lean = banded.lean;
        out.aspects.push_back(std::move(agg));
    }

    out.overall_scores = overall_scores(out.clauses);
    out.overall_index = polarity_index(out.overall_scores);
    IndexLabel il = label_from_index(out.overall_index, cfg.neutral_low, cfg.neutral_high);
    out.overall_label = il.label;
    out.overall_lean = il.lean;
    return out;
}

ReviewAnalysis analyze_text(const Engine& engine, const std::string& text, const IdfTable& idf) {
    Review review;
    review.id = "adhoc";
    review.raw_text = text;
    return analyze_review(engine, review, idf);
}

CorpusAnalysis analyze_corpus(const Engine& engine, const Dataset& dataset) {
    if (dataset.empty()) throw std::runtime_error("empty corpus");

    std::vector<std::string> texts;
    texts.reserve(dataset.size());
    for (const Review& r : dataset.reviews()) texts.push_back(normalize(r.raw_text).text);
    IdfTable idf = IdfTable::build(texts, engine.seeds);

    int workers = engine.config.workers;
    if (!engine.backend->concurrency_safe()) workers = 1;

    CorpusAnalysis out;
    out.reviews = parallel_map<ReviewAnalysis>(
        dataset.size(), workers,
        [&](std::size_t i) { return analyze_review(engine, dataset[i], idf); });

    std::vector<AspectAggregate> all;
    for (const ReviewAnalysis& ra : out.reviews)
        all.insert(all.end(), ra.aspects.begin(), ra.aspects.end());
    out.summaries = aggregate_corpus(all);
    return out;
}

}  // namespace absa
