#pragma once

// Shared fixtures: synthetic scorers driven by word presence, a tiny
// whole-word vocabulary, and paths wired in by the build.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "absa/classify.hpp"
#include "absa/corpus.hpp"
#include "absa/tokenize.hpp"
#include "absa/types.hpp"

#ifndef ABSA_TEST_DATA_DIR
#error "ABSA_TEST_DATA_DIR must be defined by the build"
#endif
#ifndef ABSA_TEST_STUB_SCORER
#define ABSA_TEST_STUB_SCORER ""
#endif
#ifndef ABSA_TEST_CLI
#define ABSA_TEST_CLI ""
#endif

namespace testsupport {

inline std::string data_dir() { return ABSA_TEST_DATA_DIR; }
inline std::string data_path(const std::string& rel) { return data_dir() + "/" + rel; }
inline std::string stub_scorer_path() { return ABSA_TEST_STUB_SCORER; }
inline std::string cli_path() { return ABSA_TEST_CLI; }

/// Vocabulary whose pieces include each word whole, so encode() yields one
/// token per word and perturbation masks whole words.
inline absa::SubwordVocab word_vocab(const std::vector<std::string>& words) {
    std::string line;
    for (const auto& w : words) {
        if (!line.empty()) line += ' ';
        line += w;
    }
    // every adjacent pair repeats across the copies, so merges run to whole words
    std::vector<std::string> corpus{line, line, line};
    return absa::train_subword(corpus, 4096, 1.0);
}

/// f(text) = bias + sum of w_i over words present in the text, reported as
/// the target-class probability. Word presence equals the keep-vector when
/// the words are distinct and none is a substring of another.
class WordValueScorer : public absa::ScorerBackend {
public:
    WordValueScorer(std::vector<std::string> words, std::vector<double> weights, double bias,
                    absa::Sentiment target = absa::Sentiment::Positive)
        : words_(std::move(words)), weights_(std::move(weights)), bias_(bias), target_(target) {}

    const std::string& name() const override { return name_; }

    double value(const std::string& text) const {
        double v = bias_;
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (text.find(words_[i]) != std::string::npos) v += weights_[i];
        return v;
    }

    absa::SentimentScores score(const std::string& text) const override {
        return as_scores(value(text));
    }

    absa::SentimentScores as_scores(double v) const {
        double rest = (1.0 - v) / 2.0;
        absa::SentimentScores s;
        s[static_cast<int>(target_)] = v;
        int filled = 0;
        for (int k = 0; k < absa::kNumSentiments; ++k) {
            if (k == static_cast<int>(target_)) continue;
            s[k] = rest;
            ++filled;
        }
        (void)filled;
        return s;
    }

private:
    std::vector<std::string> words_;
    std::vector<double> weights_;
    double bias_;
    absa::Sentiment target_;
    std::string name_ = "synthetic-additive";
};

/// Non-additive variant: adds pairwise interaction terms so the kernel
/// approximation has something real to converge on.
class InteractionScorer : public absa::ScorerBackend {
public:
    InteractionScorer(std::vector<std::string> words, std::vector<double> weights,
                      std::vector<std::tuple<std::size_t, std::size_t, double>> pairs,
                      double bias)
        : words_(std::move(words)), weights_(std::move(weights)), pairs_(std::move(pairs)),
          bias_(bias) {}

    const std::string& name() const override { return name_; }

    absa::SentimentScores score(const std::string& text) const override {
        std::vector<bool> present(words_.size());
        for (std::size_t i = 0; i < words_.size(); ++i)
            present[i] = text.find(words_[i]) != std::string::npos;
        double v = bias_;
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (present[i]) v += weights_[i];
        for (const auto& [a, b, w] : pairs_)
            if (present[a] && present[b]) v += w;
        absa::SentimentScores s;
        s.pos = v;
        s.neg = (1.0 - v) / 2.0;
        s.neu = (1.0 - v) / 2.0;
        return s;
    }

private:
    std::vector<std::string> words_;
    std::vector<double> weights_;
    std::vector<std::tuple<std::size_t, std::size_t, double>> pairs_;
    double bias_;
    std::string name_ = "synthetic-interaction";
};

class ConstantScorer : public absa::ScorerBackend {
public:
    explicit ConstantScorer(double pos) : pos_(pos) {}
    const std::string& name() const override { return name_; }
    absa::SentimentScores score(const std::string&) const override {
        absa::SentimentScores s;
        s.pos = pos_;
        s.neg = (1.0 - pos_) / 2.0;
        s.neu = (1.0 - pos_) / 2.0;
        return s;
    }

private:
    double pos_;
    std::string name_ = "synthetic-constant";
};

inline absa::Review make_review(std::string id, std::string text,
                                std::optional<absa::Sentiment> sentiment = {},
                                absa::Variant variant = absa::Variant::Unknown) {
    absa::Review r;
    r.id = std::move(id);
    r.raw_text = std::move(text);
    r.variant = variant;
    r.gold_sentiment = sentiment;
    return r;
}

}  // namespace testsupport
