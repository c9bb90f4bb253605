#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absa/types.hpp"

namespace absa {

class Lexicon;

struct Review {
    std::string id;
    std::string raw_text;
    Variant variant = Variant::Unknown;
    std::optional<Aspect> gold_aspect;
    std::optional<Sentiment> gold_sentiment;
    std::string source;
};

struct DatasetStats {
    std::size_t total = 0;
    std::array<std::size_t, kNumSentiments> by_sentiment{};  // labeled only
    std::size_t unlabeled_sentiment = 0;
    std::array<std::size_t, kNumNamedAspects + 1> by_aspect{};  // labeled only
    std::size_t unlabeled_aspect = 0;
    std::array<std::size_t, 5> by_variant{};  // enum order, Unknown last
};

class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Review> reviews);

    const std::vector<Review>& reviews() const { return reviews_; }
    std::size_t size() const { return reviews_.size(); }
    bool empty() const { return reviews_.empty(); }
    const Review& operator[](std::size_t i) const { return reviews_[i]; }

    DatasetStats stats() const;

private:
    std::vector<Review> reviews_;
};

enum class CorpusFormat { Jsonl, Csv };

/// Parses a labeled review file. JSONL: one object per line with fields id,
/// text, and optional variant/aspect/sentiment. CSV: header-required columns
/// id,text,variant,aspect,sentiment. Malformed records, duplicate ids, and
/// unknown label strings are reported with their line number.
Dataset load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Infers the format from the file extension (.jsonl/.json vs .csv).
Dataset load_corpus(const std::filesystem::path& path);

/// Script-based variant detection. Sinhala script only -> Sinhala; Latin only
/// -> Singlish when the romanized lexicon matches, else English; both scripts
/// -> CodeMixed; no letters at all -> Unknown.
Variant detect_variant(const std::string& text, const Lexicon& romanized_hints);

struct SplitResult {
    Dataset train;
    Dataset dev;
    Dataset test;
};

/// Deterministic per-label stratified split. Ratios must be positive and sum
/// to 1; every sentiment class needs at least 3 labeled examples.
SplitResult stratified_split(const Dataset& dataset, double train_ratio, double dev_ratio,
                             double test_ratio, std::uint64_t seed);

/// Replaces at most one matched lexicon phrase with another entry of the same
/// polarity sign and variant tag. Gold labels are never touched; reviews with
/// no match (or no alternative) come back unchanged.
Review augment_lexical(const Review& review, const Lexicon& lexicon, std::uint64_t seed);

}  // namespace absa
