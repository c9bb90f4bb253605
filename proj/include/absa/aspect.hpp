#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "absa/types.hpp"

namespace absa {

/// Relevance simplex over the five named aspects (General excluded).
struct AspectScores {
    std::array<double, kNumNamedAspects> relevance{};

    int argmax() const;  // ties resolved to the lowest enum index
    double max_relevance() const;
};

/// Seed keyword table: per-aspect multi-word keyword phrases, normalized.
class AspectSeeds {
public:
    /// Adds one keyword phrase; duplicates within an aspect are collapsed.
    void add(Aspect aspect, std::vector<std::string> words);

    const std::vector<std::vector<std::string>>& keywords(Aspect aspect) const;
    std::size_t total_keywords() const;

    /// All five named aspects must have at least one keyword.
    void validate() const;

    /// Indices of this aspect's keywords starting with `word`, longest first.
    const std::vector<std::size_t>* candidates(Aspect aspect, const std::string& word) const;

private:
    std::array<std::vector<std::vector<std::string>>, kNumNamedAspects> keywords_;
    std::array<std::unordered_map<std::string, std::vector<std::size_t>>, kNumNamedAspects>
        first_word_;
};

/// Parses a TSV of `aspect<TAB>keyword` rows; "#" lines are comments.
/// Keywords are normalized; every named aspect must be present.
AspectSeeds load_aspect_seeds(const std::filesystem::path& path);

/// Smoothed inverse document frequency of seed keywords over a corpus:
/// idf = ln((1 + N) / (1 + df)) + 1.
class IdfTable {
public:
    IdfTable() = default;

    static IdfTable build(const std::vector<std::string>& texts, const AspectSeeds& seeds);

    double idf(const std::vector<std::string>& phrase) const;
    std::size_t corpus_size() const { return n_docs_; }

private:
    std::map<std::string, double> idf_;
    double default_idf_ = 1.0;
    std::size_t n_docs_ = 0;
};

/// Sums idf over seed keywords matched leftmost-longest per aspect, then
/// softmaxes the five raw sums. No hits at all -> uniform relevance.
AspectScores score_aspects(const std::vector<std::string>& clause_words, const AspectSeeds& seeds,
                           const IdfTable& idf);

/// Argmax aspect when its relevance clears the threshold, else General.
Aspect assign_aspect(const AspectScores& scores, double threshold = 0.3);

}  // namespace absa
