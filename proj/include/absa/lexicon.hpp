#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "absa/types.hpp"

namespace absa {

/// A polarity-weighted phrase: sign is polarity, magnitude is strength.
struct LexiconEntry {
    std::vector<std::string> phrase;  // normalized word tokens, non-empty
    double weight = 0.0;              // in [-1, +1]
    Variant variant = Variant::Unknown;
    std::string domain;
};

struct Match {
    std::size_t begin = 0;  // token index range [begin, end) in the input
    std::size_t end = 0;
    const LexiconEntry* entry = nullptr;
};

class Lexicon {
public:
    void add(LexiconEntry entry);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<LexiconEntry>& entries() const { return entries_; }

    /// Leftmost-longest non-overlapping phrase matching over word tokens.
    std::vector<Match> match_phrases(const std::vector<std::string>& words) const;

    bool has_phrase(const std::vector<std::string>& phrase, Variant variant) const;

    /// True when any Singlish-tagged entry matches; drives variant detection
    /// of Latin-only text.
    bool has_romanized_hit(const std::vector<std::string>& words) const;

private:
    std::vector<LexiconEntry> entries_;
    // first word -> indices of entries starting with it, longest first
    std::unordered_map<std::string, std::vector<std::size_t>> first_word_index_;
};

/// Parses a lexicon TSV: phrase<TAB>weight<TAB>variant<TAB>domain. "#" lines
/// are comments. Weights outside [-1, 1], empty phrases, and duplicate
/// (phrase, variant) pairs are rejected.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Merges several lexicon files into one (duplicates across files rejected).
Lexicon load_lexicons(const std::vector<std::filesystem::path>& paths);

/// Mean matched weight, 0 when nothing matched. Always in [-1, +1].
double lexicon_score(const std::vector<Match>& matches);

/// Log-space polarity shift: z_pos += beta * L, z_neg -= beta * L, neutral
/// untouched, then softmax. Exact identity when L or beta is zero.
SentimentScores apply_correction(const SentimentScores& scores, double lexicon_score,
                                 double beta);

}  // namespace absa
