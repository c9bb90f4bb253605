#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

/// Normalized text plus a map from normalized byte offsets back into the raw
/// string. One entry per codepoint, with a trailing sentinel at end-of-text.
struct NormalizedText {
    std::string text;

    struct MapEntry {
        std::size_t norm_offset;  // byte offset in `text`
        std::size_t raw_offset;   // byte offset in the raw input
    };
    std::vector<MapEntry> char_map;

    /// Maps a [start, end) byte span of `text` to the covering raw span.
    std::pair<std::size_t, std::size_t> to_raw_span(std::size_t start, std::size_t end) const;
};

/// Canonical composition, URL and control-char removal, whitespace collapse,
/// Latin lowercasing, and letter-run squashing (>2 repeats become 2).
/// Idempotent: normalize(normalize(x).text) == normalize(x).
NormalizedText normalize(std::string_view raw);

struct Clause {
    std::string text;                     // normalized substring, trimmed
    std::size_t start = 0;                // byte span into the normalized text
    std::size_t end = 0;
    std::optional<std::string> split_cue; // punctuation run or conjunction that ended it
};

struct SegmentOptions {
    std::vector<std::string> conjunctions{"but", "however", "නමුත්"};
    std::string sentence_punct{".!?;"};
};

/// Splits normalized text at sentence punctuation and before contrastive
/// conjunctions. The conjunction attaches to the clause it introduces.
/// Non-empty text always yields at least one clause.
std::vector<Clause> segment_clauses(const NormalizedText& text,
                                    const SegmentOptions& options = {});

struct WordToken {
    std::string text;
    std::size_t start = 0;  // byte span into the source string
    std::size_t end = 0;
};

/// Splits into word tokens: maximal runs of word characters. Punctuation and
/// whitespace separate tokens and are dropped.
std::vector<WordToken> word_tokens(std::string_view text);

/// Splits on spaces only; punctuation stays attached. This is the chunking
/// the subword tokenizer works over.
std::vector<WordToken> split_whitespace(std::string_view text);

}  // namespace absa
