#include "absa/textprep.hpp"

#include <algorithm>
#include <cstring>

#include "absa/utf8.hpp"

namespace absa {

namespace {

bool ascii_iequal(char32_t a, char b) {
    return utf8::to_lower(a) == static_cast<char32_t>(b);
}

// Matches "http://", "https://" or "www." case-insensitively at position i.
bool url_starts_at(const std::vector<char32_t>& cps, std::size_t i) {
    static const char* kHttp = "http";
    std::size_t n = cps.size();
    if (i + 4 <= n && ascii_iequal(cps[i], 'w') && ascii_iequal(cps[i + 1], 'w') &&
        ascii_iequal(cps[i + 2], 'w') && cps[i + 3] == '.') {
        return true;
    }
    if (i + 4 > n) return false;
    for (int k = 0; k < 4; ++k) {
        if (!ascii_iequal(cps[i + k], kHttp[k])) return false;
    }
    std::size_t j = i + 4;
    if (j < n && ascii_iequal(cps[j], 's')) ++j;
    return j + 3 <= n && cps[j] == ':' && cps[j + 1] == '/' && cps[j + 2] == '/';
}

}  // namespace

std::pair<std::size_t, std::size_t> NormalizedText::to_raw_span(std::size_t start,
                                                                std::size_t end) const {
    auto lookup = [this](std::size_t norm_off) -> std::size_t {
        auto it = std::lower_bound(char_map.begin(), char_map.end(), norm_off,
                                   [](const MapEntry& e, std::size_t off) {
                                       return e.norm_offset < off;
                                   });
        if (it == char_map.end()) return char_map.empty() ? 0 : char_map.back().raw_offset;
        return it->raw_offset;
    };
    return {lookup(start), lookup(end)};
}

NormalizedText normalize(std::string_view raw) {
    utf8::CodepointRun run = utf8::decode_all(raw);
    std::size_t n = run.cps.size();

    // Drop URLs: everything from a scheme or www. start to the next whitespace.
    std::vector<bool> keep(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        if (url_starts_at(run.cps, i)) {
            std::size_t j = i;
            while (j < n && !utf8::is_space(run.cps[j])) {
                keep[j] = false;
                ++j;
            }
        }
    }

    // Canonical composition over adjacent pairs (Sinhala precomposed forms).
    std::vector<char32_t> cps;
    std::vector<std::size_t> raws;
    cps.reserve(n);
    raws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        char32_t cp = run.cps[i];
        std::size_t at = run.offsets[i];
        while (!cps.empty()) {
            char32_t composed = utf8::compose_pair(cps.back(), cp);
            if (composed == 0) break;
            cp = composed;
            at = raws.back();
            cps.pop_back();
            raws.pop_back();
        }
        cps.push_back(cp);
        raws.push_back(at);
    }

    NormalizedText out;
    out.text.reserve(raw.size());
    bool pending_space = false;
    std::size_t pending_space_raw = 0;
    char32_t prev_letter = 0;
    int run_len = 0;

    auto emit = [&out](char32_t cp, std::size_t raw_off) {
        out.char_map.push_back({out.text.size(), raw_off});
        utf8::append(out.text, cp);
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (utf8::is_control(cp)) continue;
        if (utf8::is_space(cp)) {
            if (!out.text.empty() && !pending_space) {
                pending_space = true;
                pending_space_raw = raws[i];
            }
            continue;
        }
        cp = utf8::to_lower(cp);
        if (pending_space) {
            emit(' ', pending_space_raw);
            pending_space = false;
            prev_letter = 0;
            run_len = 0;
        }
        if (utf8::is_letter(cp)) {
            if (cp == prev_letter) {
                if (++run_len > 2) continue;  // squash runs beyond 2
            } else {
                prev_letter = cp;
                run_len = 1;
            }
        } else {
            prev_letter = 0;
            run_len = 0;
        }
        emit(cp, raws[i]);
    }
    out.char_map.push_back({out.text.size(), raw.size()});
    return out;
}

namespace {

struct Piece {
    std::string text;
    std::size_t start;
    std::size_t end;
    bool is_punct_cue;  // run of sentence punctuation
};

}  // namespace

std::vector<Clause> segment_clauses(const NormalizedText& norm, const SegmentOptions& options) {
    const std::string& text = norm.text;
    auto is_cue_punct = [&options](char c) {
        return options.sentence_punct.find(c) != std::string::npos;
    };

    // Tokenize into space-separated chunks, splitting off terminal punctuation runs.
    std::vector<Piece> pieces;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ') { ++i; continue; }
        std::size_t start = i;
        while (i < text.size() && text[i] != ' ' && !is_cue_punct(text[i])) ++i;
        if (i > start) {
            pieces.push_back({text.substr(start, i - start), start, i, false});
        }
        if (i < text.size() && is_cue_punct(text[i])) {
            std::size_t p = i;
            while (i < text.size() && is_cue_punct(text[i])) ++i;
            pieces.push_back({text.substr(p, i - p), p, i, true});
        }
    }

    auto is_conjunction = [&options](const std::string& w) {
        return std::find(options.conjunctions.begin(), options.conjunctions.end(), w) !=
               options.conjunctions.end();
    };

    std::vector<Clause> clauses;
    std::size_t clause_begin = 0;  // index into pieces
    auto flush = [&](std::size_t end_piece, std::optional<std::string> cue) {
        if (end_piece <= clause_begin) return;
        const Piece& first = pieces[clause_begin];
        const Piece& last = pieces[end_piece - 1];
        Clause c;
        c.start = first.start;
        c.end = last.end;
        c.text = text.substr(c.start, c.end - c.start);
        c.split_cue = std::move(cue);
        clauses.push_back(std::move(c));
    };

    for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (pieces[p].is_punct_cue) {
            flush(p, pieces[p].text);
            clause_begin = p + 1;
        } else if (is_conjunction(pieces[p].text) && p > clause_begin) {
            flush(p, pieces[p].text);
            clause_begin = p;  // conjunction opens the next clause
        }
    }
    flush(pieces.size(), std::nullopt);

    if (clauses.empty() && !text.empty()) {
        // Delimiter-only input still yields one clause covering it.
        clauses.push_back({text, 0, text.size(), std::nullopt});
    }
    return clauses;
}

std::vector<WordToken> word_tokens(std::string_view text) {
    std::vector<WordToken> words;
    std::size_t pos = 0;
    std::size_t start = 0;
    std::string current;
    bool in_word = false;
    while (pos < text.size()) {
        std::size_t at = pos;
        char32_t cp = utf8::decode(text, pos);
        if (utf8::is_word_char(cp)) {
            if (!in_word) {
                in_word = true;
                start = at;
                current.clear();
            }
            utf8::append(current, cp);
        } else if (in_word) {
            words.push_back({current, start, at});
            in_word = false;
        }
    }
    if (in_word) words.push_back({current, start, text.size()});
    return words;
}

std::vector<WordToken> split_whitespace(std::string_view text) {
    std::vector<WordToken> chunks;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t start = i;
        while (i < text.size() && text[i] != ' ') ++i;
        if (i > start) chunks.push_back({std::string(text.substr(start, i - start)), start, i});
    }
    return chunks;
}

}  // namespace absa
