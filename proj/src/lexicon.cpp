#include "absa/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "absa/classify.hpp"
#include "absa/textprep.hpp"

namespace absa {

namespace {

std::string join_phrase(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

std::vector<std::string> phrase_words(const std::string& text) {
    std::vector<std::string> words;
    for (const auto& tok : word_tokens(text)) words.push_back(tok.text);
    return words;
}

}  // namespace

void Lexicon::add(LexiconEntry entry) {
    if (entry.phrase.empty()) throw std::invalid_argument("lexicon entry has empty phrase");
    if (!(entry.weight >= -1.0 && entry.weight <= 1.0))
        throw std::invalid_argument("lexicon weight out of range [-1, 1]: " +
                                    std::to_string(entry.weight));
    if (has_phrase(entry.phrase, entry.variant))
        throw std::invalid_argument("duplicate lexicon phrase: \"" + join_phrase(entry.phrase) +
                                    "\" (" + to_string(entry.variant) + ")");
    first_word_index_[entry.phrase.front()].push_back(entries_.size());
    entries_.push_back(std::move(entry));
    // keep candidate lists longest-first so the first hit is the longest
    auto& bucket = first_word_index_[entries_.back().phrase.front()];
    std::stable_sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
        return entries_[a].phrase.size() > entries_[b].phrase.size();
    });
}

bool Lexicon::has_phrase(const std::vector<std::string>& phrase, Variant variant) const {
    if (phrase.empty()) return false;
    auto it = first_word_index_.find(phrase.front());
    if (it == first_word_index_.end()) return false;
    for (std::size_t idx : it->second) {
        const auto& e = entries_[idx];
        if (e.variant == variant && e.phrase == phrase) return true;
    }
    return false;
}

std::vector<Match> Lexicon::match_phrases(const std::vector<std::string>& words) const {
    std::vector<Match> matches;
    std::size_t i = 0;
    while (i < words.size()) {
        auto it = first_word_index_.find(words[i]);
        const LexiconEntry* best = nullptr;
        std::size_t best_len = 0;
        if (it != first_word_index_.end()) {
            for (std::size_t idx : it->second) {
                const auto& e = entries_[idx];
                if (e.phrase.size() > words.size() - i) continue;
                if (best && e.phrase.size() <= best_len) continue;
                if (std::equal(e.phrase.begin(), e.phrase.end(), words.begin() + i)) {
                    best = &e;
                    best_len = e.phrase.size();
                }
            }
        }
        if (best) {
            matches.push_back(Match{i, i + best_len, best});
            i += best_len;
        } else {
            ++i;
        }
    }
    return matches;
}

bool Lexicon::has_romanized_hit(const std::vector<std::string>& words) const {
    for (const auto& m : match_phrases(words)) {
        if (m.entry->variant == Variant::Singlish) return true;
    }
    return false;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    return load_lexicons({path});
}

Lexicon load_lexicons(const std::vector<std::filesystem::path>& paths) {
    Lexicon lex;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cols;
            std::size_t start = 0;
            while (true) {
                auto tab = line.find('\t', start);
                if (tab == std::string::npos) {
                    cols.push_back(line.substr(start));
                    break;
                }
                cols.push_back(line.substr(start, tab - start));
                start = tab + 1;
            }
            auto fail = [&](const std::string& why) -> std::runtime_error {
                return std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                          why);
            };
            if (cols.size() != 4) throw fail("expected 4 tab-separated fields, got " +
                                             std::to_string(cols.size()));
            LexiconEntry e;
            e.phrase = phrase_words(normalize(cols[0]).text);
            if (e.phrase.empty()) throw fail("empty phrase");
            try {
                std::size_t used = 0;
                e.weight = std::stod(cols[1], &used);
                if (used != cols[1].size()) throw std::invalid_argument(cols[1]);
            } catch (const std::exception&) {
                throw fail("bad weight: \"" + cols[1] + "\"");
            }
            if (!(e.weight >= -1.0 && e.weight <= 1.0))
                throw fail("weight out of range [-1, 1]: " + cols[1]);
            auto variant = parse_variant(cols[2]);
            if (!variant) throw fail("bad variant: \"" + cols[2] + "\"");
            e.variant = *variant;
            e.domain = cols[3];
            try {
                lex.add(std::move(e));
            } catch (const std::invalid_argument& ex) {
                throw fail(ex.what());
            }
        }
    }
    return lex;
}

double lexicon_score(const std::vector<Match>& matches) {
    if (matches.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& m : matches) sum += m.entry->weight;
    return sum / static_cast<double>(matches.size());
}

SentimentScores apply_correction(const SentimentScores& scores, double lexicon_score,
                                 double beta) {
    if (lexicon_score == 0.0 || beta == 0.0) return scores;
    Logits z;
    z.neg = std::log(std::max(scores.neg, 1e-300)) - beta * lexicon_score;
    z.neu = std::log(std::max(scores.neu, 1e-300));
    z.pos = std::log(std::max(scores.pos, 1e-300)) + beta * lexicon_score;
    return softmax(z);
}

}  // namespace absa
