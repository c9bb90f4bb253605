#include "absa/aspect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "absa/textprep.hpp"

namespace absa {

namespace {

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

std::vector<std::string> normalized_words(const std::string& text) {
    std::vector<std::string> words;
    for (const auto& tok : word_tokens(normalize(text).text)) words.push_back(tok.text);
    return words;
}

bool contains_phrase(const std::vector<std::string>& words,
                     const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > words.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i)
        if (std::equal(phrase.begin(), phrase.end(), words.begin() + i)) return true;
    return false;
}

}  // namespace

int AspectScores::argmax() const {
    int best = 0;
    for (int a = 1; a < kNumNamedAspects; ++a)
        if (relevance[static_cast<std::size_t>(a)] > relevance[static_cast<std::size_t>(best)])
            best = a;
    return best;
}

double AspectScores::max_relevance() const {
    return relevance[static_cast<std::size_t>(argmax())];
}

void AspectSeeds::add(Aspect aspect, std::vector<std::string> words) {
    auto ai = static_cast<std::size_t>(aspect);
    if (aspect == Aspect::General || ai >= kNumNamedAspects)
        throw std::invalid_argument("seed keywords may only target the five named aspects");
    if (words.empty()) throw std::invalid_argument("empty seed keyword");
    auto& list = keywords_[ai];
    if (std::find(list.begin(), list.end(), words) != list.end()) return;
    first_word_[ai][words.front()].push_back(list.size());
    list.push_back(std::move(words));
    auto& bucket = first_word_[ai][list.back().front()];
    std::stable_sort(bucket.begin(), bucket.end(), [&list](std::size_t a, std::size_t b) {
        return list[a].size() > list[b].size();
    });
}

const std::vector<std::vector<std::string>>& AspectSeeds::keywords(Aspect aspect) const {
    auto ai = static_cast<std::size_t>(aspect);
    if (ai >= kNumNamedAspects)
        throw std::invalid_argument("no keywords stored for " + to_string(aspect));
    return keywords_[ai];
}

std::size_t AspectSeeds::total_keywords() const {
    std::size_t n = 0;
    for (const auto& list : keywords_) n += list.size();
    return n;
}

void AspectSeeds::validate() const {
    for (int a = 0; a < kNumNamedAspects; ++a) {
        if (keywords_[static_cast<std::size_t>(a)].empty())
            throw std::runtime_error("aspect seed table has no keywords for " +
                                     to_string(static_cast<Aspect>(a)));
    }
}

const std::vector<std::size_t>* AspectSeeds::candidates(Aspect aspect,
                                                        const std::string& word) const {
    auto ai = static_cast<std::size_t>(aspect);
    if (ai >= kNumNamedAspects) return nullptr;
    auto it = first_word_[ai].find(word);
    return it == first_word_[ai].end() ? nullptr : &it->second;
}

AspectSeeds load_aspect_seeds(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open aspect seed file: " + path.string());
    AspectSeeds seeds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) -> std::runtime_error {
            return std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + why);
        };
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw fail("expected aspect<TAB>keyword");
        auto aspect = parse_aspect(line.substr(0, tab));
        if (!aspect) throw fail("unknown aspect \"" + line.substr(0, tab) + "\"");
        auto words = normalized_words(line.substr(tab + 1));
        if (words.empty()) throw fail("empty keyword");
        try {
            seeds.add(*aspect, std::move(words));
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }
    seeds.validate();
    return seeds;
}

IdfTable IdfTable::build(const std::vector<std::string>& texts, const AspectSeeds& seeds) {
    IdfTable table;
    table.n_docs_ = texts.size();
    std::vector<std::vector<std::string>> docs;
    docs.reserve(texts.size());
    for (const auto& t : texts) docs.push_back(normalized_words(t));

    double n = static_cast<double>(table.n_docs_);
    table.default_idf_ = std::log(1.0 + n) + 1.0;
    for (int a = 0; a < kNumNamedAspects; ++a) {
        for (const auto& phrase : seeds.keywords(static_cast<Aspect>(a))) {
            auto key = join_words(phrase);
            if (table.idf_.count(key)) continue;
            std::size_t df = 0;
            for (const auto& doc : docs)
                if (contains_phrase(doc, phrase)) ++df;
            table.idf_[key] =
                std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
        }
    }
    return table;
}

double IdfTable::idf(const std::vector<std::string>& phrase) const {
    auto it = idf_.find(join_words(phrase));
    return it == idf_.end() ? default_idf_ : it->second;
}

AspectScores score_aspects(const std::vector<std::string>& clause_words, const AspectSeeds& seeds,
                           const IdfTable& idf) {
    std::array<double, kNumNamedAspects> raw{};
    bool any = false;
    for (int a = 0; a < kNumNamedAspects; ++a) {
        auto aspect = static_cast<Aspect>(a);
        const auto& list = seeds.keywords(aspect);
        std::size_t i = 0;
        while (i < clause_words.size()) {
            const std::vector<std::string>* best = nullptr;
            if (const auto* cands = seeds.candidates(aspect, clause_words[i])) {
                for (std::size_t idx : *cands) {
                    const auto& phrase = list[idx];
                    if (phrase.size() > clause_words.size() - i) continue;
                    if (best && phrase.size() <= best->size()) continue;
                    if (std::equal(phrase.begin(), phrase.end(), clause_words.begin() + i))
                        best = &phrase;
                }
            }
            if (best) {
                raw[static_cast<std::size_t>(a)] += idf.idf(*best);
                any = true;
                i += best->size();
            } else {
                ++i;
            }
        }
    }
    AspectScores scores;
    if (!any) {
        scores.relevance.fill(1.0 / kNumNamedAspects);
        return scores;
    }
    double m = *std::max_element(raw.begin(), raw.end());
    double sum = 0.0;
    for (int a = 0; a < kNumNamedAspects; ++a) {
        auto e = std::exp(raw[static_cast<std::size_t>(a)] - m);
        scores.relevance[static_cast<std::size_t>(a)] = e;
        sum += e;
    }
    for (auto& v : scores.relevance) v /= sum;
    return scores;
}

Aspect assign_aspect(const AspectScores& scores, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("aspect threshold must be in (0, 1)");
    int best = scores.argmax();
    if (scores.relevance[static_cast<std::size_t>(best)] >= threshold)
        return static_cast<Aspect>(best);
    return Aspect::General;
}

}  // namespace absa
