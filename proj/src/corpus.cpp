#include "absa/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "absa/lexicon.hpp"
#include "absa/rng.hpp"
#include "absa/textprep.hpp"
#include "absa/utf8.hpp"

namespace absa {

namespace {

using nlohmann::json;

[[noreturn]] void record_error(const std::filesystem::path& path, std::size_t line,
                               const std::string& why) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + why);
}

void validate_review(const Review& r, const std::filesystem::path& path, std::size_t line) {
    if (r.id.empty()) record_error(path, line, "empty id");
    if (r.raw_text.empty()) record_error(path, line, "empty text");
}

std::optional<Sentiment> parse_opt_sentiment(const std::string& s,
                                             const std::filesystem::path& path,
                                             std::size_t line) {
    if (s.empty()) return std::nullopt;
    auto parsed = parse_sentiment(s);
    if (!parsed) record_error(path, line, "unknown sentiment label \"" + s + "\"");
    return parsed;
}

std::optional<Aspect> parse_opt_aspect(const std::string& s, const std::filesystem::path& path,
                                       std::size_t line) {
    if (s.empty()) return std::nullopt;
    auto parsed = parse_aspect(s);
    if (!parsed) record_error(path, line, "unknown aspect label \"" + s + "\"");
    return parsed;
}

Variant parse_opt_variant(const std::string& s, const std::filesystem::path& path,
                          std::size_t line) {
    if (s.empty()) return Variant::Unknown;
    auto parsed = parse_variant(s);
    if (!parsed) record_error(path, line, "unknown variant label \"" + s + "\"");
    return *parsed;
}

Dataset from_records(std::vector<Review> reviews, const std::filesystem::path& path,
                     const std::vector<std::size_t>& lines) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        if (!seen.insert(reviews[i].id).second)
            record_error(path, lines[i], "duplicate id \"" + reviews[i].id + "\"");
    }
    return Dataset(std::move(reviews));
}

Dataset load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
    std::vector<Review> reviews;
    std::vector<std::size_t> lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            record_error(path, lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) record_error(path, lineno, "record is not a JSON object");
        Review r;
        if (!obj.contains("id") || !obj["id"].is_string())
            record_error(path, lineno, "missing or non-string \"id\"");
        r.id = obj["id"].get<std::string>();
        if (!obj.contains("text") || !obj["text"].is_string())
            record_error(path, lineno, "missing or non-string \"text\"");
        r.raw_text = obj["text"].get<std::string>();
        auto opt_str = [&](const char* key) -> std::string {
            if (!obj.contains(key) || obj[key].is_null()) return "";
            if (!obj[key].is_string())
                record_error(path, lineno, std::string("non-string \"") + key + "\"");
            return obj[key].get<std::string>();
        };
        r.variant = parse_opt_variant(opt_str("variant"), path, lineno);
        r.gold_aspect = parse_opt_aspect(opt_str("aspect"), path, lineno);
        r.gold_sentiment = parse_opt_sentiment(opt_str("sentiment"), path, lineno);
        r.source = opt_str("source");
        validate_review(r, path, lineno);
        reviews.push_back(std::move(r));
        lines.push_back(lineno);
    }
    return from_records(std::move(reviews), path, lines);
}

// RFC-4180 style: quoted fields may contain commas, doubled quotes, newlines.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

std::vector<CsvRecord> parse_csv(const std::string& content, const std::filesystem::path& path) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t lineno = 1;
    current.line = 1;
    auto end_field = [&] {
        current.fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        bool blank = current.fields.size() == 1 && current.fields[0].empty();
        if (!blank) records.push_back(std::move(current));
        current = CsvRecord{};
        current.line = lineno;
    };
    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++lineno;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty())
                    record_error(path, lineno, "stray quote inside unquoted field");
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                ++lineno;
                end_record();
                break;
            default:
                field += c;
                field_started = true;
                break;
        }
    }
    if (in_quotes) record_error(path, lineno, "unterminated quoted field");
    if (field_started || !current.fields.empty()) end_record();
    return records;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto records = parse_csv(buf.str(), path);
    if (records.empty()) return Dataset{};
    const std::vector<std::string> header = {"id", "text", "variant", "aspect", "sentiment"};
    if (records[0].fields != header)
        record_error(path, records[0].line,
                     "expected header \"id,text,variant,aspect,sentiment\"");
    std::vector<Review> reviews;
    std::vector<std::size_t> lines;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.fields.size() != 5)
            record_error(path, rec.line, "expected 5 fields, got " +
                                             std::to_string(rec.fields.size()));
        Review r;
        r.id = rec.fields[0];
        r.raw_text = rec.fields[1];
        r.variant = parse_opt_variant(rec.fields[2], path, rec.line);
        r.gold_aspect = parse_opt_aspect(rec.fields[3], path, rec.line);
        r.gold_sentiment = parse_opt_sentiment(rec.fields[4], path, rec.line);
        validate_review(r, path, rec.line);
        reviews.push_back(std::move(r));
        lines.push_back(rec.line);
    }
    return from_records(std::move(reviews), path, lines);
}

}  // namespace

Dataset::Dataset(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
    std::unordered_set<std::string> seen;
    for (const auto& r : reviews_) {
        if (r.id.empty()) throw std::invalid_argument("review with empty id");
        if (r.raw_text.empty()) throw std::invalid_argument("review \"" + r.id + "\" has empty text");
        if (!seen.insert(r.id).second)
            throw std::invalid_argument("duplicate review id \"" + r.id + "\"");
    }
}

DatasetStats Dataset::stats() const {
    DatasetStats s;
    s.total = reviews_.size();
    for (const auto& r : reviews_) {
        if (r.gold_sentiment)
            s.by_sentiment[static_cast<std::size_t>(*r.gold_sentiment)]++;
        else
            s.unlabeled_sentiment++;
        if (r.gold_aspect)
            s.by_aspect[static_cast<std::size_t>(*r.gold_aspect)]++;
        else
            s.unlabeled_aspect++;
        s.by_variant[static_cast<std::size_t>(r.variant)]++;
    }
    return s;
}

Dataset load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    return format == CorpusFormat::Jsonl ? load_jsonl(path) : load_csv(path);
}

Dataset load_corpus(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".csv") return load_corpus(path, CorpusFormat::Csv);
    if (ext == ".jsonl" || ext == ".json") return load_corpus(path, CorpusFormat::Jsonl);
    throw std::runtime_error("cannot infer corpus format from extension: " + path.string());
}

Variant detect_variant(const std::string& text, const Lexicon& romanized_hints) {
    bool has_latin = false;
    bool has_sinhala = false;
    for (char32_t cp : utf8::decode_all(text).cps) {
        if (utf8::is_latin_letter(cp)) has_latin = true;
        if (utf8::is_sinhala(cp)) has_sinhala = true;
    }
    if (has_latin && has_sinhala) return Variant::CodeMixed;
    if (has_sinhala) return Variant::Sinhala;
    if (!has_latin) return Variant::Unknown;
    auto norm = normalize(text);
    std::vector<std::string> words;
    for (const auto& tok : word_tokens(norm.text)) words.push_back(tok.text);
    return romanized_hints.has_romanized_hit(words) ? Variant::Singlish : Variant::English;
}

namespace {

// Largest-remainder apportionment of n across the three ratios.
std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& ratios) {
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> frac{};
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        double target = static_cast<double>(n) * ratios[static_cast<std::size_t>(i)];
        counts[static_cast<std::size_t>(i)] = static_cast<std::size_t>(target);
        frac[static_cast<std::size_t>(i)] = target - std::floor(target);
        assigned += counts[static_cast<std::size_t>(i)];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return frac[static_cast<std::size_t>(a)] >
                                                frac[static_cast<std::size_t>(b)]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned)
        counts[static_cast<std::size_t>(order[i % 3])]++;
    return counts;
}

}  // namespace

SplitResult stratified_split(const Dataset& dataset, double train_ratio, double dev_ratio,
                             double test_ratio, std::uint64_t seed) {
    if (!(train_ratio > 0) || !(dev_ratio > 0) || !(test_ratio > 0))
        throw std::invalid_argument("split ratios must be positive");
    if (std::abs(train_ratio + dev_ratio + test_ratio - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");

    // strata: one per sentiment class, one for unlabeled
    std::array<std::vector<std::size_t>, kNumSentiments + 1> strata;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& r = dataset[i];
        if (r.gold_sentiment)
            strata[static_cast<std::size_t>(*r.gold_sentiment)].push_back(i);
        else
            strata[kNumSentiments].push_back(i);
    }
    for (int c = 0; c < kNumSentiments; ++c) {
        if (strata[static_cast<std::size_t>(c)].size() < 3)
            throw std::runtime_error("need at least 3 examples labeled " +
                                     to_string(static_cast<Sentiment>(c)) +
                                     " to stratify, got " +
                                     std::to_string(strata[static_cast<std::size_t>(c)].size()));
    }

    std::array<std::vector<std::size_t>, 3> picks;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& members = strata[s];
        if (members.empty()) continue;
        auto order = shuffled_indices(members.size(), derive_seed(seed, s));
        auto counts = apportion(members.size(), {train_ratio, dev_ratio, test_ratio});
        std::size_t at = 0;
        for (std::size_t part = 0; part < 3; ++part)
            for (std::size_t k = 0; k < counts[part]; ++k, ++at)
                picks[part].push_back(members[order[at]]);
    }

    SplitResult result;
    Dataset* outs[3] = {&result.train, &result.dev, &result.test};
    for (std::size_t part = 0; part < 3; ++part) {
        std::sort(picks[part].begin(), picks[part].end());
        std::vector<Review> rs;
        rs.reserve(picks[part].size());
        for (std::size_t i : picks[part]) rs.push_back(dataset[i]);
        *outs[part] = Dataset(std::move(rs));
    }
    return result;
}

namespace {

int weight_sign(double w) { return w > 0 ? 1 : (w < 0 ? -1 : 0); }

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

int text_lexicon_sign(const std::string& raw, const Lexicon& lexicon) {
    auto norm = normalize(raw);
    std::vector<std::string> words;
    for (const auto& tok : word_tokens(norm.text)) words.push_back(tok.text);
    return weight_sign(lexicon_score(lexicon.match_phrases(words)));
}

}  // namespace

Review augment_lexical(const Review& review, const Lexicon& lexicon, std::uint64_t seed) {
    auto norm = normalize(review.raw_text);
    auto toks = word_tokens(norm.text);
    std::vector<std::string> words;
    words.reserve(toks.size());
    for (const auto& t : toks) words.push_back(t.text);
    auto matches = lexicon.match_phrases(words);
    if (matches.empty()) return review;

    int original_sign = weight_sign(lexicon_score(matches));

    SplitMix64 pick(derive_stream(seed, 0));
    const Match& target = matches[pick.next_below(matches.size())];

    // candidate replacements: same variant, same polarity sign, different phrase
    std::vector<const LexiconEntry*> candidates;
    for (const auto& e : lexicon.entries()) {
        if (e.variant != target.entry->variant) continue;
        if (weight_sign(e.weight) != weight_sign(target.entry->weight)) continue;
        if (e.phrase == target.entry->phrase) continue;
        candidates.push_back(&e);
    }
    if (candidates.empty()) return review;

    auto order = shuffled_indices(candidates.size(), derive_seed(seed, 1));
    std::size_t raw_begin = toks[target.begin].start;
    std::size_t raw_end = toks[target.end - 1].end;
    auto span = norm.to_raw_span(raw_begin, raw_end);
    for (std::size_t oi : order) {
        const LexiconEntry* alt = candidates[oi];
        std::string new_text = review.raw_text.substr(0, span.first) + join_words(alt->phrase) +
                               review.raw_text.substr(span.second);
        // replacement must not flip the overall lexicon polarity of the text
        if (text_lexicon_sign(new_text, lexicon) != original_sign) continue;
        Review out = review;
        out.raw_text = std::move(new_text);
        return out;
    }
    return review;
}

}  // namespace absa
