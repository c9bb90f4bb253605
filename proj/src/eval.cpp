#include "absa/eval.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "absa/textprep.hpp"

namespace absa {

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

std::size_t ConfusionMatrix::diagonal() const {
    std::size_t t = 0;
    for (int k = 0; k < kNumSentiments; ++k)
        t += counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    return t;
}

ConfusionMatrix confusion(const std::vector<Sentiment>& golds,
                          const std::vector<Sentiment>& preds) {
    if (golds.size() != preds.size())
        throw std::invalid_argument("confusion: " + std::to_string(golds.size()) +
                                    " gold labels vs " + std::to_string(preds.size()) +
                                    " predictions");
    if (golds.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < golds.size(); ++i)
        cm.counts[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(preds[i])]++;
    return cm;
}

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

MetricsReport metrics(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) throw std::invalid_argument("metrics: empty confusion matrix");
    MetricsReport report;
    report.accuracy = static_cast<double>(cm.diagonal()) / static_cast<double>(total);
    double f1_sum = 0.0;
    for (int k = 0; k < kNumSentiments; ++k) {
        auto kk = static_cast<std::size_t>(k);
        std::size_t tp = cm.counts[kk][kk];
        std::size_t pred_k = 0, gold_k = 0;
        for (int j = 0; j < kNumSentiments; ++j) {
            pred_k += cm.counts[static_cast<std::size_t>(j)][kk];
            gold_k += cm.counts[kk][static_cast<std::size_t>(j)];
        }
        ClassMetrics& m = report.per_class[kk];
        m.precision = safe_div(static_cast<double>(tp), static_cast<double>(pred_k));
        m.recall = safe_div(static_cast<double>(tp), static_cast<double>(gold_k));
        m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
        f1_sum += m.f1;
    }
    report.macro_f1 = f1_sum / kNumSentiments;
    return report;
}

Sentiment predict_sentiment(const ScorerBackend& backend, const std::string& text,
                            const Lexicon* lexicon, double beta) {
    SentimentScores scores = score(backend, text);
    if (lexicon) {
        std::vector<std::string> words;
        for (const auto& t : word_tokens(normalize(text).text)) words.push_back(t.text);
        double L = lexicon_score(lexicon->match_phrases(words));
        scores = apply_correction(scores, L, beta);
    }
    return scores.argmax();
}

std::vector<ComparisonRow> compare_backends(const std::vector<BackendSpec>& specs,
                                            const Dataset& test, const Lexicon& lexicon,
                                            double beta) {
    std::vector<const Review*> labeled;
    for (const auto& r : test.reviews())
        if (r.gold_sentiment) labeled.push_back(&r);
    if (!specs.empty() && labeled.empty())
        throw std::invalid_argument("comparison corpus has no gold sentiment labels");

    std::vector<ComparisonRow> rows;
    for (const auto& spec : specs) {
        ComparisonRow row;
        row.backend = spec.backend->name();
        row.lexicon = spec.use_lexicon;
        try {
            std::vector<Sentiment> golds, preds;
            golds.reserve(labeled.size());
            preds.reserve(labeled.size());
            for (const Review* r : labeled) {
                golds.push_back(*r->gold_sentiment);
                preds.push_back(predict_sentiment(*spec.backend, r->raw_text,
                                                  spec.use_lexicon ? &lexicon : nullptr, beta));
            }
            auto report = metrics(confusion(golds, preds));
            row.accuracy = report.accuracy;
            row.macro_f1 = report.macro_f1;
            row.n = labeled.size();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_to_json(const std::vector<ComparisonRow>& rows) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        obj["backend"] = row.backend;
        obj["lexicon"] = row.lexicon;
        if (row.error.empty()) {
            obj["accuracy"] = row.accuracy;
            obj["macro_f1"] = row.macro_f1;
            obj["n"] = row.n;
        } else {
            obj["error"] = row.error;
        }
        out.push_back(std::move(obj));
    }
    return out.dump(2);
}

std::string comparison_to_text(const std::vector<ComparisonRow>& rows) {
    std::size_t name_width = 7;  // "backend"
    for (const auto& row : rows) name_width = std::max(name_width, row.backend.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << "backend"
        << std::setw(9) << "lexicon" << std::right << std::setw(10) << "accuracy"
        << std::setw(10) << "macro_f1" << std::setw(8) << "n" << '\n';
    for (const auto& row : rows) {
        out << std::left << std::setw(static_cast<int>(name_width) + 2) << row.backend
            << std::setw(9) << (row.lexicon ? "on" : "off");
        if (row.error.empty()) {
            out << std::right << std::fixed << std::setprecision(4) << std::setw(10)
                << row.accuracy << std::setw(10) << row.macro_f1 << std::setw(8) << row.n;
            out.unsetf(std::ios::fixed);
        } else {
            out << std::right << "  error: " << row.error;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace absa
