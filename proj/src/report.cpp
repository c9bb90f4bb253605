#include "absa/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

#include "absa/rng.hpp"

namespace absa {

namespace {

using nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

ordered_json scores_to_json(const SentimentScores& s) {
    return ordered_json::array({s.neg, s.neu, s.pos});
}

ordered_json attribution_to_json(const Attribution& a) {
    ordered_json j;
    j["token"] = a.token;
    j["position"] = a.position;
    j["weight"] = a.weight;
    return j;
}

const char* kBuckets[kNumSentiments] = {"Negative", "Neutral", "Positive"};

std::string summary_sentence(const AspectSummary& s) {
    std::string out = to_string(s.aspect) + ": " + std::to_string(s.support) +
                      (s.support == 1 ? " review mention; " : " review mentions; ");
    out += "Positive " + fmt("%.1f", 100.0 * s.label_distribution[2]) + "%, ";
    out += "Neutral " + fmt("%.1f", 100.0 * s.label_distribution[1]) + "%, ";
    out += "Negative " + fmt("%.1f", 100.0 * s.label_distribution[0]) + "%; ";
    out += "mean polarity index " + fmt("%.3f", s.mean_polarity_index) + ".";
    return out;
}

}  // namespace

ordered_json lime_to_json(const LimeExplanation& e, const std::string& text,
                          const std::vector<std::string>& tokens) {
    ordered_json j;
    j["method"] = "lime";
    j["target_class"] = to_string(e.target_class);
    j["text"] = text;
    j["tokens"] = tokens;
    j["intercept"] = e.intercept;
    j["fidelity_r2"] = e.fidelity_r2;
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    j["kernel_width"] = e.kernel_width;
    j["attributions"] = ordered_json::array();
    for (const auto& a : e.attributions) j["attributions"].push_back(attribution_to_json(a));
    return j;
}

ordered_json shap_to_json(const ShapExplanation& e, const std::string& text,
                          const std::vector<std::string>& tokens) {
    ordered_json j;
    j["method"] = to_string(e.method);
    j["target_class"] = to_string(e.target_class);
    j["text"] = text;
    j["tokens"] = tokens;
    j["base_value"] = e.base_value;
    j["fx"] = e.fx;
    j["additivity_residual"] = e.additivity_residual;
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    j["attributions"] = ordered_json::array();
    for (const auto& a : e.phi) j["attributions"].push_back(attribution_to_json(a));
    return j;
}

ordered_json build_report(const Engine& engine, const CorpusAnalysis& analysis) {
    const EngineConfig& cfg = engine.config;
    ordered_json report;
    report["format"] = "absa-report/1";

    // Corpus block: counts only, nothing environment-dependent.
    std::map<std::string, std::size_t> by_variant;
    for (const auto& ra : analysis.reviews) by_variant[to_string(ra.variant)]++;
    report["corpus"]["reviews"] = analysis.reviews.size();
    report["corpus"]["variants"] = ordered_json(by_variant);

    // Semantic knobs only. Paths and worker counts are excluded so reruns
    // elsewhere produce identical bytes.
    ordered_json knobs;
    knobs["backend"] = engine.backend->name();
    knobs["lexicon_enabled"] = cfg.lexicon_enabled;
    knobs["beta"] = cfg.beta;
    knobs["aspect_threshold"] = cfg.aspect_threshold;
    knobs["neutral_low"] = cfg.neutral_low;
    knobs["neutral_high"] = cfg.neutral_high;
    knobs["sigma"] = cfg.sigma;
    knobs["lime_samples"] = cfg.lime_samples;
    knobs["top_k"] = cfg.top_k;
    knobs["keywords_k"] = cfg.keywords_k;
    knobs["examples_per_aspect"] = cfg.examples_per_aspect;
    knobs["seed"] = cfg.seed;
    report["config"] = std::move(knobs);

    // Clause slices for keyword extraction: all clause texts as background,
    // grouped by (aspect, clause-level label) for the buckets.
    std::vector<std::string> background;
    std::map<std::pair<int, int>, std::vector<std::string>> bucket_texts;
    for (const auto& ra : analysis.reviews) {
        for (const auto& cs : ra.clauses) {
            background.push_back(cs.clause.text);
            IndexLabel il =
                label_from_index(polarity_index(cs.scores), cfg.neutral_low, cfg.neutral_high);
            bucket_texts[{static_cast<int>(cs.aspect), static_cast<int>(il.label)}].push_back(
                cs.clause.text);
        }
    }

    // Review-level aggregates per aspect, dataset order preserved.
    std::map<int, std::vector<std::pair<std::size_t, const AspectAggregate*>>> aspect_reviews;
    for (std::size_t i = 0; i < analysis.reviews.size(); ++i)
        for (const auto& agg : analysis.reviews[i].aspects)
            aspect_reviews[static_cast<int>(agg.aspect)].push_back({i, &agg});

    report["aspects"] = ordered_json::array();
    for (const AspectSummary& summary : analysis.summaries) {
        const int aspect_id = static_cast<int>(summary.aspect);
        ordered_json sec;
        sec["aspect"] = to_string(summary.aspect);
        sec["support"] = summary.support;
        ordered_json dist;
        for (int c = 0; c < kNumSentiments; ++c)
            dist[kBuckets[c]] = summary.label_distribution[static_cast<std::size_t>(c)];
        sec["label_distribution"] = std::move(dist);
        sec["mean_polarity_index"] = summary.mean_polarity_index;

        ordered_json kw;
        for (int c = 0; c < kNumSentiments; ++c) {
            ordered_json list = ordered_json::array();
            auto it = bucket_texts.find({aspect_id, c});
            if (it != bucket_texts.end() && !it->second.empty()) {
                for (const auto& ks : extract_keywords(
                         it->second, static_cast<std::size_t>(cfg.keywords_k), &background)) {
                    ordered_json item;
                    item["term"] = ks.term;
                    item["score"] = ks.score;
                    list.push_back(std::move(item));
                }
            }
            kw[kBuckets[c]] = std::move(list);
        }
        sec["keywords"] = std::move(kw);

        // Most polarized reviews first; ties keep dataset order.
        auto ranked = aspect_reviews[aspect_id];
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
            return std::fabs(x.second->polarity_index - 0.5) >
                   std::fabs(y.second->polarity_index - 0.5);
        });

        sec["examples"] = ordered_json::array();
        for (std::size_t e = 0;
             e < ranked.size() && e < static_cast<std::size_t>(cfg.examples_per_aspect); ++e) {
            const ReviewAnalysis& ra = analysis.reviews[ranked[e].first];
            const AspectAggregate& agg = *ranked[e].second;
            ordered_json ex;
            ex["id"] = ra.id;
            ex["text"] = ra.text;
            ex["polarity_index"] = agg.polarity_index;
            ex["label"] = to_string(agg.label);
            ex["lean"] = to_string(agg.lean);
            ex["clauses"] = agg.support;
            sec["examples"].push_back(std::move(ex));
        }

        // One explained review per aspect: the most polarized one.
        sec["explained"] = nullptr;
        if (!ranked.empty()) {
            const ReviewAnalysis& ra = analysis.reviews[ranked.front().first];
            const AspectAggregate& agg = *ranked.front().second;
            TokenizedText tokenized = encode(*engine.vocab, ra.text);
            if (!tokenized.tokens.empty()) {
                LimeOptions opt;
                const int m = static_cast<int>(tokenized.tokens.size());
                opt.n_samples = std::max(cfg.lime_samples, m + 2);
                opt.seed = derive_seed(cfg.seed, 9000 + static_cast<std::uint64_t>(aspect_id));
                opt.kernel_width = cfg.sigma;
                opt.top_k = cfg.top_k;
                opt.ridge_lambda = cfg.ridge_lambda;
                opt.workers = cfg.workers;
                LimeExplanation lime = lime_explain(*engine.backend, *engine.vocab, ra.text,
                                                    agg.label, opt);
                ordered_json ej = lime_to_json(lime, ra.text, tokenized.tokens);
                ej.erase("text");
                ordered_json explained;
                explained["id"] = ra.id;
                explained.update(ej);
                sec["explained"] = std::move(explained);
            }
        }

        sec["summary"] = summary_sentence(summary);
        report["aspects"].push_back(std::move(sec));
    }

    report["reviews"] = ordered_json::array();
    for (const auto& ra : analysis.reviews) report["reviews"].push_back(review_to_json(ra));
    return report;
}

ordered_json review_to_json(const ReviewAnalysis& ra) {
    ordered_json r;
    r["id"] = ra.id;
    r["text"] = ra.text;
    r["variant"] = to_string(ra.variant);
    ordered_json overall;
    overall["scores"] = scores_to_json(ra.overall_scores);
    overall["polarity_index"] = ra.overall_index;
    overall["label"] = to_string(ra.overall_label);
    overall["lean"] = to_string(ra.overall_lean);
    overall["confidence"] = ra.overall_scores.confidence();
    r["overall"] = std::move(overall);
    r["clauses"] = ordered_json::array();
    for (const auto& cs : ra.clauses) {
        ordered_json c;
        c["text"] = cs.clause.text;
        c["aspect"] = to_string(cs.aspect);
        c["relevance"] = cs.relevance;
        c["scores"] = scores_to_json(cs.scores);
        c["confidence"] = cs.confidence;
        r["clauses"].push_back(std::move(c));
    }
    r["aspects"] = ordered_json::array();
    for (const auto& agg : ra.aspects) {
        ordered_json a;
        a["aspect"] = to_string(agg.aspect);
        a["scores"] = scores_to_json(agg.scores);
        a["polarity_index"] = agg.polarity_index;
        a["label"] = to_string(agg.label);
        a["lean"] = to_string(agg.lean);
        a["clauses"] = agg.support;
        r["aspects"].push_back(std::move(a));
    }
    return r;
}

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
    throw std::runtime_error("invalid report at " + where + ": " + what);
}

void require(bool ok, const std::string& where, const std::string& what) {
    if (!ok) invalid(where, what);
}

void check_scores(const ordered_json& j, const std::string& where) {
    require(j.is_array() && j.size() == kNumSentiments, where, "scores must be a 3-array");
    double sum = 0.0;
    for (const auto& v : j) {
        require(v.is_number(), where, "scores must be numeric");
        double d = v.get<double>();
        require(d >= -1e-9 && d <= 1.0 + 1e-9, where, "score outside [0, 1]");
        sum += d;
    }
    require(std::fabs(sum - 1.0) <= 1e-6, where, "scores must sum to 1");
}

void check_index(const ordered_json& j, const std::string& where) {
    require(j.is_number(), where, "polarity_index must be numeric");
    double d = j.get<double>();
    require(d >= -1e-9 && d <= 1.0 + 1e-9, where, "polarity_index outside [0, 1]");
}

}  // namespace

void validate_report(const ordered_json& report) {
    require(report.is_object(), "$", "report must be an object");
    require(report.value("format", "") == "absa-report/1", "$.format",
            "format must be absa-report/1");
    for (const char* key : {"corpus", "config", "aspects", "reviews"})
        require(report.contains(key), std::string("$.") + key, "missing");

    const auto& corpus = report["corpus"];
    require(corpus.contains("reviews") && corpus["reviews"].is_number_unsigned(),
            "$.corpus.reviews", "missing review count");
    require(corpus["reviews"].get<std::size_t>() >= 1, "$.corpus.reviews", "empty corpus");

    const auto& config = report["config"];
    require(config.contains("keywords_k") && config["keywords_k"].is_number(),
            "$.config.keywords_k", "missing");
    const auto k = config["keywords_k"].get<std::size_t>();

    require(report["aspects"].is_array() && !report["aspects"].empty(), "$.aspects",
            "must be a non-empty array");
    std::size_t ai = 0;
    for (const auto& sec : report["aspects"]) {
        std::string where = "$.aspects[" + std::to_string(ai++) + "]";
        for (const char* key :
             {"aspect", "support", "label_distribution", "mean_polarity_index", "keywords",
              "examples", "explained", "summary"})
            require(sec.contains(key), where + "." + key, "missing");
        require(parse_aspect(sec["aspect"].get<std::string>()).has_value(), where + ".aspect",
                "unknown aspect name");
        require(sec["support"].is_number_unsigned() && sec["support"].get<std::size_t>() >= 1,
                where + ".support", "must be >= 1");

        const auto& dist = sec["label_distribution"];
        double sum = 0.0;
        for (const char* bucket : kBuckets) {
            require(dist.contains(bucket) && dist[bucket].is_number(),
                    where + ".label_distribution." + bucket, "missing");
            sum += dist[bucket].get<double>();
        }
        require(std::fabs(sum - 1.0) <= 1e-9, where + ".label_distribution",
                "must sum to 1 within 1e-9");
        check_index(sec["mean_polarity_index"], where + ".mean_polarity_index");

        for (const char* bucket : kBuckets) {
            const auto& list = sec["keywords"][bucket];
            require(list.is_array(), where + ".keywords." + bucket, "must be an array");
            require(list.size() <= k, where + ".keywords." + bucket,
                    "more than keywords_k entries");
            for (const auto& item : list)
                require(item.contains("term") && item.contains("score"),
                        where + ".keywords." + bucket, "entry needs term and score");
        }

        require(sec["examples"].is_array(), where + ".examples", "must be an array");
        for (const auto& ex : sec["examples"]) {
            for (const char* key : {"id", "text", "polarity_index", "label", "lean"})
                require(ex.contains(key), where + ".examples." + key, "missing");
            check_index(ex["polarity_index"], where + ".examples.polarity_index");
        }

        if (!sec["explained"].is_null()) {
            const auto& expl = sec["explained"];
            for (const char* key : {"id", "method", "target_class", "tokens", "attributions"})
                require(expl.contains(key), where + ".explained." + key, "missing");
            require(expl["attributions"].is_array(), where + ".explained.attributions",
                    "must be an array");
            const auto n_tokens = expl["tokens"].size();
            for (const auto& a : expl["attributions"]) {
                require(a.contains("token") && a.contains("position") && a.contains("weight"),
                        where + ".explained.attributions", "entry needs token/position/weight");
                auto pos = a["position"].get<long long>();
                require(pos >= 0 && static_cast<std::size_t>(pos) < n_tokens,
                        where + ".explained.attributions", "position out of range");
            }
        }
        require(sec["summary"].is_string() && !sec["summary"].get<std::string>().empty(),
                where + ".summary", "must be a non-empty string");
    }

    require(report["reviews"].is_array() && !report["reviews"].empty(), "$.reviews",
            "must be a non-empty array");
    require(report["reviews"].size() == corpus["reviews"].get<std::size_t>(), "$.reviews",
            "count disagrees with $.corpus.reviews");
    std::size_t ri = 0;
    for (const auto& r : report["reviews"]) {
        std::string where = "$.reviews[" + std::to_string(ri++) + "]";
        for (const char* key : {"id", "text", "variant", "overall", "clauses", "aspects"})
            require(r.contains(key), where + "." + key, "missing");
        check_scores(r["overall"]["scores"], where + ".overall.scores");
        check_index(r["overall"]["polarity_index"], where + ".overall.polarity_index");
        require(r["clauses"].is_array() && !r["clauses"].empty(), where + ".clauses",
                "must be non-empty");
        for (const auto& c : r["clauses"]) check_scores(c["scores"], where + ".clauses.scores");
        for (const auto& a : r["aspects"]) {
            check_scores(a["scores"], where + ".aspects.scores");
            check_index(a["polarity_index"], where + ".aspects.polarity_index");
        }
    }
}

namespace {

std::string escape_html(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Subword pieces carry the word-boundary marker; display it as a space.
std::string display_piece(std::string piece) {
    const std::string marker = "\xE2\x96\x81";
    std::string out;
    std::size_t i = 0;
    while (i < piece.size()) {
        if (piece.compare(i, marker.size(), marker) == 0) {
            out += ' ';
            i += marker.size();
        } else {
            out += piece[i++];
        }
    }
    return out;
}

/// Token strip with per-token background intensity from attribution weights.
std::string render_token_spans(const ordered_json& tokens, const ordered_json& attributions) {
    std::map<int, double> weight;
    double max_abs = 0.0;
    for (const auto& a : attributions) {
        weight[a["position"].get<int>()] = a["weight"].get<double>();
        max_abs = std::max(max_abs, std::fabs(a["weight"].get<double>()));
    }
    std::string out = "<p class=\"tokens\">";
    int pos = 0;
    for (const auto& t : tokens) {
        double w = weight.count(pos) ? weight[pos] : 0.0;
        std::string style;
        if (max_abs > 0.0 && w != 0.0) {
            double alpha = std::max(0.12, std::fabs(w) / max_abs);
            const char* rgb = w > 0.0 ? "26,152,80" : "215,48,39";
            style = " style=\"background:rgba(" + std::string(rgb) + "," + fmt("%.2f", alpha) +
                    ")\" title=\"" + fmt("%+.4f", w) + "\"";
        }
        out += "<span" + style + ">" + escape_html(display_piece(t.get<std::string>())) +
               "</span>";
        ++pos;
    }
    out += "</p>";
    return out;
}

const char* kPageStyle =
    "body{font-family:Georgia,serif;margin:2rem auto;max-width:60rem;padding:0 1rem;"
    "color:#222;background:#fdfdfc}h1,h2{font-family:Helvetica,Arial,sans-serif}"
    "h2{border-bottom:2px solid #ddd;padding-bottom:.3rem;margin-top:2.5rem}"
    "table{border-collapse:collapse;margin:.8rem 0}"
    "td,th{border:1px solid #ccc;padding:.3rem .7rem;text-align:left;font-size:.95rem}"
    "th{background:#f0efe9}.bar{display:flex;height:1.1rem;width:22rem;border:1px solid #bbb}"
    ".bar div{height:100%}.neg{background:#d73027}.neu{background:#c8c8c0}.pos{background:#1a9850}"
    ".tokens span{padding:.1rem 0;border-radius:2px;font-family:monospace;white-space:pre-wrap}"
    ".muted{color:#777;font-size:.9rem}.example{margin:.5rem 0;padding:.5rem .8rem;"
    "border-left:3px solid #ccc;background:#f7f6f2}.kw{font-family:monospace}";

}  // namespace

std::string render_report_html(const ordered_json& report) {
    std::string html = "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    html += "<title>Aspect sentiment report</title>\n<style>" + std::string(kPageStyle) +
            "</style>\n</head>\n<body>\n";
    html += "<h1>Aspect sentiment report</h1>\n";

    const auto& corpus = report["corpus"];
    html += "<p>" + std::to_string(corpus["reviews"].get<std::size_t>()) + " reviews";
    if (corpus.contains("variants")) {
        html += " (";
        bool first = true;
        for (auto it = corpus["variants"].begin(); it != corpus["variants"].end(); ++it) {
            if (!first) html += ", ";
            html += escape_html(it.key()) + " " + std::to_string(it.value().get<std::size_t>());
            first = false;
        }
        html += ")";
    }
    html += ". Backend <code>" + escape_html(report["config"]["backend"].get<std::string>()) +
            "</code>, seed " + std::to_string(report["config"]["seed"].get<std::uint64_t>()) +
            ".</p>\n";

    for (const auto& sec : report["aspects"]) {
        html += "<h2>" + escape_html(sec["aspect"].get<std::string>()) + "</h2>\n";
        html += "<p>" + escape_html(sec["summary"].get<std::string>()) + "</p>\n";

        const auto& dist = sec["label_distribution"];
        double neg = dist["Negative"].get<double>();
        double neu = dist["Neutral"].get<double>();
        double pos = dist["Positive"].get<double>();
        html += "<div class=\"bar\"><div class=\"neg\" style=\"width:" + fmt("%.2f", 100 * neg) +
                "%\"></div><div class=\"neu\" style=\"width:" + fmt("%.2f", 100 * neu) +
                "%\"></div><div class=\"pos\" style=\"width:" + fmt("%.2f", 100 * pos) +
                "%\"></div></div>\n";
        html += "<p class=\"muted\">Negative " + fmt("%.1f", 100 * neg) + "% / Neutral " +
                fmt("%.1f", 100 * neu) + "% / Positive " + fmt("%.1f", 100 * pos) + "%</p>\n";

        html += "<table><tr><th>Bucket</th><th>Keywords</th></tr>\n";
        for (const char* bucket : kBuckets) {
            html += "<tr><td>" + std::string(bucket) + "</td><td class=\"kw\">";
            bool first = true;
            for (const auto& item : sec["keywords"][bucket]) {
                if (!first) html += ", ";
                html += escape_html(item["term"].get<std::string>());
                first = false;
            }
            html += "</td></tr>\n";
        }
        html += "</table>\n";

        for (const auto& ex : sec["examples"]) {
            html += "<div class=\"example\"><strong>" + escape_html(ex["label"].get<std::string>()) +
                    "</strong> (index " + fmt("%.3f", ex["polarity_index"].get<double>()) +
                    ", review " + escape_html(ex["id"].get<std::string>()) + ")<br>" +
                    escape_html(ex["text"].get<std::string>()) + "</div>\n";
        }

        if (!sec["explained"].is_null()) {
            const auto& expl = sec["explained"];
            html += "<h3>Why review " + escape_html(expl["id"].get<std::string>()) + " reads " +
                    escape_html(expl["target_class"].get<std::string>()) + "</h3>\n";
            html += render_token_spans(expl["tokens"], expl["attributions"]);
            html += "<p class=\"muted\">LIME surrogate fit R² " +
                    fmt("%.3f", expl["fidelity_r2"].get<double>()) + " over " +
                    std::to_string(expl["n_samples"].get<int>()) + " samples.</p>\n";
        }
    }
    html += "</body>\n</html>\n";
    return html;
}

std::string render_explanation_html(const ordered_json& explanation) {
    std::string method = explanation["method"].get<std::string>();
    std::string html = "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    html += "<title>Explanation (" + escape_html(method) + ")</title>\n<style>" +
            std::string(kPageStyle) + "</style>\n</head>\n<body>\n";
    html += "<h1>" + escape_html(method) + " explanation</h1>\n";
    html += "<p>Target class <strong>" +
            escape_html(explanation["target_class"].get<std::string>()) + "</strong></p>\n";
    html += render_token_spans(explanation["tokens"], explanation["attributions"]);
    if (method == "lime") {
        html += "<p class=\"muted\">Surrogate fit R² " +
                fmt("%.3f", explanation["fidelity_r2"].get<double>()) + ", " +
                std::to_string(explanation["n_samples"].get<int>()) + " samples, kernel width " +
                fmt("%.2f", explanation["kernel_width"].get<double>()) + ".</p>\n";
    } else {
        html += "<p class=\"muted\">Base value " +
                fmt("%.4f", explanation["base_value"].get<double>()) + ", model output " +
                fmt("%.4f", explanation["fx"].get<double>()) + ", additivity residual " +
                fmt("%.2e", explanation["additivity_residual"].get<double>()) + ".</p>\n";
    }
    html += "<table><tr><th>Token</th><th>Position</th><th>Weight</th></tr>\n";
    for (const auto& a : explanation["attributions"]) {
        html += "<tr><td class=\"kw\">" + escape_html(a["token"].get<std::string>()) + "</td><td>" +
                std::to_string(a["position"].get<int>()) + "</td><td>" +
                fmt("%+.6f", a["weight"].get<double>()) + "</td></tr>\n";
    }
    html += "</table>\n</body>\n</html>\n";
    return html;
}

}  // namespace absa
