// Release gate: ten numbered end-to-end checks, one pass/fail line each.
// Run with no arguments for all ten, or pass criterion numbers to run a
// subset (the ctest registration runs them one by one).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "absa/aggregate.hpp"
#include "absa/classify.hpp"
#include "absa/config.hpp"
#include "absa/corpus.hpp"
#include "absa/eval.hpp"
#include "absa/explain.hpp"
#include "absa/lexicon.hpp"
#include "absa/pipeline.hpp"
#include "absa/report.hpp"
#include "absa/rng.hpp"
#include "absa/scorer_client.hpp"
#include "absa/textprep.hpp"
#include "absa/tokenize.hpp"
#include "support.hpp"

using namespace absa;
using testsupport::WordValueScorer;
using testsupport::data_path;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const std::vector<std::string> kWords8 = {"alpha", "bravo", "charlie", "delta",
                                          "echo",  "fox",   "golf",    "hotel"};
const std::vector<double> kWeights8 = {0.05, -0.02, 0.03, 0.05, 0.0, -0.04, 0.03, 0.03};
constexpr double kBias8 = 0.3;

std::string join(const std::vector<std::string>& ws) {
    std::string out;
    for (const auto& w : ws) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// ---- criterion 1: exact Shapley axioms on an additive 8-token scorer ----

void criterion_1() {
    auto vocab = testsupport::word_vocab(kWords8);
    WordValueScorer scorer(kWords8, kWeights8, kBias8);
    auto e = shap_exact(scorer, vocab, join(kWords8), Sentiment::Positive);
    require(e.phi.size() == 8, "expected 8 attributions");

    for (std::size_t i = 0; i < 8; ++i)
        require(std::fabs(e.phi[i].weight - kWeights8[i]) <= 1e-9,
                "phi[" + std::to_string(i) + "] = " + fmt(e.phi[i].weight) + " differs from w = " +
                    fmt(kWeights8[i]));

    double sum = 0.0;
    for (const auto& p : e.phi) sum += p.weight;
    require(std::fabs(e.base_value + sum - e.fx) <= 1e-9,
            "efficiency residual " + fmt(e.base_value + sum - e.fx));

    // golf and hotel carry the same weight; echo carries none
    require(std::fabs(e.phi[6].weight - e.phi[7].weight) <= 1e-9, "symmetry violated");
    require(std::fabs(e.phi[4].weight) <= 1e-9, "dummy token has nonzero phi");
}

// ---- criterion 2: kernel estimate converges to exact ----

void criterion_2() {
    auto vocab = testsupport::word_vocab(kWords8);
    WordValueScorer scorer(kWords8, kWeights8, kBias8);
    auto text = join(kWords8);
    auto exact = shap_exact(scorer, vocab, text, Sentiment::Positive);

    auto gap_at = [&](int n) {
        ShapKernelOptions opts;
        opts.n_samples = n;
        opts.seed = 2024;
        auto approx = shap_kernel(scorer, vocab, text, Sentiment::Positive, opts);
        double gap = 0.0;
        for (std::size_t i = 0; i < exact.phi.size(); ++i)
            gap = std::max(gap, std::fabs(approx.phi[i].weight - exact.phi[i].weight));
        return gap;
    };

    double g4000 = gap_at(4000);
    require(g4000 <= 0.02, "gap at 4000 samples is " + fmt(g4000));
    double g500 = gap_at(500);
    double g8000 = gap_at(8000);
    require(g8000 <= g500, "gap grew with samples: " + fmt(g500) + " -> " + fmt(g8000));
}

// ---- criterion 3: LIME recovers a keep-linear scorer ----

void criterion_3() {
    std::vector<std::string> words = {"alpha", "bravo", "charlie", "delta", "echo", "fox"};
    std::vector<double> w = {0.20, -0.15, 0.12, 0.001, 0.25, -0.11};
    auto vocab = testsupport::word_vocab(words);
    WordValueScorer scorer(words, w, 0.35);

    LimeOptions opts;
    opts.n_samples = 4000;  // all 64 keep-vectors appear many times over
    opts.seed = 11;
    opts.top_k = static_cast<int>(words.size());
    auto e = lime_explain(scorer, vocab, join(words), Sentiment::Positive, opts);
    require(e.attributions.size() == words.size(), "expected one weight per token");

    std::map<int, double> got;
    for (const auto& a : e.attributions) got[a.position] = a.weight;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double est = got.at(static_cast<int>(i));
        if (std::fabs(w[i]) > 0.1) {
            double rel = std::fabs(est - w[i]) / std::fabs(w[i]);
            require(rel <= 0.01, "coefficient " + std::to_string(i) + " off by " + fmt(rel * 100) +
                                     "% (est " + fmt(est) + ", true " + fmt(w[i]) + ")");
            require(est * w[i] > 0.0, "sign flipped on coefficient " + std::to_string(i));
        }
    }

    testsupport::ConstantScorer flat(0.4);
    auto c = lime_explain(flat, vocab, join(words), Sentiment::Positive, opts);
    for (const auto& a : c.attributions)
        require(std::fabs(a.weight) <= 1e-6,
                "constant scorer produced weight " + fmt(a.weight));
}

// ---- criterion 4: softmax and aggregation properties, 1000 random draws ----

void criterion_4() {
    SplitMix64 rng(777);

    auto random_logits = [&]() {
        Logits z;
        z.neg = 20.0 * rng.next_double() - 10.0;
        z.neu = 20.0 * rng.next_double() - 10.0;
        z.pos = 20.0 * rng.next_double() - 10.0;
        return z;
    };

    for (int trial = 0; trial < 1000; ++trial) {
        auto z = random_logits();
        auto p = softmax(z);
        require(std::fabs(p.sum() - 1.0) <= 1e-12, "softmax sum off simplex");
        require(p.neg >= 0 && p.neu >= 0 && p.pos >= 0, "negative probability");

        double shift = 30.0 * rng.next_double() - 15.0;
        Logits zs;
        zs.neg = z.neg + shift;
        zs.neu = z.neu + shift;
        zs.pos = z.pos + shift;
        auto q = softmax(zs);
        require(std::fabs(p.neg - q.neg) <= 1e-12 && std::fabs(p.neu - q.neu) <= 1e-12 &&
                    std::fabs(p.pos - q.pos) <= 1e-12,
                "softmax shift variance at trial " + std::to_string(trial));
    }

    auto random_simplex = [&]() {
        double a = rng.next_double() + 1e-9;
        double b = rng.next_double() + 1e-9;
        double c = rng.next_double() + 1e-9;
        SentimentScores s;
        s.neg = a / (a + b + c);
        s.neu = b / (a + b + c);
        s.pos = c / (a + b + c);
        return s;
    };
    auto make_clause = [&](const SentimentScores& s, double relevance) {
        ClauseSentiment c;
        c.scores = s;
        c.aspect = Aspect::DigitalBanking;
        c.relevance = relevance;
        c.confidence = std::max({s.neg, s.neu, s.pos});
        return c;
    };

    for (int trial = 0; trial < 1000; ++trial) {
        // identity on a single clause is bit-exact
        auto lone = make_clause(random_simplex(), rng.next_double());
        auto one = aggregate_clauses({lone});
        require(one.scores.neg == lone.scores.neg && one.scores.neu == lone.scores.neu &&
                    one.scores.pos == lone.scores.pos,
                "single-clause aggregation is not the identity");

        auto n = static_cast<std::size_t>(2 + rng.next_below(5));
        std::vector<ClauseSentiment> clauses;
        for (std::size_t i = 0; i < n; ++i)
            clauses.push_back(make_clause(random_simplex(), 0.05 + 0.9 * rng.next_double()));
        auto agg = aggregate_clauses(clauses);

        for (int k = 0; k < kNumSentiments; ++k) {
            double lo = 1.0, hi = 0.0;
            for (const auto& c : clauses) {
                lo = std::min(lo, c.scores[k]);
                hi = std::max(hi, c.scores[k]);
            }
            require(agg.scores[k] >= lo - 1e-12 && agg.scores[k] <= hi + 1e-12,
                    "weighted mean escaped the clause envelope");
        }

        auto reversed = clauses;
        std::reverse(reversed.begin(), reversed.end());
        auto agg2 = aggregate_clauses(reversed);
        for (int k = 0; k < kNumSentiments; ++k)
            require(std::fabs(agg.scores[k] - agg2.scores[k]) <= 1e-12,
                    "clause order changed the aggregate");

        auto scaled = clauses;
        double factor = 0.25 + 2.0 * rng.next_double();
        for (auto& c : scaled) c.relevance *= factor;
        auto agg3 = aggregate_clauses(scaled);
        for (int k = 0; k < kNumSentiments; ++k)
            require(std::fabs(agg.scores[k] - agg3.scores[k]) <= 1e-12,
                    "relevance rescaling changed the aggregate");
    }
}

// ---- criterion 5: the 0.56 banding anchor ----

void criterion_5() {
    auto il = label_from_index(0.56);
    require(il.label == Sentiment::Neutral,
            "0.56 labeled " + to_string(il.label) + ", expected Neutral");
    require(il.lean == Lean::Positive, "0.56 leans " + to_string(il.lean) + ", expected Positive");
}

// ---- criterion 6: lexicon correction identity, closed form, direction ----

void criterion_6() {
    SentimentScores s;
    s.neg = 0.17;
    s.neu = 0.33;
    s.pos = 0.50;
    auto id = apply_correction(s, 0.0, 1.0);
    require(id.neg == s.neg && id.neu == s.neu && id.pos == s.pos,
            "correction at L = 0 is not the exact identity");

    SentimentScores uniform;
    uniform.neg = uniform.neu = uniform.pos = 1.0 / 3.0;
    auto c = apply_correction(uniform, -1.0, 1.0);
    require(std::fabs(c.neg - 0.6652) <= 1e-4 && std::fabs(c.neu - 0.2447) <= 1e-4 &&
                std::fabs(c.pos - 0.0900) <= 1e-4,
            "closed form mismatch: (" + fmt(c.neg) + ", " + fmt(c.neu) + ", " + fmt(c.pos) + ")");

    // direction on the bundled Singlish slice, NB backend
    auto train = load_corpus(data_path("corpus/banking_600.jsonl"));
    auto vocab = std::make_shared<SubwordVocab>(load_vocab(data_path("models/vocab.txt")));
    auto model = train_nb(train, *vocab, 1.0);
    NBBackend backend(model, vocab);
    auto lexicon = load_lexicon(data_path("lexicon/singlish.tsv"));
    auto slice = load_corpus(data_path("corpus/singlish_eval.jsonl"));

    auto rows = compare_backends({{&backend, false}, {&backend, true}}, slice, lexicon, 1.0);
    require(rows.size() == 2 && rows[0].error.empty() && rows[1].error.empty(),
            "comparison rows incomplete");
    double off = rows[0].accuracy, on = rows[1].accuracy;
    require(on >= off, "lexicon hurt accuracy: on " + fmt(on) + " < off " + fmt(off));
}

// ---- criterion 7: tokenizer round trip and deterministic retraining ----

void criterion_7() {
    auto lines = read_lines(data_path("corpus/roundtrip_lines.txt"));
    require(lines.size() == 1000, "expected 1000 bundled lines, got " +
                                      std::to_string(lines.size()));

    auto vocab = train_subword(lines, 800, 1.0);
    std::size_t ok = 0;
    for (const auto& line : lines) {
        auto tok = encode(vocab, line);
        for (int id : tok.ids)
            require(id != vocab.unk_id(), "unk at full coverage in: " + line);
        if (decode(vocab, tok.tokens) == line) ++ok;
    }
    require(ok == lines.size(),
            "round trip held for " + std::to_string(ok) + "/1000 lines");

    auto again = train_subword(lines, 800, 1.0);
    auto dir = std::filesystem::temp_directory_path() / "absa_acceptance";
    std::filesystem::create_directories(dir);
    save_vocab(vocab, dir / "a.txt");
    save_vocab(again, dir / "b.txt");
    std::ifstream fa(dir / "a.txt", std::ios::binary), fb(dir / "b.txt", std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    require(sa.str() == sb.str() && !sa.str().empty(), "retraining is not byte-identical");
    std::filesystem::remove_all(dir);
}

// ---- criterion 8: baselines clear majority class by 15 points ----

void criterion_8() {
    auto ds = load_corpus(data_path("corpus/banking_600.jsonl"));
    require(ds.size() == 600, "bundled corpus must hold 600 reviews");
    auto vocab = std::make_shared<SubwordVocab>(load_vocab(data_path("models/vocab.txt")));
    auto split = stratified_split(ds, 0.7, 0.1, 0.2, 42);

    std::array<std::size_t, kNumSentiments> counts{};
    for (const auto& r : split.test.reviews()) counts[static_cast<int>(*r.gold_sentiment)]++;
    double majority = static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
                      static_cast<double>(split.test.size());

    auto accuracy_of = [&](const ScorerBackend& backend) {
        std::size_t hit = 0;
        for (const auto& r : split.test.reviews())
            if (predict_sentiment(backend, r.raw_text, nullptr, 0.0) == *r.gold_sentiment) ++hit;
        return static_cast<double>(hit) / static_cast<double>(split.test.size());
    };

    auto nb_model = train_nb(split.train, *vocab, 1.0);
    NBBackend nb(nb_model, vocab);
    double nb_acc = accuracy_of(nb);
    require(nb_acc >= majority + 0.15, "nb " + fmt(nb_acc) + " vs majority " + fmt(majority));

    auto lin_model = train_linear(split.train, *vocab, 0.1, 20, 1e-4, 42, 16);
    LinearBackend linear(lin_model, vocab);
    double lin_acc = accuracy_of(linear);
    require(lin_acc >= majority + 0.15,
            "linear " + fmt(lin_acc) + " vs majority " + fmt(majority));

    // analytic gradient against central differences
    std::vector<std::vector<std::size_t>> examples;
    std::vector<int> labels;
    for (const auto& r : split.dev.reviews()) {
        examples.push_back(lin_model.features.featurize(r.raw_text, *vocab));
        labels.push_back(static_cast<int>(*r.gold_sentiment));
    }
    LinearModel grad = lin_model;
    linear_gradient(lin_model, examples, labels, 1e-4, &grad);
    const double h = 1e-5;
    SplitMix64 rng(5);
    for (int probe = 0; probe < 10; ++probe) {
        auto fi = static_cast<std::size_t>(rng.next_below(lin_model.weights.size()));
        auto ci = static_cast<int>(rng.next_below(kNumSentiments));
        auto perturbed = lin_model;
        perturbed.weights[fi][ci] += h;
        double up = linear_loss(perturbed, examples, labels, 1e-4);
        perturbed.weights[fi][ci] -= 2 * h;
        double down = linear_loss(perturbed, examples, labels, 1e-4);
        double fd = (up - down) / (2 * h);
        double g = grad.weights[fi][ci];
        double rel = std::fabs(g - fd) / std::max({std::fabs(g), std::fabs(fd), 1e-8});
        require(rel <= 1e-4, "gradient check failed: relative error " + fmt(rel));
    }
}

// ---- criterion 9: end-to-end report validity and byte determinism ----

void criterion_9() {
    auto cli = testsupport::cli_path();
    require(!cli.empty() && std::filesystem::exists(cli), "analysis binary not found");

    auto base = std::filesystem::temp_directory_path() / "absa_acceptance_analyze";
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);

    auto run = [&](const std::string& name, int workers) {
        auto out = base / name;
        std::string cmd = "\"" + cli + "\" --config \"" + data_path("default.conf") + "\"" +
                          " --set pipeline.workers=" + std::to_string(workers) +
                          " analyze \"" + data_path("corpus/banking_600.jsonl") + "\"" +
                          " --out \"" + out.string() + "\" > /dev/null 2>&1";
        require(std::system(cmd.c_str()) == 0, "analyze run failed: " + cmd);
        std::ifstream in(out / "report.json", std::ios::binary);
        require(in.good(), "report.json missing under " + out.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    auto first = run("a", 1);
    auto report = nlohmann::ordered_json::parse(first);
    validate_report(report);

    std::vector<std::string> seen;
    for (const auto& sec : report["aspects"]) seen.push_back(sec["aspect"].get<std::string>());
    for (const char* name : {"CustomerSupport", "LoanCredit", "DigitalBanking",
                             "TransactionsPayments", "TrustSecurity"})
        require(std::find(seen.begin(), seen.end(), name) != seen.end(),
                std::string("aspect missing from report: ") + name);

    for (const auto& sec : report["aspects"]) {
        double sum = 0.0;
        for (const char* b : {"Negative", "Neutral", "Positive"})
            sum += sec["label_distribution"][b].get<double>();
        require(std::fabs(sum - 1.0) <= 1e-9, "label distribution sum " + fmt(sum));
    }

    require(run("b", 1) == first, "rerun changed report bytes");
    require(run("c", 4) == first, "worker count changed report bytes");
    std::filesystem::remove_all(base);
}

// ---- criterion 10: external adapter pass-through and failure modes ----

void criterion_10() {
    auto stub = testsupport::stub_scorer_path();
    require(!stub.empty() && std::filesystem::exists(stub), "stub scorer binary not found");

    AdapterEndpoint echo;
    echo.argv = {stub};
    auto s = external_score(echo, "probs=0.2,0.3,0.5");
    require(s.neg == 0.2 && s.neu == 0.3 && s.pos == 0.5,
            "echo not exact: (" + fmt(s.neg) + ", " + fmt(s.neu) + ", " + fmt(s.pos) + ")");

    AdapterEndpoint bad;
    bad.argv = {stub, "--invalid"};
    bool rejected = false;
    try {
        external_score(bad, "x");
    } catch (const std::exception& e) {
        rejected = std::string(e.what()).find("non-simplex") != std::string::npos;
    }
    require(rejected, "non-simplex response was not rejected as such");

    AdapterEndpoint slow;
    slow.argv = {stub, "--delay-ms", "5000"};
    slow.timeout_seconds = 0.4;
    bool timed_out = false;
    try {
        external_score(slow, "x");
    } catch (const std::exception& e) {
        std::string what = e.what();
        timed_out = what.find("timeout") != std::string::npos &&
                    what.find(stub) != std::string::npos;
    }
    require(timed_out, "timeout did not name the endpoint");
}

struct Criterion {
    int number;
    const char* label;
    std::function<void()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "exact Shapley axioms (additive scorer, M = 8)", criterion_1},
    {2, "kernel Shapley convergence to exact", criterion_2},
    {3, "LIME linear-coefficient recovery", criterion_3},
    {4, "softmax and aggregation properties (1000 draws)", criterion_4},
    {5, "polarity 0.56 banding anchor", criterion_5},
    {6, "lexicon correction: identity, closed form, Singlish slice", criterion_6},
    {7, "tokenizer round trip and retrain determinism", criterion_7},
    {8, "baselines beat majority class; gradient check", criterion_8},
    {9, "analyze report validity and byte determinism", criterion_9},
    {10, "external adapter pass-through and failure modes", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
            continue;
        try {
            c.run();
            std::printf("criterion %2d PASS  %s\n", c.number, c.label);
        } catch (const std::exception& e) {
            std::printf("criterion %2d FAIL  %s: %s\n", c.number, c.label, e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
