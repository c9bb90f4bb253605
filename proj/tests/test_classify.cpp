#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "absa/classify.hpp"
#include "absa/corpus.hpp"
#include "absa/eval.hpp"
#include "absa/rng.hpp"
#include "support.hpp"

using namespace absa;
using testsupport::make_review;

namespace {

Logits logits(double a, double b, double c) {
    Logits z;
    z.neg = a;
    z.neu = b;
    z.pos = c;
    return z;
}

Dataset tiny_dataset() {
    std::vector<Review> reviews;
    const char* positive[] = {"good service", "great service", "good app", "great staff",
                              "good experience", "great branch"};
    const char* negative[] = {"bad service", "awful service", "bad app", "awful staff",
                              "bad experience", "awful branch"};
    const char* neutral[] = {"average service", "normal service", "average app", "normal staff",
                             "average experience", "normal branch"};
    int n = 0;
    for (auto t : positive) reviews.push_back(make_review("p" + std::to_string(n++), t, Sentiment::Positive));
    for (auto t : negative) reviews.push_back(make_review("n" + std::to_string(n++), t, Sentiment::Negative));
    for (auto t : neutral) reviews.push_back(make_review("u" + std::to_string(n++), t, Sentiment::Neutral));
    return Dataset(std::move(reviews));
}

std::shared_ptr<const SubwordVocab> tiny_vocab(const Dataset& ds) {
    std::vector<std::string> texts;
    for (const auto& r : ds.reviews()) texts.push_back(r.raw_text);
    return std::make_shared<SubwordVocab>(train_subword(texts, 256, 1.0));
}

}  // namespace

TEST_CASE("softmax of zeros is uniform") {
    auto s = softmax(logits(0, 0, 0));
    CHECK(s.neg == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(s.neu == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(s.pos == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("softmax is shift invariant") {
    auto a = softmax(logits(1, 2, 3));
    auto b = softmax(logits(11, 12, 13));
    CHECK(std::fabs(a.neg - b.neg) <= 1e-12);
    CHECK(std::fabs(a.neu - b.neu) <= 1e-12);
    CHECK(std::fabs(a.pos - b.pos) <= 1e-12);
}

TEST_CASE("softmax closed form (0, ln2, ln4)") {
    auto s = softmax(logits(0.0, std::log(2.0), std::log(4.0)));
    CHECK(s.neg == doctest::Approx(1.0 / 7).epsilon(1e-12));
    CHECK(s.neu == doctest::Approx(2.0 / 7).epsilon(1e-12));
    CHECK(s.pos == doctest::Approx(4.0 / 7).epsilon(1e-12));
}

TEST_CASE("softmax survives extreme logits") {
    auto s = softmax(logits(-1000, 0, 1000));
    CHECK(std::isfinite(s.neg));
    CHECK(s.pos == doctest::Approx(1.0));
    CHECK(std::fabs(s.sum() - 1.0) <= 1e-12);
}

TEST_CASE("raising one logit strictly raises its probability") {
    auto lo = softmax(logits(0.1, 0.2, 0.3));
    auto hi = softmax(logits(0.1, 0.2, 0.9));
    CHECK(hi.pos > lo.pos);
    CHECK(hi.neg < lo.neg);
    CHECK(hi.neu < lo.neu);
}

TEST_CASE("nb learns the toy polarity split") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    auto model = train_nb(ds, *vocab, 1.0);
    NBBackend backend(model, vocab);

    CHECK(predict_sentiment(backend, "good branch", nullptr, 0.0) == Sentiment::Positive);
    CHECK(predict_sentiment(backend, "awful app", nullptr, 0.0) == Sentiment::Negative);
    CHECK(predict_sentiment(backend, "normal experience", nullptr, 0.0) == Sentiment::Neutral);
}

TEST_CASE("heavy smoothing pushes nb toward the class priors") {
    std::vector<Review> reviews;
    // priors 2/4 positive, 1/4 neutral, 1/4 negative
    reviews.push_back(make_review("a", "good", Sentiment::Positive));
    reviews.push_back(make_review("b", "fine good", Sentiment::Positive));
    reviews.push_back(make_review("c", "bad", Sentiment::Negative));
    reviews.push_back(make_review("d", "meh", Sentiment::Neutral));
    Dataset ds(std::move(reviews));
    auto vocab = tiny_vocab(ds);
    auto model = train_nb(ds, *vocab, 1e7);
    NBBackend backend(model, vocab);
    auto s = backend.score("bad");
    CHECK(s.pos == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(s.neg == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(s.neu == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("nb retraining is exactly reproducible") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    auto a = train_nb(ds, *vocab, 1.0);
    auto b = train_nb(ds, *vocab, 1.0);
    CHECK(a.log_prior == b.log_prior);
    REQUIRE(a.feature_log_prob.size() == b.feature_log_prob.size());
    for (std::size_t i = 0; i < a.feature_log_prob.size(); ++i)
        CHECK(a.feature_log_prob[i] == b.feature_log_prob[i]);
}

TEST_CASE("nb requires every class in training") {
    std::vector<Review> reviews;
    reviews.push_back(make_review("a", "good", Sentiment::Positive));
    reviews.push_back(make_review("b", "bad", Sentiment::Negative));
    Dataset ds(std::move(reviews));
    auto vocab = tiny_vocab(ds);
    CHECK_THROWS(train_nb(ds, *vocab, 1.0));
}

TEST_CASE("empty text scores the class priors") {
    std::vector<Review> reviews;
    reviews.push_back(make_review("a", "good stuff", Sentiment::Positive));
    reviews.push_back(make_review("b", "good things", Sentiment::Positive));
    reviews.push_back(make_review("c", "bad stuff", Sentiment::Negative));
    reviews.push_back(make_review("d", "meh stuff", Sentiment::Neutral));
    Dataset ds(std::move(reviews));
    auto vocab = tiny_vocab(ds);
    auto model = train_nb(ds, *vocab, 1.0);
    NBBackend backend(model, vocab);
    auto s = backend.score("");
    CHECK(s.pos == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.neg == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(s.neu == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("linear model separates a separable toy set") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    LinearTrainInfo info;
    auto model = train_linear(ds, *vocab, 0.5, 60, 1e-5, 7, 4, &info);
    LinearBackend backend(model, vocab);
    int correct = 0;
    for (const auto& r : ds.reviews())
        if (predict_sentiment(backend, r.raw_text, nullptr, 0.0) == *r.gold_sentiment) ++correct;
    CHECK(correct == static_cast<int>(ds.size()));
}

TEST_CASE("linear training loss is non-increasing within tolerance") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    LinearTrainInfo info;
    train_linear(ds, *vocab, 0.1, 30, 1e-4, 7, 4, &info);
    REQUIRE(info.epoch_loss.size() == 30);
    for (std::size_t i = 1; i < info.epoch_loss.size(); ++i)
        CHECK(info.epoch_loss[i] <= info.epoch_loss[i - 1] + 1e-6);
}

TEST_CASE("linear retraining with one seed is bit-identical") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    auto a = train_linear(ds, *vocab, 0.2, 10, 1e-4, 42, 4);
    auto b = train_linear(ds, *vocab, 0.2, 10, 1e-4, 42, 4);
    CHECK(a.bias == b.bias);
    REQUIRE(a.weights.size() == b.weights.size());
    for (std::size_t i = 0; i < a.weights.size(); ++i) CHECK(a.weights[i] == b.weights[i]);
}

TEST_CASE("analytic gradient matches central finite differences") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    auto model = train_linear(ds, *vocab, 0.1, 2, 1e-3, 3, 4);

    std::vector<std::vector<std::size_t>> examples;
    std::vector<int> labels;
    for (const auto& r : ds.reviews()) {
        examples.push_back(model.features.featurize(r.raw_text, *vocab));
        labels.push_back(static_cast<int>(*r.gold_sentiment));
    }

    LinearModel grad = model;
    linear_gradient(model, examples, labels, 1e-3, &grad);

    const double h = 1e-5;
    SplitMix64 rng(99);
    double worst = 0.0;
    for (int probe = 0; probe < 10; ++probe) {
        auto fi = static_cast<std::size_t>(rng.next_below(model.weights.size()));
        auto ci = static_cast<int>(rng.next_below(kNumSentiments));
        auto perturbed = model;
        perturbed.weights[fi][ci] = model.weights[fi][ci] + h;
        double up = linear_loss(perturbed, examples, labels, 1e-3);
        perturbed.weights[fi][ci] = model.weights[fi][ci] - h;
        double down = linear_loss(perturbed, examples, labels, 1e-3);
        double fd = (up - down) / (2 * h);
        double g = grad.weights[fi][ci];
        double rel = std::fabs(g - fd) / std::max({std::fabs(g), std::fabs(fd), 1e-8});
        worst = std::max(worst, rel);
    }
    for (int ci = 0; ci < kNumSentiments; ++ci) {
        auto perturbed = model;
        perturbed.bias[ci] = model.bias[ci] + h;
        double up = linear_loss(perturbed, examples, labels, 1e-3);
        perturbed.bias[ci] = model.bias[ci] - h;
        double down = linear_loss(perturbed, examples, labels, 1e-3);
        double fd = (up - down) / (2 * h);
        double g = grad.bias[ci];
        double rel = std::fabs(g - fd) / std::max({std::fabs(g), std::fabs(fd), 1e-8});
        worst = std::max(worst, rel);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("divergent learning rate aborts with a diagnostic") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    CHECK_THROWS(train_linear(ds, *vocab, 1e6, 50, 0.1, 7, 4));
}

TEST_CASE("loan approval delays scores negative under the bundled baseline") {
    auto ds = load_corpus(testsupport::data_path("corpus/banking_600.jsonl"));
    auto vocab = std::make_shared<SubwordVocab>(
        load_vocab(testsupport::data_path("models/vocab.txt")));
    auto model = train_nb(ds, *vocab, 1.0);
    NBBackend backend(model, vocab);
    CHECK(predict_sentiment(backend, "loan approval delays", nullptr, 0.0) == Sentiment::Negative);
}

TEST_CASE("feature space ignores unseen ngrams at inference") {
    auto ds = tiny_dataset();
    auto vocab = tiny_vocab(ds);
    auto space = build_feature_space({"good service"}, *vocab);
    auto feats = space.featurize("completely unrelated words", *vocab);
    CHECK(feats.empty());
}
