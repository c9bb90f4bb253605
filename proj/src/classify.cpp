#include "absa/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "absa/corpus.hpp"
#include "absa/rng.hpp"
#include "absa/textprep.hpp"

namespace absa {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double_tok(const std::string& tok, const std::string& context) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw std::runtime_error(context + ": bad number \"" + tok + "\"");
    return v;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

SentimentScores softmax(const Logits& z) {
    double m = std::max(z.neg, std::max(z.neu, z.pos));
    double e0 = std::exp(z.neg - m);
    double e1 = std::exp(z.neu - m);
    double e2 = std::exp(z.pos - m);
    double s = e0 + e1 + e2;
    return SentimentScores{e0 / s, e1 / s, e2 / s};
}

void FeatureSpace::insert(const FeatureKey& key) {
    index_.emplace(key, 0);
}

void FeatureSpace::freeze() {
    keys_.clear();
    keys_.reserve(index_.size());
    std::size_t next = 0;
    for (auto& [key, idx] : index_) {
        idx = next++;
        keys_.push_back(key);
    }
}

std::vector<std::size_t> FeatureSpace::featurize_ids(const std::vector<int>& ids) const {
    std::set<std::size_t> present;
    auto lookup = [&](const FeatureKey& key) {
        auto it = index_.find(key);
        if (it != index_.end()) present.insert(it->second);
    };
    for (std::size_t i = 0; i < ids.size(); ++i) {
        lookup({ids[i], -1});
        if (i + 1 < ids.size()) lookup({ids[i], ids[i + 1]});
    }
    return std::vector<std::size_t>(present.begin(), present.end());
}

std::vector<std::size_t> FeatureSpace::featurize(const std::string& text,
                                                 const SubwordVocab& vocab) const {
    return featurize_ids(encode(vocab, normalize(text).text).ids);
}

FeatureSpace build_feature_space(const std::vector<std::string>& texts,
                                 const SubwordVocab& vocab) {
    FeatureSpace fs;
    for (const auto& text : texts) {
        auto ids = encode(vocab, normalize(text).text).ids;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            fs.insert({ids[i], -1});
            if (i + 1 < ids.size()) fs.insert({ids[i], ids[i + 1]});
        }
    }
    fs.freeze();
    return fs;
}

namespace {

struct LabeledFeatures {
    std::vector<std::vector<std::size_t>> examples;
    std::vector<int> labels;
    FeatureSpace features;
};

LabeledFeatures featurize_dataset(const Dataset& train, const SubwordVocab& vocab) {
    LabeledFeatures out;
    std::vector<std::string> texts;
    for (const auto& r : train.reviews())
        if (r.gold_sentiment) texts.push_back(r.raw_text);
    out.features = build_feature_space(texts, vocab);
    for (const auto& r : train.reviews()) {
        if (!r.gold_sentiment) continue;
        out.examples.push_back(out.features.featurize(r.raw_text, vocab));
        out.labels.push_back(static_cast<int>(*r.gold_sentiment));
    }
    return out;
}

void require_all_classes(const std::vector<int>& labels) {
    std::array<std::size_t, kNumSentiments> counts{};
    for (int y : labels) counts[static_cast<std::size_t>(y)]++;
    for (int c = 0; c < kNumSentiments; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw std::runtime_error("training data has no examples labeled " +
                                     to_string(static_cast<Sentiment>(c)));
    }
}

SentimentScores scores_from_logits(const std::array<double, kNumSentiments>& z) {
    return softmax(Logits{z[0], z[1], z[2]});
}

}  // namespace

NBModel train_nb(const Dataset& train, const SubwordVocab& vocab, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("smoothing alpha must be > 0");
    auto data = featurize_dataset(train, vocab);
    require_all_classes(data.labels);

    NBModel model;
    model.alpha = alpha;
    model.features = std::move(data.features);
    const std::size_t F = model.features.size();
    const std::size_t N = data.labels.size();

    std::array<std::size_t, kNumSentiments> class_count{};
    std::vector<std::array<std::size_t, kNumSentiments>> presence(F, {0, 0, 0});
    std::array<std::size_t, kNumSentiments> class_total{};
    for (std::size_t i = 0; i < N; ++i) {
        int c = data.labels[i];
        class_count[static_cast<std::size_t>(c)]++;
        for (std::size_t f : data.examples[i]) {
            presence[f][static_cast<std::size_t>(c)]++;
            class_total[static_cast<std::size_t>(c)]++;
        }
    }
    for (int c = 0; c < kNumSentiments; ++c) {
        auto cc = static_cast<std::size_t>(c);
        model.log_prior[cc] =
            std::log(static_cast<double>(class_count[cc]) / static_cast<double>(N));
    }
    model.feature_log_prob.assign(F, {0.0, 0.0, 0.0});
    for (std::size_t f = 0; f < F; ++f) {
        for (int c = 0; c < kNumSentiments; ++c) {
            auto cc = static_cast<std::size_t>(c);
            double num = static_cast<double>(presence[f][cc]) + alpha;
            double den = static_cast<double>(class_total[cc]) + alpha * static_cast<double>(F);
            model.feature_log_prob[f][cc] = std::log(num / den);
        }
    }
    return model;
}

NBBackend::NBBackend(NBModel model, std::shared_ptr<const SubwordVocab> vocab)
    : model_(std::move(model)), vocab_(std::move(vocab)) {}

SentimentScores NBBackend::score(const std::string& text) const {
    std::array<double, kNumSentiments> z = model_.log_prior;
    for (std::size_t f : model_.features.featurize(text, *vocab_)) {
        for (int c = 0; c < kNumSentiments; ++c)
            z[static_cast<std::size_t>(c)] += model_.feature_log_prob[f][static_cast<std::size_t>(c)];
    }
    return scores_from_logits(z);
}

LinearBackend::LinearBackend(LinearModel model, std::shared_ptr<const SubwordVocab> vocab)
    : model_(std::move(model)), vocab_(std::move(vocab)) {}

SentimentScores LinearBackend::score(const std::string& text) const {
    std::array<double, kNumSentiments> z = model_.bias;
    for (std::size_t f : model_.features.featurize(text, *vocab_)) {
        for (int c = 0; c < kNumSentiments; ++c)
            z[static_cast<std::size_t>(c)] += model_.weights[f][static_cast<std::size_t>(c)];
    }
    return scores_from_logits(z);
}

double linear_loss(const LinearModel& model,
                   const std::vector<std::vector<std::size_t>>& examples,
                   const std::vector<int>& labels, double l2) {
    double ce = 0.0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        std::array<double, kNumSentiments> z = model.bias;
        for (std::size_t f : examples[i])
            for (int c = 0; c < kNumSentiments; ++c)
                z[static_cast<std::size_t>(c)] += model.weights[f][static_cast<std::size_t>(c)];
        auto p = scores_from_logits(z);
        ce -= std::log(std::max(p[labels[i]], 1e-300));
    }
    ce /= static_cast<double>(examples.size());
    double reg = 0.0;
    for (const auto& row : model.weights)
        for (double w : row) reg += w * w;
    return ce + l2 * reg;
}

void linear_gradient(const LinearModel& model,
                     const std::vector<std::vector<std::size_t>>& examples,
                     const std::vector<int>& labels, double l2, LinearModel* grad) {
    const std::size_t F = model.weights.size();
    grad->bias = {0.0, 0.0, 0.0};
    grad->weights.assign(F, {0.0, 0.0, 0.0});
    const double inv_n = 1.0 / static_cast<double>(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        std::array<double, kNumSentiments> z = model.bias;
        for (std::size_t f : examples[i])
            for (int c = 0; c < kNumSentiments; ++c)
                z[static_cast<std::size_t>(c)] += model.weights[f][static_cast<std::size_t>(c)];
        auto p = scores_from_logits(z);
        for (int c = 0; c < kNumSentiments; ++c) {
            auto cc = static_cast<std::size_t>(c);
            double g = (p[c] - (labels[i] == c ? 1.0 : 0.0)) * inv_n;
            grad->bias[cc] += g;
            for (std::size_t f : examples[i]) grad->weights[f][cc] += g;
        }
    }
    for (std::size_t f = 0; f < F; ++f)
        for (int c = 0; c < kNumSentiments; ++c) {
            auto cc = static_cast<std::size_t>(c);
            grad->weights[f][cc] += 2.0 * l2 * model.weights[f][cc];
        }
}

LinearModel train_linear(const Dataset& train, const SubwordVocab& vocab, double lr, int epochs,
                         double l2, std::uint64_t seed, int batch_size, LinearTrainInfo* info) {
    if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    auto data = featurize_dataset(train, vocab);
    require_all_classes(data.labels);

    LinearModel model;
    model.features = std::move(data.features);
    const std::size_t F = model.features.size();
    const std::size_t N = data.labels.size();
    model.weights.assign(F, {0.0, 0.0, 0.0});

    for (int epoch = 0; epoch < epochs; ++epoch) {
        auto order = shuffled_indices(N, derive_seed(seed, static_cast<std::uint64_t>(epoch)));
        for (std::size_t start = 0; start < N; start += static_cast<std::size_t>(batch_size)) {
            std::size_t stop = std::min(N, start + static_cast<std::size_t>(batch_size));
            double inv_b = 1.0 / static_cast<double>(stop - start);
            std::array<double, kNumSentiments> bias_grad{};
            // sparse weight gradient for the batch
            std::map<std::size_t, std::array<double, kNumSentiments>> w_grad;
            for (std::size_t bi = start; bi < stop; ++bi) {
                std::size_t i = order[bi];
                std::array<double, kNumSentiments> z = model.bias;
                for (std::size_t f : data.examples[i])
                    for (int c = 0; c < kNumSentiments; ++c)
                        z[static_cast<std::size_t>(c)] +=
                            model.weights[f][static_cast<std::size_t>(c)];
                auto p = scores_from_logits(z);
                for (int c = 0; c < kNumSentiments; ++c) {
                    auto cc = static_cast<std::size_t>(c);
                    double g = (p[c] - (data.labels[i] == c ? 1.0 : 0.0)) * inv_b;
                    bias_grad[cc] += g;
                    for (std::size_t f : data.examples[i]) w_grad[f][cc] += g;
                }
            }
            for (int c = 0; c < kNumSentiments; ++c) {
                auto cc = static_cast<std::size_t>(c);
                model.bias[cc] -= lr * bias_grad[cc];
            }
            for (const auto& [f, g] : w_grad)
                for (int c = 0; c < kNumSentiments; ++c) {
                    auto cc = static_cast<std::size_t>(c);
                    model.weights[f][cc] -= lr * g[cc];
                }
            // l2 decay applied densely once per batch
            double decay = 1.0 - lr * 2.0 * l2;
            if (l2 > 0.0)
                for (auto& row : model.weights)
                    for (double& w : row) w *= decay;
        }
        double loss = linear_loss(model, data.examples, data.labels, l2);
        if (!std::isfinite(loss))
            throw std::runtime_error("linear training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch + 1) + "; lower the learning rate");
        if (info) info->epoch_loss.push_back(loss);
    }
    return model;
}

SentimentScores score(const ScorerBackend& backend, const std::string& text) {
    SentimentScores s;
    try {
        s = backend.score(text);
    } catch (const std::exception& e) {
        throw std::runtime_error("backend \"" + backend.name() + "\" failed: " + e.what());
    }
    if (!s.valid())
        throw std::runtime_error("backend \"" + backend.name() +
                                 "\" returned an invalid probability distribution");
    return s;
}

namespace {

void write_feature_rows(std::ostream& out,
                        const FeatureSpace& fs,
                        const std::vector<std::array<double, kNumSentiments>>& rows) {
    for (std::size_t f = 0; f < rows.size(); ++f) {
        const auto& key = fs.keys()[f];
        out << key.first << ' ' << key.second;
        for (double v : rows[f]) out << ' ' << fmt_double(v);
        out << '\n';
    }
}

void read_feature_rows(std::istream& in, const std::filesystem::path& path, std::size_t count,
                       FeatureSpace* fs,
                       std::vector<std::array<double, kNumSentiments>>* rows) {
    rows->assign(count, {0.0, 0.0, 0.0});
    std::string line;
    for (std::size_t f = 0; f < count; ++f) {
        if (!std::getline(in, line))
            throw std::runtime_error("truncated model file: " + path.string());
        auto toks = split_ws(line);
        if (toks.size() != 5)
            throw std::runtime_error("bad feature row in model file: " + path.string());
        FeatureKey key{static_cast<std::int32_t>(std::stol(toks[0])),
                       static_cast<std::int32_t>(std::stol(toks[1]))};
        fs->insert(key);
        for (int c = 0; c < kNumSentiments; ++c)
            (*rows)[f][static_cast<std::size_t>(c)] =
                parse_double_tok(toks[static_cast<std::size_t>(c) + 2], path.string());
    }
    fs->freeze();
    if (fs->size() != count)
        throw std::runtime_error("duplicate feature keys in model file: " + path.string());
}

}  // namespace

void save_nb_model(const NBModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    out << "absa-model 1 nb\n";
    out << "alpha " << fmt_double(model.alpha) << '\n';
    out << "priors";
    for (double v : model.log_prior) out << ' ' << fmt_double(v);
    out << '\n';
    out << "features " << model.features.size() << '\n';
    write_feature_rows(out, model.features, model.feature_log_prob);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_linear_model(const LinearModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    out << "absa-model 1 linear\n";
    out << "bias";
    for (double v : model.bias) out << ' ' << fmt_double(v);
    out << '\n';
    out << "features " << model.features.size() << '\n';
    write_feature_rows(out, model.features, model.weights);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::ifstream open_model(const std::filesystem::path& path, const std::string& kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "absa-model 1 " + kind)
        throw std::runtime_error("not an absa " + kind + " model file: " + path.string());
    return in;
}

std::size_t read_feature_count(std::istream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path.string());
    auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != "features")
        throw std::runtime_error("bad model file header: " + path.string());
    return static_cast<std::size_t>(std::stoull(toks[1]));
}

}  // namespace

NBModel load_nb_model(const std::filesystem::path& path) {
    auto in = open_model(path, "nb");
    NBModel model;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path.string());
    auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != "alpha")
        throw std::runtime_error("bad model file header: " + path.string());
    model.alpha = parse_double_tok(toks[1], path.string());
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path.string());
    toks = split_ws(line);
    if (toks.size() != 4 || toks[0] != "priors")
        throw std::runtime_error("bad model file header: " + path.string());
    for (int c = 0; c < kNumSentiments; ++c)
        model.log_prior[static_cast<std::size_t>(c)] =
            parse_double_tok(toks[static_cast<std::size_t>(c) + 1], path.string());
    std::size_t count = read_feature_count(in, path);
    read_feature_rows(in, path, count, &model.features, &model.feature_log_prob);
    return model;
}

LinearModel load_linear_model(const std::filesystem::path& path) {
    auto in = open_model(path, "linear");
    LinearModel model;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path.string());
    auto toks = split_ws(line);
    if (toks.size() != 4 || toks[0] != "bias")
        throw std::runtime_error("bad model file header: " + path.string());
    for (int c = 0; c < kNumSentiments; ++c)
        model.bias[static_cast<std::size_t>(c)] =
            parse_double_tok(toks[static_cast<std::size_t>(c) + 1], path.string());
    std::size_t count = read_feature_count(in, path);
    read_feature_rows(in, path, count, &model.features, &model.weights);
    return model;
}

std::string model_kind(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    std::string magic, version, kind;
    if (!(in >> magic >> version >> kind) || magic != "absa-model" || version != "1")
        throw std::runtime_error("not an absa model file: " + path.string());
    if (kind != "nb" && kind != "linear")
        throw std::runtime_error("unknown model kind \"" + kind + "\" in " + path.string());
    return kind;
}

}  // namespace absa
