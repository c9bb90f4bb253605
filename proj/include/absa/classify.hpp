#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absa/tokenize.hpp"
#include "absa/types.hpp"

namespace absa {

class Dataset;

/// Numerically stable softmax over the three class logits.
SentimentScores softmax(const Logits& z);

/// Feature key: subword unigram (id, -1) or bigram (id, id).
using FeatureKey = std::pair<std::int32_t, std::int32_t>;

/// Dense index over the subword unigrams and bigrams seen in training.
/// Binary presence features; unseen n-grams are ignored at inference.
class FeatureSpace {
public:
    void insert(const FeatureKey& key);
    std::size_t size() const { return keys_.size(); }
    const std::vector<FeatureKey>& keys() const { return keys_; }

    /// Sorted unique indices of the features present in `text`.
    std::vector<std::size_t> featurize(const std::string& text, const SubwordVocab& vocab) const;
    std::vector<std::size_t> featurize_ids(const std::vector<int>& ids) const;

    void freeze();  // assigns dense indices in key order

private:
    std::map<FeatureKey, std::size_t> index_;
    std::vector<FeatureKey> keys_;
};

FeatureSpace build_feature_space(const std::vector<std::string>& texts, const SubwordVocab& vocab);

struct NBModel {
    std::array<double, kNumSentiments> log_prior{};
    // [feature][class], additive-smoothed log likelihoods
    std::vector<std::array<double, kNumSentiments>> feature_log_prob;
    FeatureSpace features;
    double alpha = 1.0;
};

struct LinearModel {
    std::array<double, kNumSentiments> bias{};
    // [feature][class]
    std::vector<std::array<double, kNumSentiments>> weights;
    FeatureSpace features;
};

struct LinearTrainInfo {
    std::vector<double> epoch_loss;  // full-data objective after each epoch
};

class ScorerBackend {
public:
    virtual ~ScorerBackend() = default;
    virtual const std::string& name() const = 0;
    virtual SentimentScores score(const std::string& text) const = 0;
    virtual bool concurrency_safe() const { return true; }
};

class NBBackend : public ScorerBackend {
public:
    NBBackend(NBModel model, std::shared_ptr<const SubwordVocab> vocab);
    const std::string& name() const override { return name_; }
    SentimentScores score(const std::string& text) const override;
    const NBModel& model() const { return model_; }

private:
    std::string name_ = "nb";
    NBModel model_;
    std::shared_ptr<const SubwordVocab> vocab_;
};

class LinearBackend : public ScorerBackend {
public:
    LinearBackend(LinearModel model, std::shared_ptr<const SubwordVocab> vocab);
    const std::string& name() const override { return name_; }
    SentimentScores score(const std::string& text) const override;
    const LinearModel& model() const { return model_; }

private:
    std::string name_ = "linear";
    LinearModel model_;
    std::shared_ptr<const SubwordVocab> vocab_;
};

/// Multinomial naive Bayes with additive smoothing over n-gram presence
/// counts. Every class must appear in the training data.
NBModel train_nb(const Dataset& train, const SubwordVocab& vocab, double alpha);

/// Multinomial logistic regression, mini-batch gradient descent with seeded
/// shuffling, cross-entropy + l2 * ||W||^2 objective. Throws when the loss
/// goes non-finite.
LinearModel train_linear(const Dataset& train, const SubwordVocab& vocab, double lr, int epochs,
                         double l2, std::uint64_t seed, int batch_size = 16,
                         LinearTrainInfo* info = nullptr);

/// Full-data objective for a fixed model: mean cross-entropy + l2 * ||W||^2.
double linear_loss(const LinearModel& model,
                   const std::vector<std::vector<std::size_t>>& examples,
                   const std::vector<int>& labels, double l2);

/// Analytic gradient of linear_loss with respect to weights and biases,
/// written into `grad` (same shape as the model).
void linear_gradient(const LinearModel& model,
                     const std::vector<std::vector<std::size_t>>& examples,
                     const std::vector<int>& labels, double l2, LinearModel* grad);

/// Scores text through a backend; failures are rethrown with the backend name.
SentimentScores score(const ScorerBackend& backend, const std::string& text);

void save_nb_model(const NBModel& model, const std::filesystem::path& path);
NBModel load_nb_model(const std::filesystem::path& path);
void save_linear_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_linear_model(const std::filesystem::path& path);

/// Reads the model kind ("nb" or "linear") from a saved model file header.
std::string model_kind(const std::filesystem::path& path);

}  // namespace absa
