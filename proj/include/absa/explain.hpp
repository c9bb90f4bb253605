#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "absa/classify.hpp"
#include "absa/tokenize.hpp"
#include "absa/types.hpp"

namespace absa {

struct Attribution {
    std::string token;
    int position = 0;  // token index in the explained text
    double weight = 0.0;
};

struct LimeExplanation {
    Sentiment target_class = Sentiment::Neutral;
    std::vector<Attribution> attributions;  // top-K by |weight|
    double intercept = 0.0;
    double fidelity_r2 = 0.0;  // weighted R^2 of the surrogate, clamped [0,1]
    int n_samples = 0;
    std::uint64_t seed = 0;
    double kernel_width = 0.25;
};

enum class ShapMethod { Exact, Kernel };
std::string to_string(ShapMethod method);

struct ShapExplanation {
    Sentiment target_class = Sentiment::Neutral;
    double base_value = 0.0;  // scorer output on the all-masked text
    double fx = 0.0;          // scorer output on the original text
    std::vector<Attribution> phi;  // one entry per token, position order
    double additivity_residual = 0.0;
    ShapMethod method = ShapMethod::Exact;
    int n_samples = 0;
    std::uint64_t seed = 0;
};

/// Rebuilds text from a tokenization with dropped positions replaced by the
/// mask piece. keep must have one entry per token; all-ones reproduces the
/// normalized input exactly.
std::string perturb(const SubwordVocab& vocab, const TokenizedText& tokenized,
                    const std::vector<int>& keep);

struct LimeOptions {
    int n_samples = 1000;
    std::uint64_t seed = 0;
    double kernel_width = 0.25;  // sigma of the proximity kernel
    int top_k = 10;
    double ridge_lambda = 1e-3;
    int workers = 1;  // scorer evaluation threads; result is worker-independent
};

/// Local linear surrogate: samples keep-vectors (each position kept with
/// probability 1/2, the all-ones vector always included), weights samples by
/// exp(-(1 - kept/M)^2 / sigma^2), and fits ridge-regularized weighted least
/// squares with an unpenalized intercept.
LimeExplanation lime_explain(const ScorerBackend& scorer, const SubwordVocab& vocab,
                             const std::string& text, Sentiment target_class,
                             const LimeOptions& options = {});

/// Exact Shapley values by full coalition enumeration (2^M scorer calls).
ShapExplanation shap_exact(const ScorerBackend& scorer, const SubwordVocab& vocab,
                           const std::string& text, Sentiment target_class, int max_tokens = 12,
                           int workers = 1);

struct ShapKernelOptions {
    int n_samples = 4000;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// Sampled Shapley approximation: coalition sizes drawn proportional to the
/// Shapley kernel mass, least squares solved with the efficiency constraint
/// (base + sum(phi) = f(x)) eliminated exactly.
ShapExplanation shap_kernel(const ScorerBackend& scorer, const SubwordVocab& vocab,
                            const std::string& text, Sentiment target_class,
                            const ShapKernelOptions& options = {});

struct KeywordScore {
    std::string term;
    double score = 0.0;
};

/// tf-idf keyword ranking over a slice of texts. idf uses the background
/// corpus when given (df over background docs), otherwise the slice itself:
/// idf = ln((1 + N)/(1 + df)) + 1. Scores sum tf * idf over the slice;
/// ties break lexicographically.
std::vector<KeywordScore> extract_keywords(const std::vector<std::string>& slice, std::size_t k,
                                           const std::vector<std::string>* background = nullptr);

}  // namespace absa
