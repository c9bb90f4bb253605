#include "absa/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "absa/linalg.hpp"
#include "absa/parallel.hpp"
#include "absa/rng.hpp"
#include "absa/textprep.hpp"

namespace absa {

namespace {

TokenizedText tokenize_for_explain(const SubwordVocab& vocab, const std::string& text) {
    auto tok = encode(vocab, normalize(text).text);
    if (tok.tokens.empty())
        throw std::invalid_argument("cannot explain text with no tokens");
    return tok;
}

int clamp_workers(const ScorerBackend& scorer, int workers) {
    if (!scorer.concurrency_safe()) return 1;
    return std::max(1, workers);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

}  // namespace

std::string to_string(ShapMethod method) {
    return method == ShapMethod::Exact ? "shap-exact" : "shap-kernel";
}

std::string perturb(const SubwordVocab& vocab, const TokenizedText& tokenized,
                    const std::vector<int>& keep) {
    if (keep.size() != tokenized.tokens.size())
        throw std::invalid_argument("keep vector length " + std::to_string(keep.size()) +
                                    " does not match token count " +
                                    std::to_string(tokenized.tokens.size()));
    std::vector<std::string> pieces;
    pieces.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        pieces.push_back(keep[i] ? tokenized.tokens[i] : std::string(SubwordVocab::kMask));
    return decode(vocab, pieces);
}

LimeExplanation lime_explain(const ScorerBackend& scorer, const SubwordVocab& vocab,
                             const std::string& text, Sentiment target_class,
                             const LimeOptions& options) {
    if (!(options.kernel_width > 0.0))
        throw std::invalid_argument("kernel width must be > 0");
    auto tok = tokenize_for_explain(vocab, text);
    const std::size_t M = tok.tokens.size();
    if (options.n_samples < static_cast<int>(M) + 2)
        throw std::invalid_argument("lime needs at least M + 2 samples, got " +
                                    std::to_string(options.n_samples));
    const auto n = static_cast<std::size_t>(options.n_samples);

    std::vector<std::vector<int>> keeps(n);
    keeps[0].assign(M, 1);
    for (std::size_t j = 1; j < n; ++j) {
        SplitMix64 rng(derive_stream(options.seed, j));
        keeps[j].resize(M);
        for (std::size_t i = 0; i < M; ++i) keeps[j][i] = rng.next_bool() ? 1 : 0;
    }

    auto fvals = parallel_map<double>(n, clamp_workers(scorer, options.workers), [&](std::size_t j) {
        return scorer.score(perturb(vocab, tok, keeps[j])).prob(target_class);
    });

    std::vector<double> pi(n);
    const double sigma2 = options.kernel_width * options.kernel_width;
    for (std::size_t j = 0; j < n; ++j) {
        double kept = static_cast<double>(
            std::accumulate(keeps[j].begin(), keeps[j].end(), 0));
        double d = 1.0 - kept / static_cast<double>(M);
        pi[j] = std::exp(-(d * d) / sigma2);
    }

    // weighted ridge normal equations; intercept (index 0) unpenalized
    const std::size_t p = M + 1;
    std::vector<double> a(p * p, 0.0);
    std::vector<double> rhs(p, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double w = pi[j];
        a[0] += w;
        rhs[0] += w * fvals[j];
        for (std::size_t i = 0; i < M; ++i) {
            if (!keeps[j][i]) continue;
            a[(i + 1) * p] += w;
            a[i + 1] += w;
            rhs[i + 1] += w * fvals[j];
            for (std::size_t i2 = 0; i2 < M; ++i2)
                if (keeps[j][i2]) a[(i + 1) * p + (i2 + 1)] += w;
        }
    }
    for (std::size_t i = 1; i < p; ++i) a[i * p + i] += options.ridge_lambda;
    auto coef = solve_linear_system(std::move(a), std::move(rhs));

    double pi_sum = 0.0, f_weighted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        pi_sum += pi[j];
        f_weighted += pi[j] * fvals[j];
    }
    double fbar = f_weighted / pi_sum;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double yhat = coef[0];
        for (std::size_t i = 0; i < M; ++i)
            if (keeps[j][i]) yhat += coef[i + 1];
        ss_res += pi[j] * (fvals[j] - yhat) * (fvals[j] - yhat);
        ss_tot += pi[j] * (fvals[j] - fbar) * (fvals[j] - fbar);
    }
    double r2 = ss_tot > 1e-18 ? 1.0 - ss_res / ss_tot : 1.0;
    r2 = std::min(1.0, std::max(0.0, r2));

    LimeExplanation out;
    out.target_class = target_class;
    out.intercept = coef[0];
    out.fidelity_r2 = r2;
    out.n_samples = options.n_samples;
    out.seed = options.seed;
    out.kernel_width = options.kernel_width;
    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        double ax = std::abs(coef[x + 1]);
        double ay = std::abs(coef[y + 1]);
        if (ax != ay) return ax > ay;
        return x < y;
    });
    std::size_t take = std::min<std::size_t>(M, static_cast<std::size_t>(std::max(0, options.top_k)));
    for (std::size_t r = 0; r < take; ++r) {
        std::size_t i = order[r];
        out.attributions.push_back(
            Attribution{tok.tokens[i], static_cast<int>(i), coef[i + 1]});
    }
    return out;
}

ShapExplanation shap_exact(const ScorerBackend& scorer, const SubwordVocab& vocab,
                           const std::string& text, Sentiment target_class, int max_tokens,
                           int workers) {
    auto tok = tokenize_for_explain(vocab, text);
    const int M = static_cast<int>(tok.tokens.size());
    if (M > max_tokens)
        throw std::invalid_argument(
            "text has " + std::to_string(M) + " tokens; exact Shapley enumerates 2^M coalitions "
            "and is capped at " + std::to_string(max_tokens) + " (use shap-kernel)");
    const std::size_t total = std::size_t{1} << M;

    auto v = parallel_map<double>(total, clamp_workers(scorer, workers), [&](std::size_t mask) {
        std::vector<int> keep(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) keep[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
        return scorer.score(perturb(vocab, tok, keep)).prob(target_class);
    });

    std::vector<double> size_weight(static_cast<std::size_t>(M));
    double m_fact = factorial(M);
    for (int s = 0; s < M; ++s)
        size_weight[static_cast<std::size_t>(s)] = factorial(s) * factorial(M - 1 - s) / m_fact;

    ShapExplanation out;
    out.target_class = target_class;
    out.method = ShapMethod::Exact;
    out.base_value = v[0];
    out.fx = v[total - 1];
    out.phi.reserve(static_cast<std::size_t>(M));
    double phi_sum = 0.0;
    for (int i = 0; i < M; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        double phi = 0.0;
        for (std::size_t mask = 0; mask < total; ++mask) {
            if (mask & bit) continue;
            int s = std::popcount(mask);
            phi += size_weight[static_cast<std::size_t>(s)] * (v[mask | bit] - v[mask]);
        }
        out.phi.push_back(Attribution{tok.tokens[static_cast<std::size_t>(i)], i, phi});
        phi_sum += phi;
    }
    out.additivity_residual = out.base_value + phi_sum - out.fx;
    return out;
}

ShapExplanation shap_kernel(const ScorerBackend& scorer, const SubwordVocab& vocab,
                            const std::string& text, Sentiment target_class,
                            const ShapKernelOptions& options) {
    auto tok = tokenize_for_explain(vocab, text);
    const int M = static_cast<int>(tok.tokens.size());
    if (M < 2)
        throw std::invalid_argument("kernel Shapley needs at least 2 tokens (use the exact "
                                    "explainer for single-token text)");
    if (options.n_samples < 2 * M)
        throw std::invalid_argument("kernel Shapley needs at least 2M samples, got " +
                                    std::to_string(options.n_samples));
    const auto n = static_cast<std::size_t>(options.n_samples);
    const auto m = static_cast<std::size_t>(M);

    std::vector<int> all_keep(m, 1);
    std::vector<int> none_keep(m, 0);
    double fx = scorer.score(perturb(vocab, tok, all_keep)).prob(target_class);
    double base = scorer.score(perturb(vocab, tok, none_keep)).prob(target_class);

    // coalition sizes 1..M-1 drawn proportional to (M-1)/(s(M-s))
    std::vector<double> cdf(m - 1, 0.0);
    double acc = 0.0;
    for (int s = 1; s < M; ++s) {
        acc += static_cast<double>(M - 1) / (static_cast<double>(s) * static_cast<double>(M - s));
        cdf[static_cast<std::size_t>(s - 1)] = acc;
    }
    for (auto& c : cdf) c /= acc;

    std::vector<std::vector<int>> keeps(n);
    for (std::size_t j = 0; j < n; ++j) {
        SplitMix64 rng(derive_stream(options.seed, j));
        double u = rng.next_double();
        int s = M - 1;
        for (std::size_t si = 0; si < cdf.size(); ++si) {
            if (u < cdf[si]) {
                s = static_cast<int>(si) + 1;
                break;
            }
        }
        std::vector<std::size_t> idx(m);
        std::iota(idx.begin(), idx.end(), 0);
        keeps[j].assign(m, 0);
        for (int t = 0; t < s; ++t) {
            std::size_t r = static_cast<std::size_t>(t) +
                            rng.next_below(m - static_cast<std::size_t>(t));
            std::swap(idx[static_cast<std::size_t>(t)], idx[r]);
            keeps[j][idx[static_cast<std::size_t>(t)]] = 1;
        }
    }

    auto fvals = parallel_map<double>(n, clamp_workers(scorer, options.workers), [&](std::size_t j) {
        return scorer.score(perturb(vocab, tok, keeps[j])).prob(target_class);
    });

    // eliminate phi_{M-1} with the efficiency constraint: regress
    // y = v(S) - base - z_last (fx - base) on columns (z_i - z_last)
    const std::size_t p = m - 1;
    std::vector<double> a(p * p, 0.0);
    std::vector<double> rhs(p, 0.0);
    std::vector<double> row(p, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double z_last = keeps[j][m - 1];
        double y = fvals[j] - base - z_last * (fx - base);
        for (std::size_t i = 0; i < p; ++i) row[i] = keeps[j][i] - z_last;
        for (std::size_t i = 0; i < p; ++i) {
            if (row[i] == 0.0) continue;
            rhs[i] += row[i] * y;
            for (std::size_t i2 = 0; i2 < p; ++i2) a[i * p + i2] += row[i] * row[i2];
        }
    }
    for (std::size_t i = 0; i < p; ++i) a[i * p + i] += 1e-9;
    auto phi_head = solve_linear_system(std::move(a), std::move(rhs));

    ShapExplanation out;
    out.target_class = target_class;
    out.method = ShapMethod::Kernel;
    out.base_value = base;
    out.fx = fx;
    out.n_samples = options.n_samples;
    out.seed = options.seed;
    double head_sum = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        out.phi.push_back(Attribution{tok.tokens[i], static_cast<int>(i), phi_head[i]});
        head_sum += phi_head[i];
    }
    double phi_last = (fx - base) - head_sum;
    out.phi.push_back(Attribution{tok.tokens[m - 1], M - 1, phi_last});
    out.additivity_residual = base + head_sum + phi_last - fx;
    return out;
}

std::vector<KeywordScore> extract_keywords(const std::vector<std::string>& slice, std::size_t k,
                                           const std::vector<std::string>* background) {
    if (slice.empty()) throw std::invalid_argument("keyword extraction needs a non-empty slice");

    auto doc_words = [](const std::string& text) {
        std::vector<std::string> words;
        for (const auto& t : word_tokens(normalize(text).text)) words.push_back(t.text);
        return words;
    };

    std::map<std::string, double> tf_total;
    for (const auto& text : slice)
        for (const auto& w : doc_words(text)) tf_total[w] += 1.0;

    const std::vector<std::string>& idf_docs = background ? *background : slice;
    std::map<std::string, std::size_t> df;
    for (const auto& text : idf_docs) {
        std::map<std::string, bool> seen;
        for (const auto& w : doc_words(text)) {
            if (!seen[w]) {
                seen[w] = true;
                df[w]++;
            }
        }
    }
    const double n_docs = static_cast<double>(idf_docs.size());

    std::vector<KeywordScore> ranked;
    ranked.reserve(tf_total.size());
    for (const auto& [term, tf] : tf_total) {
        auto it = df.find(term);
        double d = it == df.end() ? 0.0 : static_cast<double>(it->second);
        double idf = std::log((1.0 + n_docs) / (1.0 + d)) + 1.0;
        ranked.push_back(KeywordScore{term, tf * idf});
    }
    std::sort(ranked.begin(), ranked.end(), [](const KeywordScore& x, const KeywordScore& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.term < y.term;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

}  // namespace absa
