#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace absa {

enum class Sentiment : int { Negative = 0, Neutral = 1, Positive = 2 };

enum class Variant : int { English = 0, Sinhala = 1, Singlish = 2, CodeMixed = 3, Unknown = 4 };

enum class Aspect : int {
    CustomerSupport = 0,
    LoanCredit = 1,
    DigitalBanking = 2,
    TransactionsPayments = 3,
    TrustSecurity = 4,
    General = 5
};

inline constexpr int kNumSentiments = 3;
inline constexpr int kNumNamedAspects = 5;

std::string to_string(Sentiment s);
std::string to_string(Variant v);
std::string to_string(Aspect a);

std::optional<Sentiment> parse_sentiment(std::string_view s);
std::optional<Variant> parse_variant(std::string_view s);
std::optional<Aspect> parse_aspect(std::string_view s);

/// Unnormalized per-class scores.
struct Logits {
    double neg = 0.0;
    double neu = 0.0;
    double pos = 0.0;
};

/// A (negative, neutral, positive) probability triple. Valid instances are
/// non-negative and sum to 1 within 1e-9.
struct SentimentScores {
    double neg = 0.0;
    double neu = 0.0;
    double pos = 0.0;

    double operator[](int k) const {
        switch (k) {
            case 0: return neg;
            case 1: return neu;
            case 2: return pos;
        }
        throw std::out_of_range("SentimentScores index");
    }
    double& operator[](int k) {
        switch (k) {
            case 0: return neg;
            case 1: return neu;
            case 2: return pos;
        }
        throw std::out_of_range("SentimentScores index");
    }

    double prob(Sentiment s) const { return (*this)[static_cast<int>(s)]; }

    double sum() const { return neg + neu + pos; }

    bool valid(double tol = 1e-9) const {
        for (int k = 0; k < kNumSentiments; ++k) {
            double p = (*this)[k];
            if (!(p >= -tol && p <= 1.0 + tol)) return false;
        }
        return std::abs(sum() - 1.0) <= tol;
    }

    /// Highest-probability class; ties resolve to the lower enum value.
    Sentiment argmax() const {
        Sentiment best = Sentiment::Negative;
        double top = neg;
        if (neu > top) { top = neu; best = Sentiment::Neutral; }
        if (pos > top) { top = pos; best = Sentiment::Positive; }
        return best;
    }

    double confidence() const { return prob(argmax()); }
};

}  // namespace absa
