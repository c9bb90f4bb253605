#include "absa/types.hpp"

namespace absa {

std::string to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Negative: return "Negative";
        case Sentiment::Neutral: return "Neutral";
        case Sentiment::Positive: return "Positive";
    }
    return "?";
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::English: return "English";
        case Variant::Sinhala: return "Sinhala";
        case Variant::Singlish: return "Singlish";
        case Variant::CodeMixed: return "CodeMixed";
        case Variant::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(Aspect a) {
    switch (a) {
        case Aspect::CustomerSupport: return "CustomerSupport";
        case Aspect::LoanCredit: return "LoanCredit";
        case Aspect::DigitalBanking: return "DigitalBanking";
        case Aspect::TransactionsPayments: return "TransactionsPayments";
        case Aspect::TrustSecurity: return "TrustSecurity";
        case Aspect::General: return "General";
    }
    return "?";
}

std::optional<Sentiment> parse_sentiment(std::string_view s) {
    if (s == "Negative") return Sentiment::Negative;
    if (s == "Neutral") return Sentiment::Neutral;
    if (s == "Positive") return Sentiment::Positive;
    return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view s) {
    if (s == "English") return Variant::English;
    if (s == "Sinhala") return Variant::Sinhala;
    if (s == "Singlish") return Variant::Singlish;
    if (s == "CodeMixed") return Variant::CodeMixed;
    if (s == "Unknown") return Variant::Unknown;
    return std::nullopt;
}

std::optional<Aspect> parse_aspect(std::string_view s) {
    if (s == "CustomerSupport") return Aspect::CustomerSupport;
    if (s == "LoanCredit") return Aspect::LoanCredit;
    if (s == "DigitalBanking") return Aspect::DigitalBanking;
    if (s == "TransactionsPayments") return Aspect::TransactionsPayments;
    if (s == "TrustSecurity") return Aspect::TrustSecurity;
    if (s == "General") return Aspect::General;
    return std::nullopt;
}

}  // namespace absa
