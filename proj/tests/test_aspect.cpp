#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "absa/aspect.hpp"
#include "absa/textprep.hpp"
#include "support.hpp"

using namespace absa;

namespace {

std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& t : word_tokens(text)) out.push_back(t.text);
    return out;
}

std::filesystem::path write_seeds(const std::string& name, const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "absa_aspect_test";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

}  // namespace

TEST_CASE("bundled seed file covers all five aspects with ten keywords each") {
    auto seeds = load_aspect_seeds(testsupport::data_path("aspects/seeds.tsv"));
    for (int a = 0; a < kNumNamedAspects; ++a)
        CHECK(seeds.keywords(static_cast<Aspect>(a)).size() >= 10);
}

TEST_CASE("seed file missing an aspect is rejected") {
    auto p = write_seeds("missing.tsv",
                         "CustomerSupport\tsupport\n"
                         "LoanCredit\tloan\n"
                         "DigitalBanking\tapp\n"
                         "TransactionsPayments\ttransfer\n");
    CHECK_THROWS_WITH_AS(load_aspect_seeds(p), doctest::Contains("TrustSecurity"),
                         std::runtime_error);
}

TEST_CASE("a keyword may serve multiple aspects") {
    auto p = write_seeds("shared.tsv",
                         "CustomerSupport\tservice\n"
                         "CustomerSupport\tsupport\n"
                         "LoanCredit\tloan\n"
                         "DigitalBanking\tservice\n"
                         "DigitalBanking\tapp\n"
                         "TransactionsPayments\ttransfer\n"
                         "TrustSecurity\tfraud\n");
    auto seeds = load_aspect_seeds(p);
    IdfTable idf;
    auto scores = score_aspects(words("service"), seeds, idf);
    int cs = static_cast<int>(Aspect::CustomerSupport);
    int db = static_cast<int>(Aspect::DigitalBanking);
    CHECK(scores.relevance[cs] == doctest::Approx(scores.relevance[db]).epsilon(1e-12));
    CHECK(scores.relevance[cs] > scores.relevance[static_cast<int>(Aspect::LoanCredit)]);
}

TEST_CASE("loan clause lands on LoanCredit") {
    auto seeds = load_aspect_seeds(testsupport::data_path("aspects/seeds.tsv"));
    IdfTable idf;
    auto scores = score_aspects(words("loan approval delays"), seeds, idf);
    CHECK(scores.argmax() == static_cast<int>(Aspect::LoanCredit));
}

TEST_CASE("no keyword hits fall back to uniform relevance") {
    auto seeds = load_aspect_seeds(testsupport::data_path("aspects/seeds.tsv"));
    IdfTable idf;
    auto scores = score_aspects(words("nothing matches here"), seeds, idf);
    for (double r : scores.relevance) CHECK(r == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(assign_aspect(scores, 0.3) == Aspect::General);
}

TEST_CASE("app and login clause is DigitalBanking") {
    auto seeds = load_aspect_seeds(testsupport::data_path("aspects/seeds.tsv"));
    IdfTable idf;
    auto scores = score_aspects(words("the app login failed"), seeds, idf);
    CHECK(scores.argmax() == static_cast<int>(Aspect::DigitalBanking));
    CHECK(assign_aspect(scores) == Aspect::DigitalBanking);
}

TEST_CASE("relevance is always a simplex") {
    auto seeds = load_aspect_seeds(testsupport::data_path("aspects/seeds.tsv"));
    IdfTable idf;
    for (const char* text : {"loan interest rates", "app crashed", "", "fraud alert scam",
                             "transfer and support and app and loan and fraud"}) {
        auto scores = score_aspects(words(text), seeds, idf);
        double sum = 0.0;
        for (double r : scores.relevance) {
            CHECK(r >= 0.0);
            sum += r;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("keywords that do not occur never change the scores") {
    auto p = write_seeds("base.tsv",
                         "CustomerSupport\tsupport\n"
                         "LoanCredit\tloan\n"
                         "DigitalBanking\tapp\n"
                         "TransactionsPayments\ttransfer\n"
                         "TrustSecurity\tfraud\n");
    auto base = load_aspect_seeds(p);
    auto p2 = write_seeds("extended.tsv",
                          "CustomerSupport\tsupport\n"
                          "LoanCredit\tloan\n"
                          "LoanCredit\tzzzz unseen phrase\n"
                          "DigitalBanking\tapp\n"
                          "TransactionsPayments\ttransfer\n"
                          "TrustSecurity\tfraud\n");
    auto extended = load_aspect_seeds(p2);
    IdfTable idf;
    auto clause = words("the app support was fine");
    auto a = score_aspects(clause, base, idf);
    auto b = score_aspects(clause, extended, idf);
    for (int i = 0; i < kNumNamedAspects; ++i)
        CHECK(a.relevance[i] == doctest::Approx(b.relevance[i]).epsilon(1e-12));
}

TEST_CASE("assign_aspect applies threshold and enum-order tie break") {
    AspectScores clear;
    clear.relevance = {0.6, 0.1, 0.1, 0.1, 0.1};
    CHECK(assign_aspect(clear, 0.3) == Aspect::CustomerSupport);

    AspectScores uniform;
    uniform.relevance = {0.2, 0.2, 0.2, 0.2, 0.2};
    CHECK(assign_aspect(uniform, 0.3) == Aspect::General);

    AspectScores tie;
    tie.relevance = {0.35, 0.35, 0.1, 0.1, 0.1};
    CHECK(assign_aspect(tie, 0.3) == Aspect::CustomerSupport);
}

TEST_CASE("idf weighting favors the rarer keyword") {
    auto p = write_seeds("idf.tsv",
                         "CustomerSupport\tservice\n"
                         "LoanCredit\tloan\n"
                         "DigitalBanking\tapp\n"
                         "TransactionsPayments\ttransfer\n"
                         "TrustSecurity\tfraud\n");
    auto seeds = load_aspect_seeds(p);
    // "service" is everywhere, "loan" in one doc
    std::vector<std::string> corpus = {"service here", "service there", "service everywhere",
                                       "loan service"};
    auto idf = IdfTable::build(corpus, seeds);
    CHECK(idf.corpus_size() == 4);
    CHECK(idf.idf({"loan"}) > idf.idf({"service"}));

    auto scores = score_aspects(words("loan service"), seeds, idf);
    CHECK(scores.argmax() == static_cast<int>(Aspect::LoanCredit));
}

TEST_CASE("within an aspect the longest phrase consumes its span") {
    // both "interest rate" and "rate" could match; longest-match means one hit, not two
    auto p = write_seeds("phrase.tsv",
                         "CustomerSupport\tsupport\n"
                         "LoanCredit\tinterest rate\n"
                         "LoanCredit\trate\n"
                         "DigitalBanking\tapp\n"
                         "TransactionsPayments\ttransfer\n"
                         "TrustSecurity\tfraud\n");
    auto both = load_aspect_seeds(p);
    auto p2 = write_seeds("phrase_single.tsv",
                          "CustomerSupport\tsupport\n"
                          "LoanCredit\tinterest rate\n"
                          "DigitalBanking\tapp\n"
                          "TransactionsPayments\ttransfer\n"
                          "TrustSecurity\tfraud\n");
    auto single = load_aspect_seeds(p2);
    IdfTable idf;  // uniform weights, so raw scores count matches
    auto clause = words("the interest rate was high");
    auto a = score_aspects(clause, both, idf);
    auto b = score_aspects(clause, single, idf);
    CHECK(a.argmax() == static_cast<int>(Aspect::LoanCredit));
    for (int i = 0; i < kNumNamedAspects; ++i)
        CHECK(a.relevance[i] == doctest::Approx(b.relevance[i]).epsilon(1e-12));
}
