#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "absa/lexicon.hpp"
#include "support.hpp"

using namespace absa;

namespace {

std::filesystem::path write_tsv(const std::string& name, const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "absa_lexicon_test";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

std::vector<std::string> words(std::initializer_list<const char*> ws) {
    return std::vector<std::string>(ws.begin(), ws.end());
}

}  // namespace

TEST_CASE("tsv entries load with weight and variant") {
    auto p = write_tsv("basic.tsv",
                       "# comment line\n"
                       "hari hodai\t0.8\tSinglish\tbanking\n");
    auto lex = load_lexicon(p);
    REQUIRE(lex.size() == 1);
    CHECK(lex.entries()[0].phrase == words({"hari", "hodai"}));
    CHECK(lex.entries()[0].weight == doctest::Approx(0.8));
    CHECK(lex.entries()[0].variant == Variant::Singlish);
    CHECK(lex.entries()[0].domain == "banking");
}

TEST_CASE("out-of-range weights are rejected") {
    auto p = write_tsv("range.tsv", "too strong\t1.5\tEnglish\tbanking\n");
    CHECK_THROWS_WITH_AS(load_lexicon(p), doctest::Contains("weight"), std::runtime_error);
}

TEST_CASE("duplicate phrase-variant pairs are rejected") {
    auto p = write_tsv("dup.tsv",
                       "hari hodai\t0.8\tSinglish\tbanking\n"
                       "hari hodai\t0.5\tSinglish\tother\n");
    CHECK_THROWS(load_lexicon(p));
}

TEST_CASE("empty lexicon always scores zero") {
    auto p = write_tsv("empty.tsv", "# nothing here\n");
    auto lex = load_lexicon(p);
    CHECK(lex.empty());
    CHECK(lexicon_score(lex.match_phrases(words({"hari", "hodai"}))) == 0.0);
}

TEST_CASE("longest entry wins over its prefix") {
    Lexicon lex;
    lex.add({words({"app", "eka", "lag", "wenawa"}), -0.8, Variant::Singlish, ""});
    lex.add({words({"app", "eka"}), 0.1, Variant::Singlish, ""});
    auto matches = lex.match_phrases(words({"app", "eka", "lag", "wenawa"}));
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].begin == 0);
    CHECK(matches[0].end == 4);
    CHECK(matches[0].entry->weight == doctest::Approx(-0.8));
}

TEST_CASE("no entries match gives empty list") {
    Lexicon lex;
    lex.add({words({"hari", "hodai"}), 0.8, Variant::Singlish, ""});
    CHECK(lex.match_phrases(words({"plain", "text"})).empty());
}

TEST_CASE("match records the token span") {
    Lexicon lex;
    lex.add({words({"hari", "hodai"}), 0.8, Variant::Singlish, ""});
    auto matches = lex.match_phrases(words({"service", "eka", "hari", "hodai"}));
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].begin == 2);
    CHECK(matches[0].end == 4);
}

TEST_CASE("matches never overlap and scan continues after each match") {
    Lexicon lex;
    lex.add({words({"hari", "hodai"}), 0.8, Variant::Singlish, ""});
    lex.add({words({"hodai", "wage"}), 0.4, Variant::Singlish, ""});
    auto matches = lex.match_phrases(words({"hari", "hodai", "wage"}));
    REQUIRE(matches.size() == 1);  // second entry starts inside the first match
    CHECK(matches[0].end == 2);
}

TEST_CASE("matching is independent of insertion order") {
    auto tokens = words({"app", "eka", "lag", "wenawa", "but", "supiri"});
    Lexicon a;
    a.add({words({"app", "eka", "lag", "wenawa"}), -0.8, Variant::Singlish, ""});
    a.add({words({"supiri"}), 0.9, Variant::Singlish, ""});
    Lexicon b;
    b.add({words({"supiri"}), 0.9, Variant::Singlish, ""});
    b.add({words({"app", "eka", "lag", "wenawa"}), -0.8, Variant::Singlish, ""});
    auto ma = a.match_phrases(tokens);
    auto mb = b.match_phrases(tokens);
    REQUIRE(ma.size() == mb.size());
    for (std::size_t i = 0; i < ma.size(); ++i) {
        CHECK(ma[i].begin == mb[i].begin);
        CHECK(ma[i].end == mb[i].end);
        CHECK(ma[i].entry->weight == mb[i].entry->weight);
    }
}

TEST_CASE("lexicon_score is the mean matched weight") {
    Lexicon lex;
    lex.add({words({"good"}), 0.8, Variant::English, ""});
    lex.add({words({"bad"}), -0.8, Variant::English, ""});
    lex.add({words({"fine"}), 0.4, Variant::English, ""});

    CHECK(lexicon_score({}) == 0.0);
    CHECK(lexicon_score(lex.match_phrases(words({"good", "bad"}))) == doctest::Approx(0.0));
    CHECK(lexicon_score(lex.match_phrases(words({"good", "fine"}))) == doctest::Approx(0.6));
}

TEST_CASE("correction at L=0 or beta=0 is exactly the identity") {
    SentimentScores s;
    s.neg = 0.17;
    s.neu = 0.33;
    s.pos = 0.50;
    auto a = apply_correction(s, 0.0, 1.0);
    CHECK(a.neg == s.neg);
    CHECK(a.neu == s.neu);
    CHECK(a.pos == s.pos);
    auto b = apply_correction(s, -0.7, 0.0);
    CHECK(b.neg == s.neg);
    CHECK(b.neu == s.neu);
    CHECK(b.pos == s.pos);
}

TEST_CASE("correction closed form from the uniform prior") {
    SentimentScores uniform;
    uniform.neg = uniform.neu = uniform.pos = 1.0 / 3.0;
    auto c = apply_correction(uniform, -1.0, 1.0);
    CHECK(c.neg == doctest::Approx(0.6652).epsilon(1e-3));
    CHECK(c.neu == doctest::Approx(0.2447).epsilon(1e-3));
    CHECK(c.pos == doctest::Approx(0.0900).epsilon(1e-3));
    CHECK(std::fabs(c.sum() - 1.0) <= 1e-9);
}

TEST_CASE("negative lexicon evidence flips a near-uniform score to negative") {
    SentimentScores s;
    s.neg = 0.32;
    s.neu = 0.35;
    s.pos = 0.33;
    auto c = apply_correction(s, -0.8, 1.0);
    CHECK(c.neg > c.neu);
    CHECK(c.neg > c.pos);
}

TEST_CASE("p_pos strictly increases in L, p_neg strictly decreases") {
    SentimentScores s;
    s.neg = 0.3;
    s.neu = 0.4;
    s.pos = 0.3;
    double prev_pos = -1.0, prev_neg = 2.0;
    for (double L = -1.0; L <= 1.0 + 1e-12; L += 0.25) {
        auto c = apply_correction(s, L, 1.0);
        CHECK(c.pos > prev_pos);
        CHECK(c.neg < prev_neg);
        CHECK(std::fabs(c.sum() - 1.0) <= 1e-9);
        CHECK(c.neg >= 0.0);
        CHECK(c.neu >= 0.0);
        CHECK(c.pos >= 0.0);
        prev_pos = c.pos;
        prev_neg = c.neg;
    }
}

TEST_CASE("bundled lexicons load and cover all variants") {
    auto lex = load_lexicons({testsupport::data_path("lexicon/singlish.tsv"),
                              testsupport::data_path("lexicon/sinhala.tsv"),
                              testsupport::data_path("lexicon/codemix.tsv")});
    CHECK(lex.size() >= 20);
    CHECK(lex.has_romanized_hit(words({"app", "eka", "lag", "wenawa"})));
    CHECK_FALSE(lex.has_romanized_hit(words({"plain", "english", "sentence"})));
}
