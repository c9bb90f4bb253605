#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "absa/scorer_client.hpp"
#include "support.hpp"

using namespace absa;

namespace {

AdapterEndpoint stub_endpoint(std::vector<std::string> extra = {}) {
    AdapterEndpoint ep;
    ep.argv = {testsupport::stub_scorer_path()};
    for (auto& a : extra) ep.argv.push_back(std::move(a));
    return ep;
}

}  // namespace

TEST_CASE("echo stub passes probabilities through bit-exactly") {
    auto ep = stub_endpoint();
    auto s = external_score(ep, "probs=0.2,0.3,0.5");
    CHECK(s.neg == 0.2);
    CHECK(s.neu == 0.3);
    CHECK(s.pos == 0.5);
}

TEST_CASE("a persistent scorer answers repeated requests in order") {
    ExternalScorer scorer(stub_endpoint());
    // triples chosen to sum to exactly 1.0 in double arithmetic
    auto a = scorer.score("probs=0.2,0.3,0.5");
    auto b = scorer.score("probs=0.5,0.25,0.25");
    auto c = scorer.score("plain text");
    CHECK(a.pos == 0.5);
    CHECK(b.neg == 0.5);
    CHECK(c.neg == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("near-simplex responses are renormalized within tolerance") {
    // 0.2 + 0.3 + 0.5000001 is off by 1e-7, inside the 1e-6 gate
    auto ep = stub_endpoint({"--probs", "0.2,0.3,0.5000001"});
    auto s = external_score(ep, "x");
    CHECK(std::fabs(s.sum() - 1.0) <= 1e-12);
    CHECK(s.pos == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("non-simplex responses are rejected with the values") {
    auto ep = stub_endpoint({"--invalid"});
    CHECK_THROWS_WITH_AS(external_score(ep, "x"), doctest::Contains("non-simplex"),
                         std::runtime_error);
}

TEST_CASE("negative probabilities are non-simplex") {
    auto ep = stub_endpoint({"--probs=-0.1,0.6,0.5"});
    CHECK_THROWS_WITH_AS(external_score(ep, "x"), doctest::Contains("non-simplex"),
                         std::runtime_error);
}

TEST_CASE("timeouts name the endpoint") {
    auto ep = stub_endpoint({"--delay-ms", "3000"});
    ep.timeout_seconds = 0.3;
    CHECK_THROWS_WITH_AS(external_score(ep, "x"), doctest::Contains("timeout"),
                         std::runtime_error);
    try {
        external_score(ep, "x");
        FAIL("expected a timeout");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(testsupport::stub_scorer_path()) != std::string::npos);
    }
}

TEST_CASE("a scorer that hangs up is reported as closed") {
    auto ep = stub_endpoint({"--hangup"});
    CHECK_THROWS_WITH_AS(external_score(ep, "x"), doctest::Contains("closed"),
                         std::runtime_error);
}

TEST_CASE("protocol version mismatches are refused") {
    auto ep = stub_endpoint({"--proto", "2"});
    CHECK_THROWS_WITH_AS(external_score(ep, "x"), doctest::Contains("version"),
                         std::runtime_error);
}

TEST_CASE("unlaunchable commands fail with the endpoint name") {
    AdapterEndpoint ep;
    ep.argv = {"/nonexistent/scorer-binary"};
    ep.timeout_seconds = 2.0;
    CHECK_THROWS_AS(external_score(ep, "x"), std::runtime_error);
}

TEST_CASE("tcp endpoints work end to end") {
    // pick an uncommon fixed port; the stub binds loopback
    const int port = 47113;
    std::string cmd = testsupport::stub_scorer_path() + " --listen " + std::to_string(port) +
                      " >/dev/null 2>&1 &";
    REQUIRE(std::system(cmd.c_str()) == 0);

    AdapterEndpoint ep;
    ep.host = "127.0.0.1";
    ep.port = port;
    ep.timeout_seconds = 5.0;

    // the stub needs a moment to bind; retry briefly
    SentimentScores s;
    bool ok = false;
    for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
        try {
            s = external_score(ep, "probs=0.25,0.25,0.5");
            ok = true;
        } catch (const std::exception&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
    }
    REQUIRE(ok);
    CHECK(s.neg == 0.25);
    CHECK(s.pos == 0.5);
}

TEST_CASE("unreachable tcp endpoints time out with the endpoint name") {
    AdapterEndpoint ep;
    ep.host = "127.0.0.1";
    ep.port = 47999;  // nothing listens here
    ep.timeout_seconds = 0.5;
    try {
        external_score(ep, "x");
        FAIL("expected a connection failure");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("47999") != std::string::npos);
    }
}
