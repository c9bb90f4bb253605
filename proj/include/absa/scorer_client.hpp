#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "absa/classify.hpp"

namespace absa {

/// Where an out-of-process scorer lives: either a command to spawn (stdio
/// line protocol) or a TCP host:port. Exactly one must be set.
struct AdapterEndpoint {
    std::vector<std::string> argv;  // child-process mode
    std::string host;               // TCP mode
    int port = 0;
    double timeout_seconds = 10.0;
    bool concurrency_safe = false;

    bool is_command() const { return !argv.empty(); }
    std::string describe() const;
};

/// Line-protocol client for an external sentiment scorer. A version
/// handshake is exchanged on connect; each score call is one request and
/// one matching response. Calls are serialized internally.
class ExternalScorer : public ScorerBackend {
public:
    explicit ExternalScorer(AdapterEndpoint endpoint);
    ~ExternalScorer() override;
    ExternalScorer(const ExternalScorer&) = delete;
    ExternalScorer& operator=(const ExternalScorer&) = delete;

    const std::string& name() const override { return name_; }
    SentimentScores score(const std::string& text) const override;
    bool concurrency_safe() const override { return endpoint_.concurrency_safe; }

private:
    void connect();
    void write_line(const std::string& line) const;
    std::string read_line() const;
    [[noreturn]] void fail(const std::string& why) const;

    AdapterEndpoint endpoint_;
    std::string name_;
    int in_fd_ = -1;   // read from scorer
    int out_fd_ = -1;  // write to scorer
    long child_pid_ = -1;
    mutable std::string buffer_;
    mutable std::mutex io_mutex_;
    mutable unsigned long long next_id_ = 0;
};

/// One-shot convenience: connect, handshake, score, tear down.
SentimentScores external_score(const AdapterEndpoint& endpoint, const std::string& text);

}  // namespace absa
