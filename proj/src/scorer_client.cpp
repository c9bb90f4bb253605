#include "absa/scorer_client.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace absa {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    return left.count() > 0 ? static_cast<int>(left.count()) : 0;
}

}  // namespace

std::string AdapterEndpoint::describe() const {
    if (is_command()) {
        std::string s = argv[0];
        for (std::size_t i = 1; i < argv.size(); ++i) s += " " + argv[i];
        return s;
    }
    return host + ":" + std::to_string(port);
}

ExternalScorer::ExternalScorer(AdapterEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.is_command() == (!endpoint_.host.empty() || endpoint_.port != 0))
        throw std::invalid_argument("scorer endpoint needs exactly one of command or host:port");
    if (endpoint_.is_command()) {
        auto base = endpoint_.argv[0];
        auto slash = base.find_last_of('/');
        if (slash != std::string::npos) base = base.substr(slash + 1);
        name_ = "external:" + base;
    } else {
        name_ = "external:" + endpoint_.describe();
    }
    connect();
}

ExternalScorer::~ExternalScorer() {
    if (out_fd_ >= 0) close(out_fd_);
    if (in_fd_ >= 0 && in_fd_ != out_fd_) close(in_fd_);
    if (child_pid_ > 0) {
        // stdin is closed; give the child a moment to exit, then force it
        auto pid = static_cast<pid_t>(child_pid_);
        int status = 0;
        for (int i = 0; i < 20; ++i) {
            if (waitpid(pid, &status, WNOHANG) == pid) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
    }
}

void ExternalScorer::fail(const std::string& why) const {
    throw std::runtime_error(why + ": " + endpoint_.describe());
}

void ExternalScorer::connect() {
    if (endpoint_.is_command()) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            fail("cannot create pipes for external scorer");
        pid_t pid = fork();
        if (pid < 0) fail("cannot fork external scorer");
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            std::vector<char*> argv;
            argv.reserve(endpoint_.argv.size() + 1);
            for (auto& a : endpoint_.argv) argv.push_back(const_cast<char*>(a.c_str()));
            argv.push_back(nullptr);
            execvp(argv[0], argv.data());
            const char* msg = "exec failed\n";
            ssize_t n = write(STDERR_FILENO, msg, strlen(msg));
            (void)n;
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        out_fd_ = to_child[1];
        in_fd_ = from_child[0];
        child_pid_ = pid;
        signal(SIGPIPE, SIG_IGN);
    } else {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        auto service = std::to_string(endpoint_.port);
        int rc = getaddrinfo(endpoint_.host.c_str(), service.c_str(), &hints, &res);
        if (rc != 0) fail(std::string("cannot resolve external scorer host (") +
                          gai_strerror(rc) + ")");
        int fd = -1;
        std::string last_error = "no addresses";
        for (addrinfo* ai = res; ai; ai = ai->ai_next) {
            fd = socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
            if (fd < 0) continue;
            if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
            if (errno == EINPROGRESS) {
                pollfd pfd{fd, POLLOUT, 0};
                int ready = poll(&pfd, 1,
                                 static_cast<int>(endpoint_.timeout_seconds * 1000));
                if (ready > 0) {
                    int err = 0;
                    socklen_t len = sizeof(err);
                    getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                    if (err == 0) break;
                    last_error = strerror(err);
                } else {
                    last_error = "connect timeout";
                }
            } else {
                last_error = strerror(errno);
            }
            close(fd);
            fd = -1;
        }
        freeaddrinfo(res);
        if (fd < 0) fail("cannot connect to external scorer (" + last_error + ")");
        in_fd_ = out_fd_ = fd;
        signal(SIGPIPE, SIG_IGN);
    }

    write_line(json{{"proto", 1}}.dump());
    std::string hello = read_line();
    json obj;
    try {
        obj = json::parse(hello);
    } catch (const json::exception&) {
        fail("bad handshake from external scorer: \"" + hello + "\"");
    }
    if (!obj.is_object() || !obj.contains("proto") || obj["proto"] != 1)
        fail("protocol version mismatch from external scorer (expected {\"proto\":1}, got \"" +
             hello + "\")");
}

void ExternalScorer::write_line(const std::string& line) const {
    std::string data = line + "\n";
    std::size_t off = 0;
    auto deadline = Clock::now() +
                    std::chrono::milliseconds(
                        static_cast<long>(endpoint_.timeout_seconds * 1000));
    while (off < data.size()) {
        pollfd pfd{out_fd_, POLLOUT, 0};
        int ready = poll(&pfd, 1, remaining_ms(deadline));
        if (ready == 0)
            fail("external scorer timeout after " + std::to_string(endpoint_.timeout_seconds) +
                 "s (write)");
        if (ready < 0) {
            if (errno == EINTR) continue;
            fail(std::string("write to external scorer failed (") + strerror(errno) + ")");
        }
        ssize_t n = write(out_fd_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) continue;
            fail(std::string("write to external scorer failed (") + strerror(errno) + ")");
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string ExternalScorer::read_line() const {
    auto deadline = Clock::now() +
                    std::chrono::milliseconds(
                        static_cast<long>(endpoint_.timeout_seconds * 1000));
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        pollfd pfd{in_fd_, POLLIN, 0};
        int ready = poll(&pfd, 1, remaining_ms(deadline));
        if (ready == 0)
            fail("external scorer timeout after " + std::to_string(endpoint_.timeout_seconds) +
                 "s");
        if (ready < 0) {
            if (errno == EINTR) continue;
            fail(std::string("read from external scorer failed (") + strerror(errno) + ")");
        }
        char chunk[4096];
        ssize_t n = read(in_fd_, chunk, sizeof(chunk));
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) continue;
            fail(std::string("read from external scorer failed (") + strerror(errno) + ")");
        }
        if (n == 0) fail("external scorer closed the connection");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

SentimentScores ExternalScorer::score(const std::string& text) const {
    std::lock_guard<std::mutex> lock(io_mutex_);
    std::string id = "q" + std::to_string(next_id_++);
    write_line(json{{"id", id}, {"text", text}}.dump());
    std::string line = read_line();
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::exception& e) {
        fail(std::string("malformed response from external scorer (") + e.what() + ")");
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("probs"))
        fail("malformed response from external scorer: \"" + line + "\"");
    if (obj["id"] != id)
        fail("response id mismatch from external scorer (sent \"" + id + "\")");
    const auto& probs = obj["probs"];
    if (!probs.is_array() || probs.size() != 3 || !probs[0].is_number() ||
        !probs[1].is_number() || !probs[2].is_number())
        fail("malformed probs from external scorer: \"" + line + "\"");
    double p[3];
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        p[i] = probs[static_cast<std::size_t>(i)].get<double>();
        if (!std::isfinite(p[i])) fail("non-finite probability from external scorer");
        sum += p[i];
    }
    constexpr double tol = 1e-6;
    if (p[0] < -tol || p[1] < -tol || p[2] < -tol || std::abs(sum - 1.0) > tol)
        fail("non-simplex probabilities from external scorer [" + std::to_string(p[0]) + ", " +
             std::to_string(p[1]) + ", " + std::to_string(p[2]) + "]");
    for (double& v : p) v = std::max(v, 0.0);
    sum = p[0] + p[1] + p[2];
    return SentimentScores{p[0] / sum, p[1] / sum, p[2] / sum};
}

SentimentScores external_score(const AdapterEndpoint& endpoint, const std::string& text) {
    ExternalScorer scorer(endpoint);
    return scorer.score(text);
}

}  // namespace absa
