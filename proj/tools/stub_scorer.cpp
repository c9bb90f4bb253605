// Test double for the external scorer protocol: newline-delimited JSON over
// stdio or a single accepted TCP connection. Replies with fixed, embedded
// ("probs=a,b,c" inside the text), or uniform probabilities.

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

int in_fd = 0;
int out_fd = 1;
std::string buffer;

bool read_line(std::string& line) {
    for (;;) {
        auto nl = buffer.find('\n');
        if (nl != std::string::npos) {
            line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            return true;
        }
        char chunk[4096];
        ssize_t n = ::read(in_fd, chunk, sizeof(chunk));
        if (n <= 0) return false;
        buffer.append(chunk, static_cast<size_t>(n));
    }
}

void write_line(const std::string& line) {
    std::string out = line + "\n";
    size_t done = 0;
    while (done < out.size()) {
        ssize_t n = ::write(out_fd, out.data() + done, out.size() - done);
        if (n <= 0) std::exit(1);
        done += static_cast<size_t>(n);
    }
}

bool parse_probs(const std::string& spec, std::array<double, 3>& probs) {
    return std::sscanf(spec.c_str(), "%lf,%lf,%lf", &probs[0], &probs[1], &probs[2]) == 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"line-protocol sentiment scorer stub"};
    std::string fixed;
    bool invalid = false;
    bool hangup = false;
    int delay_ms = 0;
    int proto = 1;
    int listen_port = -1;
    app.add_option("--probs", fixed, "always reply with these neg,neu,pos probabilities");
    app.add_flag("--invalid", invalid, "reply with a non-simplex vector");
    app.add_flag("--hangup", hangup, "close the connection after reading the first request");
    app.add_option("--delay-ms", delay_ms, "sleep this long before each reply");
    app.add_option("--proto", proto, "protocol version to announce");
    app.add_option("--listen", listen_port, "serve one TCP connection on this port");
    CLI11_PARSE(app, argc, argv);

    std::array<double, 3> fixed_probs{};
    if (!fixed.empty() && !parse_probs(fixed, fixed_probs)) {
        std::fprintf(stderr, "stub_scorer: --probs expects a,b,c\n");
        return 2;
    }

    if (listen_port >= 0) {
        int server = ::socket(AF_INET, SOCK_STREAM, 0);
        if (server < 0) return 2;
        int one = 1;
        ::setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(static_cast<uint16_t>(listen_port));
        if (::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
            ::listen(server, 1) != 0) {
            std::fprintf(stderr, "stub_scorer: cannot listen on port %d\n", listen_port);
            return 2;
        }
        int conn = ::accept(server, nullptr, nullptr);
        if (conn < 0) return 2;
        in_fd = out_fd = conn;
    }

    write_line(json{{"proto", proto}}.dump());

    std::string line;
    if (!read_line(line)) return 0;  // peer handshake
    try {
        json hello = json::parse(line);
        if (hello.value("proto", 0) != 1) {
            std::fprintf(stderr, "stub_scorer: unexpected handshake %s\n", line.c_str());
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stub_scorer: bad handshake: %s\n", e.what());
        return 2;
    }

    while (read_line(line)) {
        if (hangup) return 0;
        json request;
        try {
            request = json::parse(line);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "stub_scorer: bad request: %s\n", e.what());
            return 2;
        }
        if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));

        std::array<double, 3> probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        if (invalid) {
            probs = {0.9, 0.9, 0.9};
        } else if (!fixed.empty()) {
            probs = fixed_probs;
        } else {
            std::string text = request.value("text", "");
            auto at = text.find("probs=");
            std::array<double, 3> embedded{};
            if (at != std::string::npos && parse_probs(text.substr(at + 6), embedded))
                probs = embedded;
        }
        json response;
        response["id"] = request.value("id", "");
        response["probs"] = probs;
        write_line(response.dump());
    }
    return 0;
}
