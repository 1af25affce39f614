#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>

#include "bm25inject/errors.hpp"
#include "bm25inject/scorer_input.hpp"
#include "bm25inject/synthetic_scorer.hpp"
#include "bm25inject/wire_protocol.hpp"

namespace bm25inject {

/// Scores batches of pairs. Implementations return one score per input, in
/// input order, or throw transport_error.
class scorer {
  public:
    scorer() = default;
    scorer(const scorer&) = delete;
    auto operator=(const scorer&) -> scorer& = delete;
    virtual ~scorer() = default;

    [[nodiscard]] virtual auto score_batch(std::span<const ScorerInput> batch) -> std::vector<double> = 0;

    /// Whether score_batch may be called from several threads at once.
    [[nodiscard]] virtual auto concurrent() const noexcept -> bool { return false; }
};

class synthetic_scorer final : public scorer {
  public:
    explicit synthetic_scorer(double pair_hash_weight = 0.0) : m_hash_weight(pair_hash_weight) {}

    [[nodiscard]] auto score_batch(std::span<const ScorerInput> batch) -> std::vector<double> override
    {
        std::vector<double> out;
        out.reserve(batch.size());
        for (auto const& in : batch) {
            out.push_back(synthetic_score(in, m_hash_weight));
        }
        return out;
    }

    [[nodiscard]] auto concurrent() const noexcept -> bool override { return true; }

  private:
    double m_hash_weight;
};

/// POSTs batches to `<base>/score` (or to the URL's own path when given).
class http_scorer final : public scorer {
  public:
    explicit http_scorer(std::string_view url, std::chrono::milliseconds timeout = std::chrono::seconds(60))
        : m_timeout(timeout)
    {
        constexpr std::string_view scheme = "http://";
        if (url.substr(0, scheme.size()) != scheme) {
            throw usage_error("scorer url must start with http:// (got '" + std::string(url) + "')");
        }
        auto slash = url.find('/', scheme.size());
        m_origin = std::string(url.substr(0, slash));
        m_path = slash == std::string_view::npos ? std::string{} : std::string(url.substr(slash));
        if (m_path.empty() || m_path == "/") {
            m_path = "/score";
        }
        if (m_origin.size() == scheme.size()) {
            throw usage_error("scorer url has no host");
        }
    }

    [[nodiscard]] auto score_batch(std::span<const ScorerInput> batch) -> std::vector<double> override
    {
        httplib::Client client(m_origin);
        client.set_connection_timeout(m_timeout);
        client.set_read_timeout(m_timeout);
        client.set_write_timeout(m_timeout);
        auto res = client.Post(m_path, wire::encode_score_request(batch), "application/json");
        if (!res) {
            throw transport_error("scorer " + m_origin + m_path
                                      + " unreachable: " + httplib::to_string(res.error()),
                                  wire::detail::ids_of(batch));
        }
        if (res->status != 200) {
            throw transport_error("scorer " + m_origin + m_path + " answered HTTP "
                                      + std::to_string(res->status),
                                  wire::detail::ids_of(batch));
        }
        return wire::decode_score_response(res->body, batch);
    }

    [[nodiscard]] auto concurrent() const noexcept -> bool override { return true; }

  private:
    std::string m_origin;
    std::string m_path;
    std::chrono::milliseconds m_timeout;
};

/// Runs `/bin/sh -c <command>` once and exchanges one JSON request line and
/// one JSON response line per batch over its stdin/stdout.
class stdio_scorer final : public scorer {
  public:
    explicit stdio_scorer(const std::string& command)
    {
        std::signal(SIGPIPE, SIG_IGN);
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0) {
            throw transport_error("cannot create pipe for scorer process", {});
        }
        if (::pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw transport_error("cannot create pipe for scorer process", {});
        }
        m_pid = ::fork();
        if (m_pid < 0) {
            throw transport_error("cannot fork scorer process", {});
        }
        if (m_pid == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
        ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
        m_to = ::fdopen(to_child[1], "w");
        m_from = ::fdopen(from_child[0], "r");
        m_command = command;
    }

    stdio_scorer(const stdio_scorer&) = delete;
    auto operator=(const stdio_scorer&) -> stdio_scorer& = delete;

    ~stdio_scorer() override
    {
        if (m_to != nullptr) {
            std::fclose(m_to);
        }
        if (m_from != nullptr) {
            std::fclose(m_from);
        }
        if (m_pid > 0) {
            int status = 0;
            ::waitpid(m_pid, &status, 0);
        }
    }

    [[nodiscard]] auto score_batch(std::span<const ScorerInput> batch) -> std::vector<double> override
    {
        std::lock_guard lock(m_mutex);
        auto fail = [&](const std::string& why) {
            return transport_error("stdio scorer '" + m_command + "': " + why, wire::detail::ids_of(batch));
        };
        if (m_to == nullptr || m_from == nullptr) {
            throw fail("process not running");
        }
        auto line = wire::encode_score_request(batch);
        line += '\n';
        if (std::fwrite(line.data(), 1, line.size(), m_to) != line.size() || std::fflush(m_to) != 0) {
            throw fail("write failed");
        }
        std::string reply;
        int c = 0;
        while ((c = std::fgetc(m_from)) != EOF && c != '\n') {
            reply += static_cast<char>(c);
        }
        if (c == EOF && reply.empty()) {
            throw fail("process closed its output");
        }
        return wire::decode_score_response(reply, batch);
    }

  private:
    std::string m_command;
    pid_t m_pid = -1;
    std::FILE* m_to = nullptr;
    std::FILE* m_from = nullptr;
    std::mutex m_mutex;
};

/// Which scorer to use and how to batch calls to it.
struct ScorerHandle {
    enum class Kind { synthetic, http, stdio };

    Kind kind = Kind::synthetic;
    std::string endpoint;  ///< URL (http) or shell command (stdio)
    std::size_t batch_size = 32;
    std::size_t max_in_flight = 4;
    std::chrono::milliseconds timeout = std::chrono::seconds(60);
    double synthetic_hash_weight = 0.0;
};

/// Parses `synthetic`, `http:<url>`, a bare `http://...` URL, or `stdio:<command>`.
[[nodiscard]] inline auto parse_scorer_spec(std::string_view spec) -> ScorerHandle
{
    ScorerHandle h;
    if (spec == "synthetic") {
        return h;
    }
    if (spec.substr(0, 7) == "http://") {
        h.kind = ScorerHandle::Kind::http;
        h.endpoint = std::string(spec);
        return h;
    }
    if (spec.substr(0, 5) == "http:") {
        h.kind = ScorerHandle::Kind::http;
        h.endpoint = std::string(spec.substr(5));
        if (h.endpoint.substr(0, 7) != "http://") {
            h.endpoint = "http://" + h.endpoint;
        }
        return h;
    }
    if (spec.substr(0, 6) == "stdio:" && spec.size() > 6) {
        h.kind = ScorerHandle::Kind::stdio;
        h.endpoint = std::string(spec.substr(6));
        return h;
    }
    throw usage_error("unknown scorer '" + std::string(spec) + "' (synthetic | http:<url> | stdio:<cmd>)");
}

[[nodiscard]] inline auto make_scorer(const ScorerHandle& handle) -> std::unique_ptr<scorer>
{
    switch (handle.kind) {
    case ScorerHandle::Kind::synthetic: return std::make_unique<synthetic_scorer>(handle.synthetic_hash_weight);
    case ScorerHandle::Kind::http: return std::make_unique<http_scorer>(handle.endpoint, handle.timeout);
    case ScorerHandle::Kind::stdio: return std::make_unique<stdio_scorer>(handle.endpoint);
    }
    throw usage_error("unknown scorer kind");
}

/// Scores all inputs in batches of at most `batch_size`, running up to
/// `max_in_flight` batches concurrently when the scorer allows it. Either
/// every score is returned (aligned with `inputs`) or the first failed
/// batch's transport_error is rethrown.
[[nodiscard]] inline auto score_all(scorer& s, std::span<const ScorerInput> inputs, std::size_t batch_size,
                                    std::size_t max_in_flight = 1) -> std::vector<double>
{
    if (batch_size == 0) {
        throw usage_error("scorer batch size must be positive");
    }
    std::vector<double> scores(inputs.size(), 0.0);
    std::size_t batches = (inputs.size() + batch_size - 1) / batch_size;
    std::vector<std::exception_ptr> errors(batches);

    auto run_batch = [&](std::size_t b) {
        auto first = b * batch_size;
        auto count = std::min(batch_size, inputs.size() - first);
        auto slice = inputs.subspan(first, count);
        try {
            auto got = s.score_batch(slice);
            if (got.size() != count) {
                throw transport_error("scorer returned " + std::to_string(got.size()) + " scores for "
                                          + std::to_string(count) + " pairs",
                                      wire::detail::ids_of(slice));
            }
            std::copy(got.begin(), got.end(), scores.begin() + static_cast<std::ptrdiff_t>(first));
        } catch (...) {
            errors[b] = std::current_exception();
        }
    };

    std::size_t workers = s.concurrent() ? std::min(std::max<std::size_t>(max_in_flight, 1), batches) : 1;
    if (workers <= 1) {
        for (std::size_t b = 0; b < batches; ++b) {
            run_batch(b);
            if (errors[b]) {
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (auto b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) {
                    run_batch(b);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (auto const& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return scores;
}

}  // namespace bm25inject
