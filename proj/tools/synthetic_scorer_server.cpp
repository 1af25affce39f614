// Reference implementation of the /score wire protocol backed by the
// deterministic synthetic scorer. Serves HTTP (--port) or answers one JSON
// request per stdin line (--stdio). Useful for exercising the re-ranking
// pipeline without a model.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "bm25inject/synthetic_scorer.hpp"
#include "bm25inject/wire_protocol.hpp"

namespace {

using namespace bm25inject;

auto answer(const std::string& body) -> std::string
{
    auto pairs = wire::decode_score_request(body);
    std::vector<wire::ScoreReply> replies;
    replies.reserve(pairs.size());
    for (auto const& p : pairs) {
        replies.push_back({p.pair_id, synthetic_score(p)});
    }
    return wire::encode_score_response(replies);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"synthetic /score protocol server"};
    int port = 0;
    std::string host = "127.0.0.1";
    bool stdio = false;
    app.add_option("--port", port, "HTTP port");
    app.add_option("--host", host);
    app.add_flag("--stdio", stdio, "serve one JSON request per stdin line");
    CLI11_PARSE(app, argc, argv);

    if (stdio) {
        std::string line;
        while (std::getline(std::cin, line)) {
            try {
                std::cout << answer(line) << '\n' << std::flush;
            } catch (const std::exception& e) {
                std::cerr << "bad request: " << e.what() << '\n';
                std::cout << "{}\n" << std::flush;
            }
        }
        return 0;
    }
    if (port <= 0) {
        std::cerr << "--port or --stdio is required\n";
        return 1;
    }
    httplib::Server server;
    server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(answer(req.body), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
    });
    std::cerr << "listening on http://" << host << ":" << port << "/score\n";
    return server.listen(host, port) ? 0 : 1;
}
