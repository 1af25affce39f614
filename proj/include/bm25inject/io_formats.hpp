#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bm25inject/diagnostics.hpp"
#include "bm25inject/doc_id.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/inverted_index.hpp"
#include "bm25inject/qrels.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject::io {

namespace detail {

inline auto location(std::string_view source, std::size_t line) -> std::string
{
    return std::string(source) + ":" + std::to_string(line) + ": ";
}

inline void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

inline auto split_ws(std::string_view line) -> std::vector<std::string_view>
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
            ++pos;
        }
        auto start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
            ++pos;
        }
        if (pos > start) {
            out.push_back(line.substr(start, pos - start));
        }
    }
    return out;
}

inline auto open_in(const std::string& path) -> std::ifstream
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open '" + path + "' for reading");
    }
    return in;
}

inline auto parse_double(std::string_view s, double& out) -> bool
{
    // from_chars for double is not available in every libstdc++; strtod on a
    // bounded copy is.
    std::string buf(s);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return !buf.empty() && end == buf.c_str() + buf.size() && std::isfinite(out);
}

}  // namespace detail

/// Streams "id TAB text" records (collection.tsv, queries.tsv) to `sink`
/// one at a time. Empty lines are skipped. Throws data_error naming the line
/// on a missing TAB, an empty id, or a repeated id.
template <typename Sink>
void for_each_tsv_record(std::istream& in, std::string_view source, Sink&& sink)
{
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty()) {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw data_error(detail::location(source, lineno) + "expected 'id<TAB>text'");
        }
        std::string id = line.substr(0, tab);
        if (id.empty()) {
            throw data_error(detail::location(source, lineno) + "empty id");
        }
        if (!seen.insert(id).second) {
            throw data_error(detail::location(source, lineno) + "duplicate id '" + id + "'");
        }
        sink(Document{std::move(id), line.substr(tab + 1)}, lineno);
    }
}

[[nodiscard]] inline auto read_collection_tsv(std::istream& in, std::string_view source = "<collection>")
    -> std::vector<Document>
{
    std::vector<Document> docs;
    for_each_tsv_record(in, source, [&](Document d, std::size_t) { docs.push_back(std::move(d)); });
    return docs;
}

[[nodiscard]] inline auto read_collection_tsv(const std::string& path) -> std::vector<Document>
{
    auto in = detail::open_in(path);
    return read_collection_tsv(in, path);
}

/// Builds an index straight from a collection file without holding the
/// parsed records.
[[nodiscard]] inline auto index_collection_tsv(const std::string& path, const TokenizerConfig& cfg)
    -> InvertedIndex
{
    auto in = detail::open_in(path);
    index_builder builder(cfg);
    for_each_tsv_record(in, path, [&](Document d, std::size_t) { builder.add(std::move(d.doc_id), std::move(d.text)); });
    return std::move(builder).finish();
}

using QueryTexts = std::map<std::string, std::string, IdLess>;

/// queries.tsv: same layout as the collection (qid TAB text).
[[nodiscard]] inline auto read_queries_tsv(std::istream& in, std::string_view source = "<queries>") -> QueryTexts
{
    QueryTexts out;
    for_each_tsv_record(in, source, [&](Document d, std::size_t) { out.emplace(std::move(d.doc_id), std::move(d.text)); });
    return out;
}

[[nodiscard]] inline auto read_queries_tsv(const std::string& path) -> QueryTexts
{
    auto in = detail::open_in(path);
    return read_queries_tsv(in, path);
}

/// TREC qrels: "qid iteration docid grade", whitespace separated.
[[nodiscard]] inline auto read_qrels(std::istream& in, std::string_view source = "<qrels>") -> Qrels
{
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        auto f = detail::split_ws(line);
        if (f.empty()) {
            continue;
        }
        if (f.size() != 4) {
            throw data_error(detail::location(source, lineno) + "expected 'qid iter docid grade'");
        }
        int grade = 0;
        auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), grade);
        if (ec != std::errc{} || ptr != f[3].data() + f[3].size()) {
            throw data_error(detail::location(source, lineno) + "grade '" + std::string(f[3])
                             + "' is not an integer");
        }
        try {
            qrels.add(std::string(f[0]), std::string(f[2]), grade);
        } catch (const data_error& err) {
            throw data_error(detail::location(source, lineno) + err.what());
        }
    }
    return qrels;
}

[[nodiscard]] inline auto read_qrels(const std::string& path) -> Qrels
{
    auto in = detail::open_in(path);
    return read_qrels(in, path);
}

/// "%.6f" rendering used for run-file scores.
[[nodiscard]] inline auto format_score(double score) -> std::string
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

/// TREC run lines "qid Q0 docid rank score tag", queries in ascending id
/// order, entries in list order with rank = position.
inline void write_trec_run(std::ostream& out, const RunSet& runs, std::string_view tag)
{
    if (tag.empty() || tag.find_first_of(" \t\n") != std::string_view::npos) {
        throw usage_error("run tag must be a non-empty word");
    }
    for (auto const& [qid, list] : runs) {
        std::size_t rank = 0;
        for (auto const& e : list.entries) {
            out << qid << " Q0 " << e.doc_id << ' ' << ++rank << ' ' << format_score(e.score) << ' ' << tag
                << '\n';
        }
    }
}

inline void write_trec_run(const std::string& path, const RunSet& runs, std::string_view tag)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw data_error("cannot open '" + path + "' for writing");
    }
    write_trec_run(out, runs, tag);
    out.flush();
    if (!out) {
        throw data_error("failed writing '" + path + "'");
    }
}

/// Inverse of write_trec_run. Entries are ordered by score descending, then
/// by the file's rank, then by doc id; a warning is emitted when the file's
/// line order disagrees with that order.
[[nodiscard]] inline auto read_trec_run(std::istream& in, std::string_view source = "<run>",
                                        const warning_sink& on_warning = {}) -> RunSet
{
    struct row {
        RankedEntry entry;
        long long rank;
    };
    std::map<std::string, std::vector<row>, IdLess> by_query;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        auto f = detail::split_ws(line);
        if (f.empty()) {
            continue;
        }
        if (f.size() != 6) {
            throw data_error(detail::location(source, lineno) + "expected 'qid Q0 docid rank score tag'");
        }
        long long rank = 0;
        auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), rank);
        if (ec != std::errc{} || ptr != f[3].data() + f[3].size() || rank < 1) {
            throw data_error(detail::location(source, lineno) + "bad rank '" + std::string(f[3]) + "'");
        }
        double score = 0.0;
        if (!detail::parse_double(f[4], score)) {
            throw data_error(detail::location(source, lineno) + "bad score '" + std::string(f[4]) + "'");
        }
        by_query[std::string(f[0])].push_back(row{RankedEntry{std::string(f[2]), score}, rank});
    }
    RunSet runs;
    for (auto& [qid, rows] : by_query) {
        auto before = [](const row& a, const row& b) {
            if (a.entry.score != b.entry.score) {
                return a.entry.score > b.entry.score;
            }
            if (a.rank != b.rank) {
                return a.rank < b.rank;
            }
            return id_less(a.entry.doc_id, b.entry.doc_id);
        };
        if (!std::is_sorted(rows.begin(), rows.end(), before)) {
            warn(on_warning, std::string(source) + ": query " + qid
                                 + " is not in score order; entries re-sorted");
            std::stable_sort(rows.begin(), rows.end(), before);
        }
        RankedList list{qid, {}};
        list.entries.reserve(rows.size());
        for (auto& r : rows) {
            list.entries.push_back(std::move(r.entry));
        }
        list.check_unique();
        runs.emplace(qid, std::move(list));
    }
    return runs;
}

[[nodiscard]] inline auto read_trec_run(const std::string& path, const warning_sink& on_warning = {}) -> RunSet
{
    auto in = detail::open_in(path);
    return read_trec_run(in, path, on_warning);
}

}  // namespace bm25inject::io
