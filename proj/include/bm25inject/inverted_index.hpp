#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/tokenizer.hpp"

namespace bm25inject {

struct Posting {
    std::uint32_t doc = 0;  ///< internal document index
    std::uint32_t tf = 0;

    friend auto operator==(const Posting&, const Posting&) -> bool = default;
};

struct Document {
    std::string doc_id;
    std::string text;
};

class index_builder;

/// Immutable term -> postings map with the collection statistics BM25 needs
/// and the raw passage text for re-ranking. Postings of each term are sorted
/// by internal document index. Safe for concurrent readers.
class InvertedIndex {
  public:
    static constexpr int format_version = 1;

    InvertedIndex() = default;

    [[nodiscard]] auto doc_count() const noexcept -> std::size_t { return m_doc_ids.size(); }
    [[nodiscard]] auto avg_doc_length() const noexcept -> double { return m_avg_length; }
    [[nodiscard]] auto vocabulary_size() const noexcept -> std::size_t { return m_postings.size(); }
    [[nodiscard]] auto tokenizer() const noexcept -> const TokenizerConfig& { return m_tokenizer; }

    [[nodiscard]] auto postings(std::string_view term) const -> std::span<const Posting>
    {
        auto it = m_postings.find(std::string(term));
        if (it == m_postings.end()) {
            return {};
        }
        return it->second;
    }

    [[nodiscard]] auto doc_frequency(std::string_view term) const -> std::size_t
    {
        return postings(term).size();
    }

    [[nodiscard]] auto find_doc(std::string_view doc_id) const -> std::optional<std::uint32_t>
    {
        auto it = m_doc_lookup.find(std::string(doc_id));
        if (it == m_doc_lookup.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Internal index of `doc_id`; throws data_error for unknown ids.
    [[nodiscard]] auto doc_index(std::string_view doc_id) const -> std::uint32_t
    {
        auto idx = find_doc(doc_id);
        if (!idx) {
            throw data_error("unknown doc id '" + std::string(doc_id) + "'");
        }
        return *idx;
    }

    [[nodiscard]] auto doc_id(std::uint32_t idx) const -> const std::string& { return m_doc_ids.at(idx); }
    [[nodiscard]] auto doc_length(std::uint32_t idx) const -> std::uint32_t { return m_doc_lengths.at(idx); }
    [[nodiscard]] auto doc_text(std::uint32_t idx) const -> const std::string& { return m_doc_texts.at(idx); }

    /// Term frequency of `term` in document `idx` (0 if absent).
    [[nodiscard]] auto term_frequency(std::string_view term, std::uint32_t idx) const -> std::uint32_t
    {
        auto list = postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), idx,
                                   [](const Posting& p, std::uint32_t d) { return p.doc < d; });
        return (it != list.end() && it->doc == idx) ? it->tf : 0;
    }

    /// All terms in ascending byte order.
    [[nodiscard]] auto sorted_terms() const -> std::vector<std::string>
    {
        std::vector<std::string> terms;
        terms.reserve(m_postings.size());
        for (auto const& [term, _] : m_postings) {
            terms.push_back(term);
        }
        std::sort(terms.begin(), terms.end());
        return terms;
    }

    void save(std::ostream& out) const;
    [[nodiscard]] static auto load(std::istream& in) -> InvertedIndex;

  private:
    friend class index_builder;

    void finalize_stats()
    {
        std::uint64_t total = 0;
        for (auto len : m_doc_lengths) {
            total += len;
        }
        m_avg_length = m_doc_lengths.empty()
            ? 0.0
            : static_cast<double>(total) / static_cast<double>(m_doc_lengths.size());
        m_doc_lookup.clear();
        m_doc_lookup.reserve(m_doc_ids.size());
        for (std::uint32_t i = 0; i < m_doc_ids.size(); ++i) {
            m_doc_lookup.emplace(m_doc_ids[i], i);
        }
    }

    TokenizerConfig m_tokenizer;
    std::unordered_map<std::string, std::vector<Posting>> m_postings;
    std::vector<std::string> m_doc_ids;
    std::vector<std::uint32_t> m_doc_lengths;
    std::vector<std::string> m_doc_texts;
    std::unordered_map<std::string, std::uint32_t> m_doc_lookup;
    double m_avg_length = 0.0;
};

/// Single-writer incremental construction; documents may be streamed in.
class index_builder {
  public:
    explicit index_builder(TokenizerConfig cfg = {}) { m_index.m_tokenizer = std::move(cfg); }

    /// Throws data_error on a repeated doc id.
    void add(std::string doc_id, std::string text)
    {
        auto idx = static_cast<std::uint32_t>(m_index.m_doc_ids.size());
        if (!m_index.m_doc_lookup.emplace(doc_id, idx).second) {
            throw data_error("duplicate doc id '" + doc_id + "'");
        }
        std::unordered_map<std::string, std::uint32_t> counts;
        std::uint32_t length = 0;
        for_each_token(text, m_index.m_tokenizer, [&](std::string tok) {
            ++counts[std::move(tok)];
            ++length;
        });
        for (auto& [term, tf] : counts) {
            m_index.m_postings[term].push_back(Posting{idx, tf});
        }
        m_index.m_doc_ids.push_back(std::move(doc_id));
        m_index.m_doc_lengths.push_back(length);
        m_index.m_doc_texts.push_back(std::move(text));
    }

    [[nodiscard]] auto finish() && -> InvertedIndex
    {
        m_index.finalize_stats();
        return std::move(m_index);
    }

  private:
    InvertedIndex m_index;
};

/// Builds an index over `docs`. Throws data_error identifying a duplicate id.
[[nodiscard]] inline auto build_index(std::span<const Document> docs, const TokenizerConfig& cfg = {})
    -> InvertedIndex
{
    index_builder builder(cfg);
    for (auto const& d : docs) {
        builder.add(d.doc_id, d.text);
    }
    return std::move(builder).finish();
}

namespace detail {

inline auto escape_field(std::string_view s) -> std::string
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

inline auto unescape_field(std::string_view s) -> std::string
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) {
            throw data_error("index file: dangling escape");
        }
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: throw data_error("index file: bad escape sequence");
        }
    }
    return out;
}

inline auto split_tabs(std::string_view line) -> std::vector<std::string_view>
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) {
            return fields;
        }
        start = tab + 1;
    }
}

template <typename Int>
auto parse_uint(std::string_view s, const char* what) -> Int
{
    if (s.empty() || s.size() > 19
        || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw data_error(std::string("index file: bad ") + what + " '" + std::string(s) + "'");
    }
    std::uint64_t v = 0;
    for (char c : s) {
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        throw data_error(std::string("index file: ") + what + " out of range");
    }
    return static_cast<Int>(v);
}

}  // namespace detail

// Line-oriented format, one record per line, TAB-separated, fields escaped
// (\\ \t \n \r):
//   bm25inject-index <version>
//   tokenizer <lowercase 0|1> <none|porter> <stopword>...
//   docs <N>
//   <doc_id> <length> <text>          (N lines, internal index order)
//   terms <V>
//   <term> <df> <doc>:<tf> ...        (V lines, terms in byte order; postings space-separated)
//   end
inline void InvertedIndex::save(std::ostream& out) const
{
    out << "bm25inject-index\t" << format_version << '\n';
    out << "tokenizer\t" << (m_tokenizer.lowercase ? 1 : 0) << '\t'
        << (m_tokenizer.stemming == Stemming::porter ? "porter" : "none");
    for (auto const& w : m_tokenizer.stopwords) {
        out << '\t' << detail::escape_field(w);
    }
    out << '\n';
    out << "docs\t" << m_doc_ids.size() << '\n';
    for (std::size_t i = 0; i < m_doc_ids.size(); ++i) {
        out << detail::escape_field(m_doc_ids[i]) << '\t' << m_doc_lengths[i] << '\t'
            << detail::escape_field(m_doc_texts[i]) << '\n';
    }
    out << "terms\t" << m_postings.size() << '\n';
    for (auto const& term : sorted_terms()) {
        auto const& list = m_postings.at(term);
        out << detail::escape_field(term) << '\t' << list.size() << '\t';
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i > 0) {
                out << ' ';
            }
            out << list[i].doc << ':' << list[i].tf;
        }
        out << '\n';
    }
    out << "end\n";
    if (!out) {
        throw std::runtime_error("failed writing index");
    }
}

inline auto InvertedIndex::load(std::istream& in) -> InvertedIndex
{
    using detail::parse_uint;
    std::string line;
    auto next_line = [&](const char* what) -> std::vector<std::string_view> {
        if (!std::getline(in, line)) {
            throw data_error(std::string("index file: truncated before ") + what);
        }
        return detail::split_tabs(line);
    };

    auto header = next_line("header");
    if (header.size() != 2 || header[0] != "bm25inject-index") {
        throw data_error("not a bm25inject index file");
    }
    if (parse_uint<int>(header[1], "version") != format_version) {
        throw data_error("unsupported index format version " + std::string(header[1]));
    }

    InvertedIndex index;
    auto tok = next_line("tokenizer");
    if (tok.size() < 3 || tok[0] != "tokenizer" || (tok[1] != "0" && tok[1] != "1")
        || (tok[2] != "none" && tok[2] != "porter")) {
        throw data_error("index file: bad tokenizer record");
    }
    index.m_tokenizer.lowercase = tok[1] == "1";
    index.m_tokenizer.stemming = tok[2] == "porter" ? Stemming::porter : Stemming::none;
    for (std::size_t i = 3; i < tok.size(); ++i) {
        index.m_tokenizer.stopwords.insert(detail::unescape_field(tok[i]));
    }

    auto docs = next_line("docs");
    if (docs.size() != 2 || docs[0] != "docs") {
        throw data_error("index file: bad docs record");
    }
    auto n = parse_uint<std::uint32_t>(docs[1], "doc count");
    index.m_doc_ids.reserve(n);
    index.m_doc_lengths.reserve(n);
    index.m_doc_texts.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto f = next_line("doc record");
        if (f.size() != 3) {
            throw data_error("index file: bad doc record " + std::to_string(i));
        }
        index.m_doc_ids.push_back(detail::unescape_field(f[0]));
        index.m_doc_lengths.push_back(parse_uint<std::uint32_t>(f[1], "doc length"));
        index.m_doc_texts.push_back(detail::unescape_field(f[2]));
    }

    auto terms = next_line("terms");
    if (terms.size() != 2 || terms[0] != "terms") {
        throw data_error("index file: bad terms record");
    }
    auto v = parse_uint<std::size_t>(terms[1], "term count");
    std::vector<std::uint64_t> length_check(n, 0);
    index.m_postings.reserve(v);
    for (std::size_t t = 0; t < v; ++t) {
        auto f = next_line("term record");
        if (f.size() != 3) {
            throw data_error("index file: bad term record " + std::to_string(t));
        }
        auto df = parse_uint<std::size_t>(f[1], "df");
        std::vector<Posting> list;
        list.reserve(df);
        std::string_view rest = f[2];
        while (!rest.empty()) {
            auto sp = rest.find(' ');
            auto item = rest.substr(0, sp);
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
            auto colon = item.find(':');
            if (colon == std::string_view::npos) {
                throw data_error("index file: bad posting '" + std::string(item) + "'");
            }
            Posting p{parse_uint<std::uint32_t>(item.substr(0, colon), "posting doc"),
                      parse_uint<std::uint32_t>(item.substr(colon + 1), "posting tf")};
            if (p.doc >= n || p.tf == 0 || (!list.empty() && list.back().doc >= p.doc)) {
                throw data_error("index file: invalid posting list for term record "
                                 + std::to_string(t));
            }
            length_check[p.doc] += p.tf;
            list.push_back(p);
        }
        if (list.size() != df) {
            throw data_error("index file: df mismatch for term record " + std::to_string(t));
        }
        if (!index.m_postings.emplace(detail::unescape_field(f[0]), std::move(list)).second) {
            throw data_error("index file: repeated term record " + std::to_string(t));
        }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        if (length_check[i] != index.m_doc_lengths[i]) {
            throw data_error("index file: length of doc '" + index.m_doc_ids[i]
                             + "' disagrees with its postings");
        }
    }
    auto end = next_line("end marker");
    if (end.size() != 1 || end[0] != "end") {
        throw data_error("index file: missing end marker");
    }
    index.finalize_stats();
    if (index.m_doc_lookup.size() != index.m_doc_ids.size()) {
        throw data_error("index file: duplicate doc ids");
    }
    return index;
}

}  // namespace bm25inject
