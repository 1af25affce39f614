#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/inverted_index.hpp"

using namespace bm25inject;

namespace {

auto three_docs() -> InvertedIndex
{
    std::vector<Document> docs = {{"1", "a b"}, {"2", "a a b c"}, {"3", "c d e f g h"}};
    return build_index(docs);
}

}  // namespace

TEST_CASE("collection statistics", "[index]")
{
    auto idx = three_docs();
    CHECK(idx.doc_count() == 3);
    CHECK(idx.avg_doc_length() == 4.0);
    CHECK(idx.vocabulary_size() == 8);
    CHECK(idx.doc_frequency("a") == 2);
    CHECK(idx.doc_frequency("zzz") == 0);
    CHECK(idx.postings("zzz").empty());
}

TEST_CASE("term frequencies are counted per document", "[index]")
{
    auto idx = build_index(std::vector<Document>{{"d", "a a b"}});
    auto list = idx.postings("a");
    REQUIRE(list.size() == 1);
    CHECK(list[0].tf == 2);
    CHECK(idx.term_frequency("b", 0) == 1);
    CHECK(idx.term_frequency("c", 0) == 0);
    CHECK(idx.doc_length(0) == 3);
    CHECK(idx.doc_text(0) == "a a b");
}

TEST_CASE("document lookup", "[index]")
{
    auto idx = three_docs();
    CHECK(idx.find_doc("2") == 1U);
    CHECK_FALSE(idx.find_doc("9").has_value());
    CHECK_THROWS_AS((void)idx.doc_index("9"), data_error);
    CHECK(idx.doc_id(2) == "3");
}

TEST_CASE("duplicate ids are rejected", "[index]")
{
    std::vector<Document> docs = {{"7", "x"}, {"7", "y"}};
    CHECK_THROWS_AS(build_index(docs), data_error);
}

TEST_CASE("empty collection", "[index]")
{
    auto idx = build_index(std::vector<Document>{});
    CHECK(idx.doc_count() == 0);
    CHECK(idx.avg_doc_length() == 0.0);
    CHECK(idx.vocabulary_size() == 0);
}

TEST_CASE("save and load round-trip", "[index]")
{
    TokenizerConfig cfg;
    cfg.stemming = Stemming::porter;
    cfg.stopwords = {"the"};
    std::vector<Document> docs = {
        {"10", "The running\tdogs"}, {"2", "back\\slash and\nnewline"}, {"abc", "caf\xC3\xA9 dogs"}};
    auto idx = build_index(docs, cfg);

    std::stringstream first;
    idx.save(first);
    auto loaded = InvertedIndex::load(first);

    CHECK(loaded.tokenizer() == cfg);
    CHECK(loaded.doc_count() == idx.doc_count());
    CHECK(loaded.avg_doc_length() == idx.avg_doc_length());
    CHECK(loaded.sorted_terms() == idx.sorted_terms());
    for (std::uint32_t d = 0; d < idx.doc_count(); ++d) {
        CHECK(loaded.doc_id(d) == idx.doc_id(d));
        CHECK(loaded.doc_text(d) == idx.doc_text(d));
        CHECK(loaded.doc_length(d) == idx.doc_length(d));
    }
    for (auto const& t : idx.sorted_terms()) {
        auto a = idx.postings(t);
        auto b = loaded.postings(t);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].doc == b[i].doc);
            CHECK(a[i].tf == b[i].tf);
        }
    }

    std::stringstream second;
    loaded.save(second);
    std::stringstream again;
    idx.save(again);
    CHECK(second.str() == again.str());
}

TEST_CASE("load rejects damaged files", "[index]")
{
    std::stringstream good;
    three_docs().save(good);
    auto text = good.str();

    auto load_text = [](const std::string& s) {
        std::istringstream in(s);
        return InvertedIndex::load(in);
    };
    CHECK_NOTHROW(load_text(text));
    CHECK_THROWS_AS(load_text(""), data_error);
    CHECK_THROWS_AS(load_text("not-an-index\t1\n"), data_error);
    CHECK_THROWS_AS(load_text(text.substr(0, text.size() / 2)), data_error);

    auto bad_version = text;
    bad_version.replace(bad_version.find("\t1\n"), 3, "\t9\n");
    CHECK_THROWS_AS(load_text(bad_version), data_error);

    // a posting whose tf no longer sums to the stored document length
    auto pos = text.find("\nh\t");
    REQUIRE(pos != std::string::npos);
    auto bad_tf = text;
    auto colon = bad_tf.find(":1", pos);
    bad_tf.replace(colon, 2, ":2");
    CHECK_THROWS_AS(load_text(bad_tf), data_error);
}
