#include "tweetit/pipeline.hpp"

#include "tweetit/errors.hpp"

#include "doctest.h"
#include "support/fixtures.hpp"

#include <fstream>

using namespace tweetit;
using namespace tweetit::test;

namespace {

// Three admitted profiles with decreasing news overlap, two news articles.
void write_small_corpus(const fs::path& root) {
    const fs::path tweets = root / "tweets";
    const fs::path news = root / "news";
    fs::create_directories(tweets);
    fs::create_directories(news);

    std::string alice;
    alice += tweet_line("a1", "alice", "election taxes reform budget", 50, 10, 1000);
    alice += tweet_line("a2", "alice", "parliament vote taxes", 40, 20, 2000);
    alice += tweet_line("a3", "alice", "budget deficit economy", 5, 5, 3000);
    write_text(tweets / "alice.jsonl", alice);

    std::string bob;
    bob += tweet_line("b1", "bob", "football score taxes", 9, 1, 1500);
    bob += tweet_line("b2", "bob", "match highlights replay", 7, 3, 2500);
    write_text(tweets / "bob.jsonl", bob);

    std::string carol;
    carol += tweet_line("c1", "carol", "guitar rehearsal tonight", 90, 90, 1200);
    write_text(tweets / "carol.jsonl", carol);

    write_text(tweets / "meta.jsonl",
               meta_line("alice", 10000) + meta_line("bob", 8000) + meta_line("carol", 7000));

    write_text(news / "n1.txt", "election budget taxes parliament");
    write_text(news / "n2.txt", "economy deficit vote taxes");
}

PipelineConfig small_config(const fs::path& root, const fs::path& out) {
    PipelineConfig config;
    config.tweets_path = root / "tweets";
    config.news_path = root / "news";
    config.output_dir = out;
    return config;
}

} // namespace

TEST_CASE("run_pipeline writes the full artifact set and ranks by overlap") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    const PipelineConfig config = small_config(tmp.path, tmp.path / "out");

    const PipelineResult result = run_pipeline(config);

    REQUIRE(result.ranking.ranked.size() == 3);
    CHECK(result.ranking.ranked[0].handle == "alice");
    CHECK(result.ranking.ranked[0].similarity > result.ranking.ranked[1].similarity);
    CHECK(result.ranking.ranked[2].handle == "carol");
    CHECK(result.ranking.ranked[2].similarity == 0.0);

    // terms are grouped in rank order and only cover shared vocabulary
    REQUIRE(result.terms.size() == 3);
    CHECK(result.terms[0].handle == "alice");
    CHECK(!result.terms[0].terms.empty());
    CHECK(result.terms[2].terms.empty()); // carol shares nothing

    CHECK(result.report.profiles_loaded == 3);
    CHECK(result.report.lines_skipped == 0);

    for (const auto name : {kRankingCsvFile, kRankingJsonFile, kTermsCsvFile, kTermsJsonFile,
                            kIngestReportFile, kIndexFile}) {
        CHECK(fs::exists(config.output_dir / name));
    }
    // no staging or temp debris
    for (const auto& entry : fs::directory_iterator(config.output_dir)) {
        CHECK(entry.path().filename().string().find(".staging") == std::string::npos);
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
    }
}

TEST_CASE("rerunning on unchanged inputs is byte-identical") {
    TempDir tmp;
    write_small_corpus(tmp.path);

    run_pipeline(small_config(tmp.path, tmp.path / "out1"));
    run_pipeline(small_config(tmp.path, tmp.path / "out2"));

    for (const auto name : {kRankingCsvFile, kRankingJsonFile, kTermsCsvFile, kTermsJsonFile,
                            kIngestReportFile, kIndexFile}) {
        CHECK(slurp(tmp.path / "out1" / name) == slurp(tmp.path / "out2" / name));
    }
}

TEST_CASE("worker count does not change any output byte") {
    TempDir tmp;
    write_small_corpus(tmp.path);

    PipelineConfig serial = small_config(tmp.path, tmp.path / "w1");
    serial.workers = 1;
    PipelineConfig parallel = small_config(tmp.path, tmp.path / "w4");
    parallel.workers = 4;
    run_pipeline(serial);
    run_pipeline(parallel);

    for (const auto name : {kRankingCsvFile, kRankingJsonFile, kTermsCsvFile, kTermsJsonFile,
                            kIngestReportFile, kIndexFile}) {
        CHECK(slurp(tmp.path / "w1" / name) == slurp(tmp.path / "w4" / name));
    }
}

TEST_CASE("zero admitted profiles aborts with a filter-stage error") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    PipelineConfig config = small_config(tmp.path, tmp.path / "out");
    config.ingest.min_followers = 10'000'000;
    CHECK_THROWS_WITH_AS(run_pipeline(config),
                         doctest::Contains("no profiles admitted"), ConfigError);
    CHECK_FALSE(fs::exists(config.output_dir / kRankingCsvFile));
}

TEST_CASE("index round-trips losslessly and detects edits") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    PipelineConfig config = small_config(tmp.path, tmp.path / "out");

    IngestReport report;
    const CorpusIndex index = build_index(config, report);
    const fs::path file = tmp.path / "index.json";
    save_index(index, file);

    SUBCASE("load(save(x)) == x") {
        const CorpusIndex loaded = load_index(file);
        CHECK(loaded == index);
    }
    SUBCASE("editing an input triggers the stale-index error") {
        std::ofstream touch(tmp.path / "tweets" / "alice.jsonl", std::ios::app);
        touch << tweet_line("a4", "alice", "brand new tweet", 1, 1, 4000);
        touch.close();
        CHECK_THROWS_AS(load_index(file), StaleIndexError);
    }
    SUBCASE("deleting an input triggers the stale-index error") {
        fs::remove_all(tmp.path / "news");
        CHECK_THROWS_AS(load_index(file), StaleIndexError);
    }
    SUBCASE("missing index file is an I/O error") {
        CHECK_THROWS_AS(load_index(tmp.path / "nope.json"), IoError);
    }
    SUBCASE("format version mismatch is a stale-index error") {
        std::string text = slurp(file);
        const auto pos = text.find("\"version\": 1");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 12, "\"version\": 9");
        write_text(file, text);
        CHECK_THROWS_AS(load_index(file), StaleIndexError);
    }
    SUBCASE("corrupt json is a config error") {
        write_text(file, "{not json");
        CHECK_THROWS_AS(load_index(file), ConfigError);
    }
}

TEST_CASE("rank stage from a loaded index equals the full pipeline") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    const PipelineConfig config = small_config(tmp.path, tmp.path / "out");
    const PipelineResult full = run_pipeline(config);

    const CorpusIndex loaded = load_index(config.output_dir / kIndexFile);
    const RankOutputs staged = rank_from_index(loaded, config.terms_k);

    CHECK(ranking_to_csv(staged.ranking) == slurp(config.output_dir / kRankingCsvFile));
    CHECK(ranking_to_json(staged.ranking) == slurp(config.output_dir / kRankingJsonFile));
    CHECK(staged.ranking == full.ranking);
    CHECK(staged.terms == full.terms);
}

TEST_CASE("config digest tracks config values and nothing else") {
    PipelineConfig a;
    a.tweets_path = "t";
    a.news_path = "n";
    PipelineConfig b = a;
    CHECK(config_digest(a) == config_digest(b));

    b.selection.top_k = 123;
    CHECK(config_digest(a) != config_digest(b));

    b = a;
    b.ingest.language_code = "fr";
    CHECK(config_digest(a) != config_digest(b));

    b = a;
    b.query_top_terms = 10;
    CHECK(config_digest(a) != config_digest(b));

    // execution parameters do not define the corpus
    b = a;
    b.workers = 8;
    b.output_dir = "elsewhere";
    CHECK(config_digest(a) == config_digest(b));
}

TEST_CASE("top_m_terms keeps the m most frequent terms") {
    TokenStream tokens;
    tokens.tokens = {"b", "a", "a", "c", "a", "b", "d"};
    const auto top2 = top_m_terms(tokens, 2);
    CHECK(top2 == std::set<std::string>{"a", "b"});
    const auto top3 = top_m_terms(tokens, 3);
    // c and d tie at 1; 'c' wins the tie alphabetically
    CHECK(top3 == std::set<std::string>{"a", "b", "c"});
    CHECK(top_m_terms(tokens, 100) == std::set<std::string>{"a", "b", "c", "d"});
    CHECK(top_m_terms(TokenStream{}, 5).empty());
}

TEST_CASE("query_top_terms truncates the query vector support") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    PipelineConfig config = small_config(tmp.path, tmp.path / "out");
    config.query_top_terms = 1;

    IngestReport report;
    const CorpusIndex index = build_index(config, report);
    CHECK(index.query_vector.entries.size() == 1);
    // "taxes" appears 3 times in the news, every other term at most once
    CHECK(index.vocabulary.terms[index.query_vector.entries[0].first] == "taxes");

    PipelineConfig full = small_config(tmp.path, tmp.path / "out2");
    IngestReport report2;
    const CorpusIndex untruncated = build_index(full, report2);
    CHECK(untruncated.query_vector.entries.size() > 1);
}

TEST_CASE("domain filter drops off-topic profiles in the pipeline") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    PipelineConfig config = small_config(tmp.path, tmp.path / "out");
    config.ingest.domain_filter_enabled = true;
    config.ingest.domain_overlap_threshold = 0.3;

    const PipelineResult result = run_pipeline(config);
    REQUIRE(result.ranking.ranked.size() == 1); // only alice clears 0.3 jaccard
    CHECK(result.ranking.ranked[0].handle == "alice");
}

TEST_CASE("recency bonus boosts terms from the newest tweets") {
    TempDir tmp;
    const fs::path tweets = tmp.path / "tweets";
    const fs::path news = tmp.path / "news";
    // 10 tweets: the newest (decile = 1 tweet) carries "fresh", older ones
    // carry "stale" many times; both terms appear once in the news.
    std::string lines;
    for (int i = 0; i < 9; ++i) {
        lines += tweet_line("t" + std::to_string(i), "dave", "stale stale stale", 5, 5, 1000 + i);
    }
    lines += tweet_line("t9", "dave", "fresh fresh", 5, 5, 5000);
    lines += meta_line("dave", 9000);
    write_text(tweets / "dave.jsonl", lines);
    write_text(news / "n.txt", "fresh stale");

    PipelineConfig config;
    config.tweets_path = tweets;
    config.news_path = news;
    config.output_dir = tmp.path / "out";

    const PipelineResult plain = run_pipeline(config);
    REQUIRE(plain.terms.size() == 1);
    REQUIRE(plain.terms[0].terms.size() == 2);
    CHECK(plain.terms[0].terms[0].term == "stale"); // 27 occurrences beat 2

    config.output_dir = tmp.path / "out-boost";
    config.terms_recency_bonus = 50.0;
    const PipelineResult boosted = run_pipeline(config);
    REQUIRE(boosted.terms[0].terms.size() == 2);
    CHECK(boosted.terms[0].terms[0].term == "fresh"); // decile boost flips the order
}

TEST_CASE("pipeline config validation rejects out-of-range values") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    PipelineConfig config = small_config(tmp.path, tmp.path / "out");

    PipelineConfig bad = config;
    bad.selection.top_k = 0;
    CHECK_THROWS_AS(run_pipeline(bad), ConfigError);

    bad = config;
    bad.ingest.ascii_ratio_threshold = 1.5;
    CHECK_THROWS_AS(run_pipeline(bad), ConfigError);

    bad = config;
    bad.terms_k = 0;
    CHECK_THROWS_AS(run_pipeline(bad), ConfigError);

    bad = config;
    bad.workers = 0;
    CHECK_THROWS_AS(run_pipeline(bad), ConfigError);

    bad = config;
    bad.query_top_terms = 0;
    CHECK_THROWS_AS(run_pipeline(bad), ConfigError);

    bad = config;
    bad.tweets_path = tmp.path / "missing";
    CHECK_THROWS_AS(run_pipeline(bad), IoError);
}

TEST_CASE("stopword and acronym files feed the pipeline") {
    TempDir tmp;
    write_small_corpus(tmp.path);
    write_text(tmp.path / "stop.txt", "taxes\n");
    write_text(tmp.path / "acronyms.json", R"({"budget": "fiscal plan"})");

    PipelineConfig config = small_config(tmp.path, tmp.path / "out");
    config.stopword_path = tmp.path / "stop.txt";
    config.acronym_path = tmp.path / "acronyms.json";

    IngestReport report;
    const CorpusIndex index = build_index(config, report);
    CHECK_FALSE(index.vocabulary.index_of("taxes").has_value()); // stopped everywhere
    CHECK_FALSE(index.vocabulary.index_of("budget").has_value()); // expanded away
    CHECK(index.vocabulary.index_of("fiscal").has_value());

    // the extra input files are digested for staleness
    CHECK(index.provenance.inputs.size() == 4);
    save_index(index, tmp.path / "index.json");
    write_text(tmp.path / "stop.txt", "taxes\nbudget\n");
    CHECK_THROWS_AS(load_index(tmp.path / "index.json"), StaleIndexError);
}
