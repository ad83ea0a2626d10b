#pragma once

#include "tweetit/attention.hpp"
#include "tweetit/corpus.hpp"
#include "tweetit/rank.hpp"
#include "tweetit/terms.hpp"
#include "tweetit/vectorize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetit {

inline constexpr int kIndexFormatVersion = 1;

// Reserved doc id for the aggregated news document; cannot collide with
// profile handles.
inline constexpr std::string_view kQueryDocId = "__query__";

struct PipelineConfig {
    IngestConfig ingest;
    SelectionConfig selection;
    std::optional<std::filesystem::path> stopword_path;
    std::optional<std::filesystem::path> acronym_path;
    std::optional<std::uint32_t> query_top_terms;
    std::uint32_t terms_k = 5;
    double terms_recency_bonus = 0.0; // 0 disables the boost
    std::filesystem::path tweets_path;
    std::filesystem::path news_path;
    std::filesystem::path output_dir;
    unsigned workers = 1;

    bool operator==(const PipelineConfig&) const = default;
};

struct InputDigest {
    std::string path;
    std::string digest;

    bool operator==(const InputDigest&) const = default;
};

// Identifies what an index was built from. The config digest covers every
// corpus-defining value; output_dir and workers are excluded because they do
// not affect the result.
struct Provenance {
    std::string config_digest;
    std::vector<InputDigest> inputs;

    bool operator==(const Provenance&) const = default;
};

// Persisted bundle of vocabulary, all document vectors and provenance,
// enabling deterministic stage reruns. profile_vectors are sorted by doc_id.
struct CorpusIndex {
    Vocabulary vocabulary;
    std::vector<TfIdfVector> profile_vectors;
    TfIdfVector query_vector;
    Provenance provenance;

    const TfIdfVector* find_profile(std::string_view handle) const;

    bool operator==(const CorpusIndex&) const = default;
};

struct PipelineResult {
    RankingResult ranking;
    std::vector<ProfileTerms> terms;
    IngestReport report;
};

// Digest of every corpus-defining config value, canonical text form.
std::string config_digest(const PipelineConfig& config);

// Digests tweets dir, news dir and the optional stopword/acronym files.
std::vector<InputDigest> digest_inputs(const PipelineConfig& config);

// The query corpus's M highest-raw-frequency terms (ties: term ascending),
// used as the domain filter's reference vocabulary.
std::set<std::string> top_m_terms(const TokenStream& tokens, std::uint32_t m);

// Runs ingest -> filters -> attention selection -> preprocessing ->
// vectorization and assembles the index. `report` receives ingest counters.
CorpusIndex build_index(const PipelineConfig& config, IngestReport& report);

// Full batch run. Writes ranking.csv/.json, terms.csv/.json,
// ingest_report.json and index.json under output_dir; every file is staged
// and renamed so no partial artifact is ever visible. Rerunning on unchanged
// inputs and config is byte-identical.
PipelineResult run_pipeline(const PipelineConfig& config);

void save_index(const CorpusIndex& index, const std::filesystem::path& path);

// Verifies the format version and re-digests the recorded inputs; a mismatch
// throws StaleIndexError.
CorpusIndex load_index(const std::filesystem::path& path);

struct RankOutputs {
    RankingResult ranking;
    std::vector<ProfileTerms> terms;
};

// The rank and terms stages alone, from a prebuilt index. Produces outputs
// identical to the full pipeline's. The recency boost is not available here:
// the index does not carry per-tweet provenance.
RankOutputs rank_from_index(const CorpusIndex& index, std::uint32_t terms_k, unsigned workers = 1);

// Output file names under output_dir.
inline constexpr std::string_view kRankingCsvFile = "ranking.csv";
inline constexpr std::string_view kRankingJsonFile = "ranking.json";
inline constexpr std::string_view kTermsCsvFile = "terms.csv";
inline constexpr std::string_view kTermsJsonFile = "terms.json";
inline constexpr std::string_view kIngestReportFile = "ingest_report.json";
inline constexpr std::string_view kIndexFile = "index.json";

} // namespace tweetit
