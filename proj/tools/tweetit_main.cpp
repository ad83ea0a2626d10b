// tweetit — batch corpus analytics over archived tweets: scores tweets by
// attention, builds per-profile documents, ranks profiles against an
// aggregated news query document by TF-IDF cosine similarity, and reports the
// influential terms behind each match.
//
// Exit codes: 0 success, 1 usage error, 2 data/config error, 3 I/O error.

#include "tweetit/errors.hpp"
#include "tweetit/pipeline.hpp"
#include "tweetit/util.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tweetit;

namespace {

struct CommonFlags {
    std::string tweets_dir;
    std::string news_dir;
    std::string out_dir;
    std::string config_file;
    std::string stopword_file;
    std::string acronym_file;
    std::uint32_t top_k = 0;
    std::uint32_t terms_k = 0;
    std::int64_t min_followers = -1;
    std::string lang;
    bool domain_filter = false;
    std::uint32_t query_top_terms = 0;
    unsigned workers = 0;
};

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

// Config file mirrors PipelineConfig tunables; input/output paths stay on the
// command line.
void apply_config_file(PipelineConfig& config, const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("invalid config file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config file must hold a JSON object: " + path.string());
    }
    expect_keys(doc,
                {"ingest", "selection", "stopword_path", "acronym_path", "query_top_terms",
                 "terms_k", "terms_recency_bonus", "workers"},
                path.string());
    try {
        if (doc.contains("ingest")) {
            const auto& ingest = doc["ingest"];
            expect_keys(ingest,
                        {"min_followers", "language_code", "ascii_ratio_threshold",
                         "domain_filter_enabled", "domain_overlap_threshold",
                         "domain_top_m_terms"},
                        path.string() + " ingest");
            if (ingest.contains("min_followers")) {
                config.ingest.min_followers = ingest["min_followers"].get<std::int64_t>();
            }
            if (ingest.contains("language_code")) {
                config.ingest.language_code = ingest["language_code"].get<std::string>();
            }
            if (ingest.contains("ascii_ratio_threshold")) {
                config.ingest.ascii_ratio_threshold =
                    ingest["ascii_ratio_threshold"].get<double>();
            }
            if (ingest.contains("domain_filter_enabled")) {
                config.ingest.domain_filter_enabled =
                    ingest["domain_filter_enabled"].get<bool>();
            }
            if (ingest.contains("domain_overlap_threshold")) {
                config.ingest.domain_overlap_threshold =
                    ingest["domain_overlap_threshold"].get<double>();
            }
            if (ingest.contains("domain_top_m_terms")) {
                config.ingest.domain_top_m_terms =
                    ingest["domain_top_m_terms"].get<std::uint32_t>();
            }
        }
        if (doc.contains("selection")) {
            expect_keys(doc["selection"], {"top_k"}, path.string() + " selection");
            if (doc["selection"].contains("top_k")) {
                config.selection.top_k = doc["selection"]["top_k"].get<std::uint32_t>();
            }
        }
        if (doc.contains("stopword_path")) {
            config.stopword_path = doc["stopword_path"].get<std::string>();
        }
        if (doc.contains("acronym_path")) {
            config.acronym_path = doc["acronym_path"].get<std::string>();
        }
        if (doc.contains("query_top_terms")) {
            config.query_top_terms = doc["query_top_terms"].get<std::uint32_t>();
        }
        if (doc.contains("terms_k")) config.terms_k = doc["terms_k"].get<std::uint32_t>();
        if (doc.contains("terms_recency_bonus")) {
            config.terms_recency_bonus = doc["terms_recency_bonus"].get<double>();
        }
        if (doc.contains("workers")) config.workers = doc["workers"].get<unsigned>();
    } catch (const json::exception& e) {
        throw ConfigError("invalid value in config file " + path.string() + ": " + e.what());
    }
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
    const auto* option = cmd->get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
}

// Precedence: explicit flag > config file > built-in default.
PipelineConfig merge_config(const CommonFlags& flags, const CLI::App* cmd) {
    PipelineConfig config;
    if (flag_given(cmd, "--config")) {
        apply_config_file(config, flags.config_file);
    }
    if (flag_given(cmd, "--top-k")) config.selection.top_k = flags.top_k;
    if (flag_given(cmd, "--terms-k")) config.terms_k = flags.terms_k;
    if (flag_given(cmd, "--min-followers")) config.ingest.min_followers = flags.min_followers;
    if (flag_given(cmd, "--lang")) config.ingest.language_code = flags.lang;
    if (flag_given(cmd, "--domain-filter")) config.ingest.domain_filter_enabled = true;
    if (flag_given(cmd, "--query-top-terms")) config.query_top_terms = flags.query_top_terms;
    if (flag_given(cmd, "--workers")) config.workers = flags.workers;
    if (flag_given(cmd, "--stopwords")) config.stopword_path = flags.stopword_file;
    if (flag_given(cmd, "--acronyms")) config.acronym_path = flags.acronym_file;
    config.tweets_path = flags.tweets_dir;
    config.news_path = flags.news_dir;
    config.output_dir = flags.out_dir;
    return config;
}

void add_pipeline_flags(CLI::App* cmd, CommonFlags& flags, bool with_terms_k) {
    cmd->add_option("--tweets", flags.tweets_dir, "Directory of tweet archive JSONL files")
        ->required();
    cmd->add_option("--news", flags.news_dir, "Directory of news .txt/.jsonl files")->required();
    cmd->add_option("--out", flags.out_dir, "Output directory")->required();
    cmd->add_option("--config", flags.config_file, "JSON config file (flags win)");
    cmd->add_option("--top-k", flags.top_k, "Tweets kept per profile (default 1000)")
        ->check(CLI::PositiveNumber);
    if (with_terms_k) {
        cmd->add_option("--terms-k", flags.terms_k, "Influential terms per profile (default 5)")
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--min-followers", flags.min_followers,
                    "Popularity filter threshold (default 5000)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--lang", flags.lang, "Language code kept by the language filter");
    cmd->add_flag("--domain-filter", flags.domain_filter, "Enable the domain overlap filter");
    cmd->add_option("--query-top-terms", flags.query_top_terms,
                    "Restrict the query vector to its N top-weight terms")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", flags.workers, "Worker threads (default 1)")
        ->envname("TWEETIT_WORKERS")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stopwords", flags.stopword_file, "Stopword file, one term per line");
    cmd->add_option("--acronyms", flags.acronym_file, "Acronym dictionary JSON file");
}

void print_top10(const RankingResult& ranking) {
    std::printf("rank  handle\n");
    const std::size_t rows = std::min<std::size_t>(10, ranking.ranked.size());
    for (std::size_t i = 0; i < rows; ++i) {
        std::printf("%4zu  %s\n", i + 1, ranking.ranked[i].handle.c_str());
    }
}

int cmd_run(const CommonFlags& flags, const CLI::App* cmd) {
    const PipelineConfig config = merge_config(flags, cmd);
    const PipelineResult result = run_pipeline(config);
    print_top10(result.ranking);
    return 0;
}

int cmd_ingest(const CommonFlags& flags, const CLI::App* cmd) {
    const PipelineConfig config = merge_config(flags, cmd);
    IngestReport report;
    const CorpusIndex index = build_index(config, report);

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) {
        throw IoError("cannot create output directory: " + config.output_dir.string());
    }
    save_index(index, config.output_dir / kIndexFile);
    write_file_atomic(config.output_dir / kIngestReportFile, report.to_json());
    std::printf("profiles: %zu  vocabulary: %zu  index: %s\n", index.profile_vectors.size(),
                index.vocabulary.size(), (config.output_dir / kIndexFile).string().c_str());
    return 0;
}

int cmd_rank(const std::string& index_file, const std::string& out_dir, unsigned workers,
             std::uint32_t terms_k) {
    const CorpusIndex index = load_index(index_file);
    const RankOutputs outputs = rank_from_index(index, terms_k, workers);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory: " + out_dir);
    }
    write_file_atomic(fs::path(out_dir) / kRankingCsvFile, ranking_to_csv(outputs.ranking));
    write_file_atomic(fs::path(out_dir) / kRankingJsonFile, ranking_to_json(outputs.ranking));
    print_top10(outputs.ranking);
    return 0;
}

int cmd_top_terms(const std::string& index_file, const std::string& handle, std::uint32_t k) {
    const CorpusIndex index = load_index(index_file);
    const TfIdfVector* vec = index.find_profile(handle);
    if (!vec) {
        throw ConfigError("unknown handle: " + handle);
    }
    const auto terms = top_terms(*vec, index.query_vector, index.vocabulary, k);
    for (const auto& term : terms) {
        std::printf("%s %s\n", term.term.c_str(), format_fixed6(term.influence).c_str());
    }
    return 0;
}

int cmd_inspect(const std::string& index_file, const std::string& doc_id) {
    const CorpusIndex index = load_index(index_file);
    if (doc_id.empty()) {
        std::printf("corpus_size: %u\nvocabulary: %zu terms\ndocuments:\n",
                    index.vocabulary.corpus_size, index.vocabulary.size());
        std::printf("  %s\n", std::string(kQueryDocId).c_str());
        for (const auto& vec : index.profile_vectors) {
            std::printf("  %s\n", vec.doc_id.c_str());
        }
        return 0;
    }
    const TfIdfVector* vec =
        doc_id == kQueryDocId ? &index.query_vector : index.find_profile(doc_id);
    if (!vec) {
        throw ConfigError("unknown document id: " + doc_id);
    }
    auto rows = vec->entries;
    std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return index.vocabulary.terms[a.first] < index.vocabulary.terms[b.first];
    });
    std::printf("term,weight\n");
    for (const auto& [term_index, weight] : rows) {
        std::printf("%s,%s\n", csv_field(index.vocabulary.terms[term_index]).c_str(),
                    format_fixed6(weight).c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ranks archived Twitter profiles against a news query document"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Full pipeline: ingest, rank, extract terms");
    add_pipeline_flags(run, run_flags, true);

    CommonFlags ingest_flags;
    CLI::App* ingest = app.add_subcommand("ingest", "Build and save the corpus index only");
    add_pipeline_flags(ingest, ingest_flags, false);

    std::string rank_index, rank_out;
    std::uint32_t rank_terms_k = 5;
    unsigned rank_workers = 1;
    CLI::App* rank = app.add_subcommand("rank", "Rank profiles from a saved index");
    rank->add_option("--index", rank_index, "Index file written by ingest/run")->required();
    rank->add_option("--out", rank_out, "Output directory")->required();
    rank->add_option("--workers", rank_workers, "Worker threads")
        ->envname("TWEETIT_WORKERS")
        ->check(CLI::PositiveNumber);

    std::string tt_index, tt_handle;
    std::uint32_t tt_k = 5;
    CLI::App* top = app.add_subcommand("top-terms", "Influential terms for one profile");
    top->add_option("--index", tt_index, "Index file")->required();
    top->add_option("--handle", tt_handle, "Profile handle")->required();
    top->add_option("--k", tt_k, "Terms to print (default 5)")->check(CLI::PositiveNumber);

    std::string ins_index, ins_doc;
    CLI::App* inspect = app.add_subcommand("inspect", "Dump a document's sparse vector");
    inspect->add_option("--index", ins_index, "Index file")->required();
    inspect->add_option("--doc", ins_doc, "Document id (a handle, or the query document)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, run);
        if (ingest->parsed()) return cmd_ingest(ingest_flags, ingest);
        if (rank->parsed()) return cmd_rank(rank_index, rank_out, rank_workers, rank_terms_k);
        if (top->parsed()) return cmd_top_terms(tt_index, tt_handle, tt_k);
        if (inspect->parsed()) return cmd_inspect(ins_index, ins_doc);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
