#include "tweetit/pipeline.hpp"

#include "tweetit/errors.hpp"
#include "tweetit/preprocess.hpp"
#include "tweetit/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

namespace fs = std::filesystem;
using nlohmann::json;

namespace tweetit {

namespace {

// Deterministic scatter: fn(i) writes only slot i, so the merged result is
// independent of thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t used = std::min<std::size_t>(workers, n);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto run_range = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(used);
    const std::size_t chunk = (n + used - 1) / used;
    for (std::size_t t = 0; t < used; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back(run_range, begin, end);
    }
    for (auto& thread : threads) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

void validate_config(const PipelineConfig& config) {
    auto fail = [](const std::string& what) { throw ConfigError("[config] " + what); };
    if (config.ingest.min_followers < 0) fail("min_followers must be >= 0");
    if (config.ingest.language_code.empty()) fail("language_code must be non-empty");
    if (config.ingest.ascii_ratio_threshold < 0.0 || config.ingest.ascii_ratio_threshold > 1.0) {
        fail("ascii_ratio_threshold must be in [0,1]");
    }
    if (config.ingest.domain_overlap_threshold < 0.0 ||
        config.ingest.domain_overlap_threshold > 1.0) {
        fail("domain_overlap_threshold must be in [0,1]");
    }
    if (config.ingest.domain_top_m_terms == 0) fail("domain_top_m_terms must be >= 1");
    if (config.selection.top_k == 0) fail("top_k must be >= 1");
    if (config.terms_k == 0) fail("terms_k must be >= 1");
    if (config.query_top_terms && *config.query_top_terms == 0) {
        fail("query_top_terms must be >= 1 when set");
    }
    if (config.terms_recency_bonus < 0.0) fail("terms_recency_bonus must be >= 0");
    if (config.workers == 0) fail("workers must be >= 1");
    if (config.tweets_path.empty()) fail("tweets_path is required");
    if (config.news_path.empty()) fail("news_path is required");
}

Preprocessor make_preprocessor(const PipelineConfig& config) {
    Preprocessor pre;
    if (config.acronym_path) pre.acronyms = AcronymDictionary::load(*config.acronym_path);
    pre.stopwords = config.stopword_path ? load_stopwords(*config.stopword_path)
                                         : default_stopwords();
    return pre;
}

// Keeps the N highest-weight query entries (ties: index ascending) and
// recomputes the norm.
void truncate_query_vector(TfIdfVector& query, std::uint32_t keep) {
    if (query.entries.size() <= keep) return;
    std::vector<std::pair<std::uint32_t, double>> entries = query.entries;
    std::partial_sort(entries.begin(), entries.begin() + keep, entries.end(),
                      [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second > b.second;
                          return a.first < b.first;
                      });
    entries.resize(keep);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    query.entries = std::move(entries);
    query.norm = vector_norm(query.entries);
}

struct BuiltIndex {
    CorpusIndex index;
    // handle -> terms that appear in the newest decile of that profile's
    // selection; only populated when the recency bonus is enabled.
    std::unordered_map<std::string, std::unordered_set<std::uint32_t>> recent_terms;
};

std::unordered_set<std::string> recent_decile_terms(const ProfileDocument& doc) {
    const std::size_t n_tweets = doc.source_tweet_ids.size();
    if (n_tweets == 0) return {};
    const std::size_t decile = (n_tweets + 9) / 10;
    std::unordered_set<std::string> terms;
    std::size_t token_pos = 0;
    for (std::size_t t = 0; t < decile; ++t) {
        const std::size_t span = doc.tokens_per_tweet[t];
        for (std::size_t i = 0; i < span; ++i) {
            terms.insert(doc.tokens.tokens[token_pos + i]);
        }
        token_pos += span;
    }
    return terms;
}

BuiltIndex build_index_internal(const PipelineConfig& config, IngestReport& report) {
    validate_config(config);

    const Preprocessor pre = make_preprocessor(config);

    std::vector<ProfileRecord> profiles = load_profiles(config.tweets_path, config.ingest, report);
    const std::vector<NewsArticle> news = load_news(config.news_path);
    if (news.empty()) {
        throw ConfigError("[ingest] no news articles found in " + config.news_path.string());
    }
    const QueryDocument query_doc = build_query_document(news, pre.acronyms, pre.stopwords);

    profiles = popularity_filter(std::move(profiles), config.ingest);
    parallel_for(profiles.size(), config.workers, [&](std::size_t i) {
        profiles[i] = language_filter(std::move(profiles[i]), config.ingest);
    });
    if (config.ingest.domain_filter_enabled) {
        const std::set<std::string> news_vocab =
            top_m_terms(query_doc.tokens, config.ingest.domain_top_m_terms);
        profiles = domain_filter(std::move(profiles), news_vocab, config.ingest, pre);
    }
    if (profiles.empty()) {
        throw ConfigError("[filter] no profiles admitted");
    }

    // Attention selection + document assembly, then immediately reduce each
    // document to term counts so raw token streams never accumulate.
    const bool want_recency = config.terms_recency_bonus != 0.0;
    std::vector<DocumentTermCounts> counts(profiles.size());
    std::vector<std::unordered_set<std::string>> recent(want_recency ? profiles.size() : 0);
    parallel_for(profiles.size(), config.workers, [&](std::size_t i) {
        std::vector<ScoredTweet> selected = select_top_k(profiles[i].tweets, config.selection);
        profiles[i].tweets.clear();
        profiles[i].tweets.shrink_to_fit();
        std::vector<Tweet> tweets;
        tweets.reserve(selected.size());
        for (auto& scored : selected) tweets.push_back(std::move(scored.tweet));
        ProfileDocument doc =
            build_profile_document(profiles[i].handle, tweets, pre.acronyms, pre.stopwords);
        if (want_recency) recent[i] = recent_decile_terms(doc);
        counts[i] = DocumentTermCounts::from_tokens({doc.handle, std::move(doc.tokens)});
    });

    DocumentTermCounts query_counts =
        DocumentTermCounts::from_tokens({std::string(kQueryDocId), query_doc.tokens});

    std::vector<DocumentTermCounts> all_counts = counts;
    all_counts.push_back(query_counts);
    Vocabulary vocab = build_vocabulary_from_counts(all_counts);
    all_counts.clear();
    all_counts.shrink_to_fit();

    std::vector<TfIdfVector> vectors(counts.size());
    parallel_for(counts.size(), config.workers, [&](std::size_t i) {
        vectors[i] = vectorize_counts(counts[i], vocab);
    });
    TfIdfVector query_vec = vectorize_counts(query_counts, vocab);
    if (config.query_top_terms) {
        truncate_query_vector(query_vec, *config.query_top_terms);
    }

    std::sort(vectors.begin(), vectors.end(),
              [](const TfIdfVector& a, const TfIdfVector& b) { return a.doc_id < b.doc_id; });

    BuiltIndex built;
    built.index.vocabulary = std::move(vocab);
    built.index.profile_vectors = std::move(vectors);
    built.index.query_vector = std::move(query_vec);
    built.index.provenance.config_digest = config_digest(config);
    built.index.provenance.inputs = digest_inputs(config);

    if (want_recency) {
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            std::unordered_set<std::uint32_t> indices;
            indices.reserve(recent[i].size());
            for (const auto& term : recent[i]) {
                if (const auto idx = built.index.vocabulary.index_of(term)) {
                    indices.insert(*idx);
                }
            }
            built.recent_terms.emplace(profiles[i].handle, std::move(indices));
        }
    }
    return built;
}

std::vector<ProfileTerms> terms_for_ranking(
    const CorpusIndex& index, const RankingResult& ranking, std::uint32_t terms_k,
    double recency_bonus,
    const std::unordered_map<std::string, std::unordered_set<std::uint32_t>>* recent_terms) {
    std::vector<ProfileTerms> out;
    out.reserve(ranking.ranked.size());
    for (const auto& score : ranking.ranked) {
        const TfIdfVector* vec = index.find_profile(score.handle);
        ProfileTerms entry;
        entry.handle = score.handle;
        if (vec) {
            RecencyBoost boost;
            const RecencyBoost* boost_ptr = nullptr;
            if (recency_bonus != 0.0 && recent_terms) {
                if (const auto it = recent_terms->find(score.handle); it != recent_terms->end()) {
                    boost.bonus = recency_bonus;
                    boost.recent_term_indices = it->second;
                    boost_ptr = &boost;
                }
            }
            entry.terms = top_terms(*vec, index.query_vector, index.vocabulary, terms_k, boost_ptr);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::string index_to_json(const CorpusIndex& index) {
    std::string out;
    std::size_t estimate = 256;
    for (const auto& vec : index.profile_vectors) estimate += 32 + vec.entries.size() * 28;
    estimate += index.query_vector.entries.size() * 28 + index.vocabulary.size() * 20;
    out.reserve(estimate);

    out += "{\n  \"version\": ";
    out += std::to_string(kIndexFormatVersion);
    out += ",\n  \"provenance\": {\"config_digest\": ";
    append_json_string(out, index.provenance.config_digest);
    out += ", \"inputs\": [";
    for (std::size_t i = 0; i < index.provenance.inputs.size(); ++i) {
        if (i) out += ", ";
        out += "{\"path\": ";
        append_json_string(out, index.provenance.inputs[i].path);
        out += ", \"digest\": ";
        append_json_string(out, index.provenance.inputs[i].digest);
        out += "}";
    }
    out += "]},\n  \"corpus_size\": ";
    out += std::to_string(index.vocabulary.corpus_size);
    out += ",\n  \"vocabulary\": [";
    for (std::size_t i = 0; i < index.vocabulary.terms.size(); ++i) {
        if (i) out.push_back(',');
        out.push_back('[');
        append_json_string(out, index.vocabulary.terms[i]);
        out.push_back(',');
        out += std::to_string(index.vocabulary.document_frequency[i]);
        out.push_back(']');
    }
    out += "],\n  \"vectors\": [\n";
    auto append_vector = [&](const TfIdfVector& vec, bool last) {
        out += "    ";
        out += vector_dump_json(vec, index.vocabulary);
        out += last ? "\n" : ",\n";
    };
    append_vector(index.query_vector, index.profile_vectors.empty());
    for (std::size_t i = 0; i < index.profile_vectors.size(); ++i) {
        append_vector(index.profile_vectors[i], i + 1 == index.profile_vectors.size());
    }
    out += "  ]\n}\n";
    return out;
}

void check_freshness(const Provenance& provenance) {
    for (const auto& input : provenance.inputs) {
        std::string current;
        try {
            current = digest_path_hex(input.path);
        } catch (const IoError&) {
            throw StaleIndexError("stale index: input no longer readable: " + input.path);
        }
        if (current != input.digest) {
            throw StaleIndexError("stale index: input changed since the index was built: " +
                                  input.path);
        }
    }
}

} // namespace

const TfIdfVector* CorpusIndex::find_profile(std::string_view handle) const {
    const auto it = std::lower_bound(
        profile_vectors.begin(), profile_vectors.end(), handle,
        [](const TfIdfVector& vec, std::string_view target) { return vec.doc_id < target; });
    if (it == profile_vectors.end() || it->doc_id != handle) return nullptr;
    return &*it;
}

std::string config_digest(const PipelineConfig& config) {
    std::string canon;
    canon += "min_followers=" + std::to_string(config.ingest.min_followers);
    canon += ";language_code=" + config.ingest.language_code;
    canon += ";ascii_ratio_threshold=" + format_double(config.ingest.ascii_ratio_threshold);
    canon += ";domain_filter_enabled=" + std::to_string(config.ingest.domain_filter_enabled);
    canon += ";domain_overlap_threshold=" + format_double(config.ingest.domain_overlap_threshold);
    canon += ";domain_top_m_terms=" + std::to_string(config.ingest.domain_top_m_terms);
    canon += ";top_k=" + std::to_string(config.selection.top_k);
    canon += ";query_top_terms=" +
             (config.query_top_terms ? std::to_string(*config.query_top_terms) : "none");
    canon += ";terms_k=" + std::to_string(config.terms_k);
    canon += ";terms_recency_bonus=" + format_double(config.terms_recency_bonus);
    canon += ";stopword_source=" + std::string(config.stopword_path ? "file" : "default");
    canon += ";acronym_source=" + std::string(config.acronym_path ? "file" : "none");
    return hex64(fnv1a(canon));
}

std::vector<InputDigest> digest_inputs(const PipelineConfig& config) {
    auto entry = [](const fs::path& path) {
        const fs::path normalized = fs::absolute(path).lexically_normal();
        return InputDigest{normalized.generic_string(), digest_path_hex(normalized)};
    };
    std::vector<InputDigest> inputs;
    inputs.push_back(entry(config.tweets_path));
    inputs.push_back(entry(config.news_path));
    if (config.stopword_path) inputs.push_back(entry(*config.stopword_path));
    if (config.acronym_path) inputs.push_back(entry(*config.acronym_path));
    return inputs;
}

std::set<std::string> top_m_terms(const TokenStream& tokens, std::uint32_t m) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& token : tokens.tokens) ++counts[token];
    std::vector<std::pair<std::string, std::uint64_t>> ordered(counts.begin(), counts.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ordered.size() > m) ordered.resize(m);
    std::set<std::string> out;
    for (auto& [term, count] : ordered) out.insert(std::move(term));
    return out;
}

CorpusIndex build_index(const PipelineConfig& config, IngestReport& report) {
    return build_index_internal(config, report).index;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    validate_config(config);
    if (config.output_dir.empty()) {
        throw ConfigError("[config] output_dir is required");
    }

    PipelineResult result;
    BuiltIndex built = build_index_internal(config, result.report);

    result.ranking =
        rank_profiles(built.index.profile_vectors, built.index.query_vector, config.workers);
    result.ranking.query_id = std::string(kQueryDocId);
    result.terms = terms_for_ranking(built.index, result.ranking, config.terms_k,
                                     config.terms_recency_bonus,
                                     config.terms_recency_bonus != 0.0 ? &built.recent_terms
                                                                       : nullptr);

    // All content is rendered before anything touches the output directory;
    // files then land via a staging dir + per-file rename.
    const std::vector<std::pair<std::string_view, std::string>> outputs = {
        {kRankingCsvFile, ranking_to_csv(result.ranking)},
        {kRankingJsonFile, ranking_to_json(result.ranking)},
        {kTermsCsvFile, terms_to_csv(result.terms)},
        {kTermsJsonFile, terms_to_json(result.terms)},
        {kIngestReportFile, result.report.to_json()},
        {kIndexFile, index_to_json(built.index)},
    };

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) {
        throw IoError("[write] cannot create output directory: " + config.output_dir.string());
    }
    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path staging = config.output_dir / (".staging." + hex64(rng()));
    try {
        fs::create_directory(staging);
        for (const auto& [name, content] : outputs) {
            std::ofstream out(staging / name, std::ios::binary | std::ios::trunc);
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out) {
                throw IoError("[write] write failed: " + (staging / name).string());
            }
        }
        for (const auto& [name, content] : outputs) {
            fs::rename(staging / name, config.output_dir / name);
        }
        fs::remove_all(staging);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
    return result;
}

void save_index(const CorpusIndex& index, const fs::path& path) {
    write_file_atomic(path, index_to_json(index));
}

CorpusIndex load_index(const fs::path& path) {
    const std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("corrupt index file " + path.string() + ": " + e.what());
    }
    auto corrupt = [&](const std::string& what) -> ConfigError {
        return ConfigError("corrupt index file " + path.string() + ": " + what);
    };
    if (!doc.is_object()) throw corrupt("not a JSON object");
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw corrupt("missing version");
    }
    if (doc["version"].get<int>() != kIndexFormatVersion) {
        throw StaleIndexError("stale index: format version " +
                              doc["version"].dump() + " != " +
                              std::to_string(kIndexFormatVersion));
    }

    CorpusIndex index;
    const auto& prov = doc.at("provenance");
    index.provenance.config_digest = prov.at("config_digest").get<std::string>();
    for (const auto& input : prov.at("inputs")) {
        index.provenance.inputs.push_back(
            {input.at("path").get<std::string>(), input.at("digest").get<std::string>()});
    }

    const auto& vocab_rows = doc.at("vocabulary");
    if (!vocab_rows.is_array()) throw corrupt("vocabulary must be an array");
    Vocabulary vocab;
    vocab.corpus_size = doc.at("corpus_size").get<std::uint32_t>();
    if (vocab.corpus_size == 0) throw corrupt("corpus_size must be >= 1");
    vocab.terms.reserve(vocab_rows.size());
    for (const auto& row : vocab_rows) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_string() ||
            !row[1].is_number_integer()) {
            throw corrupt("vocabulary rows must be [term, df]");
        }
        std::string term = row[0].get<std::string>();
        const auto df = row[1].get<std::uint32_t>();
        if (df < 1 || df > vocab.corpus_size) throw corrupt("df out of range for " + term);
        if (!vocab.terms.empty() && term <= vocab.terms.back()) {
            throw corrupt("vocabulary must be strictly sorted");
        }
        vocab.term_to_index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
        vocab.terms.push_back(std::move(term));
        vocab.document_frequency.push_back(df);
    }

    const auto& vectors = doc.at("vectors");
    if (!vectors.is_array()) throw corrupt("vectors must be an array");
    bool saw_query = false;
    for (const auto& row : vectors) {
        TfIdfVector vec;
        vec.doc_id = row.at("doc_id").get<std::string>();
        const auto& entries = row.at("entries");
        if (!entries.is_array()) throw corrupt("entries must be an array");
        vec.entries.reserve(entries.size());
        std::int64_t prev = -1;
        for (const auto& pair : entries) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                !pair[1].is_number()) {
                throw corrupt("entries must be [term, weight] pairs");
            }
            const auto idx = vocab.index_of(pair[0].get<std::string>());
            if (!idx) throw corrupt("vector term missing from vocabulary");
            if (static_cast<std::int64_t>(*idx) <= prev) {
                throw corrupt("vector entries must be sorted by term");
            }
            prev = *idx;
            const double weight = pair[1].get<double>();
            if (!(weight > 0.0)) throw corrupt("vector weights must be positive");
            vec.entries.emplace_back(*idx, weight);
        }
        vec.norm = vector_norm(vec.entries);
        if (vec.doc_id == kQueryDocId) {
            index.query_vector = std::move(vec);
            saw_query = true;
        } else {
            index.profile_vectors.push_back(std::move(vec));
        }
    }
    if (!saw_query) throw corrupt("missing query vector");
    std::sort(index.profile_vectors.begin(), index.profile_vectors.end(),
              [](const TfIdfVector& a, const TfIdfVector& b) { return a.doc_id < b.doc_id; });
    index.vocabulary = std::move(vocab);

    check_freshness(index.provenance);
    return index;
}

RankOutputs rank_from_index(const CorpusIndex& index, std::uint32_t terms_k, unsigned workers) {
    RankOutputs out;
    out.ranking = rank_profiles(index.profile_vectors, index.query_vector, workers);
    out.ranking.query_id = std::string(kQueryDocId);
    out.terms = terms_for_ranking(index, out.ranking, terms_k, 0.0, nullptr);
    return out;
}

} // namespace tweetit
