#pragma once

// Independent reference implementations the real code is checked against.
// These deliberately take the dumbest correct route (full sorts, linear
// scans, per-term maps) and share no code with the library paths they verify.

#include "tweetit/attention.hpp"
#include "tweetit/terms.hpp"
#include "tweetit/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace tweetit::test {

// Full sort by (attention desc, created_at desc, id asc), truncate to k, then
// re-sort by (created_at desc, id asc).
inline std::vector<Tweet> oracle_select_top_k(std::vector<Tweet> tweets, std::uint32_t k) {
    auto score = [](const Tweet& t) {
        return 0.5 * static_cast<double>(t.like_count) + 0.5 * static_cast<double>(t.retweet_count);
    };
    std::sort(tweets.begin(), tweets.end(), [&](const Tweet& a, const Tweet& b) {
        const double sa = score(a);
        const double sb = score(b);
        if (sa != sb) return sa > sb;
        if (a.created_at != b.created_at) return a.created_at > b.created_at;
        return a.id < b.id;
    });
    if (tweets.size() > k) tweets.resize(k);
    std::sort(tweets.begin(), tweets.end(), [](const Tweet& a, const Tweet& b) {
        if (a.created_at != b.created_at) return a.created_at > b.created_at;
        return a.id < b.id;
    });
    return tweets;
}

// Scores every vocabulary term by brute force and fully sorts.
inline std::vector<InfluentialTerm> oracle_top_terms(const TfIdfVector& profile,
                                                     const TfIdfVector& query,
                                                     const Vocabulary& vocab, std::uint32_t k) {
    auto weight_of = [](const TfIdfVector& vec, std::uint32_t index) {
        for (const auto& [i, w] : vec.entries) {
            if (i == index) return w;
        }
        return 0.0;
    };
    std::vector<InfluentialTerm> scored;
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        const double pw = weight_of(profile, i);
        const double qw = weight_of(query, i);
        const double influence = pw * qw;
        if (influence > 0.0) scored.push_back({vocab.terms[i], pw, qw, influence});
    }
    std::sort(scored.begin(), scored.end(), [](const InfluentialTerm& a, const InfluentialTerm& b) {
        if (a.influence != b.influence) return a.influence > b.influence;
        return a.term < b.term;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

// Map-based TF-IDF + restricted cosine for small fixtures with known token
// counts. tf = raw count, idf = ln((1+N)/(1+df)) + 1, similarity =
// cos(profile restricted to query support, query).
struct OracleCorpus {
    // doc id -> term -> count; the query document included under its own id.
    std::map<std::string, std::map<std::string, std::uint64_t>> docs;

    std::map<std::string, std::uint64_t> document_frequency() const {
        std::map<std::string, std::uint64_t> df;
        for (const auto& [id, counts] : docs) {
            for (const auto& [term, count] : counts) ++df[term];
        }
        return df;
    }

    std::map<std::string, double> tfidf(const std::string& doc_id) const {
        const auto df = document_frequency();
        const double n = static_cast<double>(docs.size());
        std::map<std::string, double> weights;
        for (const auto& [term, count] : docs.at(doc_id)) {
            const double idf =
                std::log((1.0 + n) / (1.0 + static_cast<double>(df.at(term)))) + 1.0;
            weights[term] = static_cast<double>(count) * idf;
        }
        return weights;
    }

    double similarity(const std::string& profile_id, const std::string& query_id) const {
        const auto pw = tfidf(profile_id);
        const auto qw = tfidf(query_id);
        double dot = 0.0;
        double restricted_norm_sq = 0.0;
        double query_norm_sq = 0.0;
        for (const auto& [term, w] : qw) query_norm_sq += w * w;
        for (const auto& [term, w] : pw) {
            const auto it = qw.find(term);
            if (it == qw.end()) continue;
            dot += w * it->second;
            restricted_norm_sq += w * w;
        }
        if (restricted_norm_sq == 0.0 || query_norm_sq == 0.0) return 0.0;
        return dot / (std::sqrt(restricted_norm_sq) * std::sqrt(query_norm_sq));
    }
};

} // namespace tweetit::test
