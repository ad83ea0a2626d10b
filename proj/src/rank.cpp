#include "tweetit/rank.hpp"

#include "tweetit/errors.hpp"
#include "tweetit/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace tweetit {

double cosine_similarity(const TfIdfVector& d1, const TfIdfVector& d2) {
    if (d1.norm == 0.0 || d2.norm == 0.0) return 0.0;
    double dot = 0.0;
    auto a = d1.entries.begin();
    auto b = d2.entries.begin();
    while (a != d1.entries.end() && b != d2.entries.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            dot += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return dot / (d1.norm * d2.norm);
}

TfIdfVector restrict_to_query_terms(const TfIdfVector& profile_vec, const TfIdfVector& query_vec) {
    TfIdfVector out;
    out.doc_id = profile_vec.doc_id;
    auto p = profile_vec.entries.begin();
    auto q = query_vec.entries.begin();
    while (p != profile_vec.entries.end() && q != query_vec.entries.end()) {
        if (p->first < q->first) {
            ++p;
        } else if (q->first < p->first) {
            ++q;
        } else {
            out.entries.push_back(*p);
            ++p;
            ++q;
        }
    }
    out.norm = vector_norm(out.entries);
    return out;
}

RankingResult rank_profiles(std::span<const TfIdfVector> profiles, const TfIdfVector& query,
                            unsigned workers) {
    if (profiles.empty()) {
        throw ConfigError("cannot rank an empty profile list");
    }
    std::vector<double> similarities(profiles.size());
    auto score_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            similarities[i] = cosine_similarity(restrict_to_query_terms(profiles[i], query), query);
        }
    };
    const std::size_t n = profiles.size();
    if (workers <= 1 || n < 2) {
        score_range(0, n);
    } else {
        const std::size_t used = std::min<std::size_t>(workers, n);
        std::vector<std::thread> threads;
        threads.reserve(used);
        const std::size_t chunk = (n + used - 1) / used;
        for (std::size_t t = 0; t < used; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(score_range, begin, end);
        }
        for (auto& thread : threads) thread.join();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (similarities[a] != similarities[b]) return similarities[a] > similarities[b];
        return profiles[a].doc_id < profiles[b].doc_id;
    });

    RankingResult result;
    result.ranked.reserve(n);
    for (const std::size_t i : order) {
        result.ranked.push_back({profiles[i].doc_id, similarities[i]});
    }
    return result;
}

std::string ranking_to_csv(const RankingResult& result) {
    std::string out = "rank,handle,similarity\n";
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        out += std::to_string(i + 1);
        out.push_back(',');
        out += csv_field(result.ranked[i].handle);
        out.push_back(',');
        out += format_fixed6(result.ranked[i].similarity);
        out.push_back('\n');
    }
    return out;
}

std::string ranking_to_json(const RankingResult& result) {
    nlohmann::json doc;
    doc["query_id"] = result.query_id;
    auto& rows = doc["ranking"] = nlohmann::json::array();
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        nlohmann::json row;
        row["rank"] = i + 1;
        row["handle"] = result.ranked[i].handle;
        row["similarity"] = result.ranked[i].similarity;
        row["distance"] = 1.0 - result.ranked[i].similarity;
        rows.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

} // namespace tweetit
