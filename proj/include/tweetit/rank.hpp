#pragma once

#include "tweetit/vectorize.hpp"

#include <span>
#include <string>
#include <vector>

namespace tweetit {

struct SimilarityScore {
    std::string handle;
    double similarity = 0.0;

    bool operator==(const SimilarityScore&) const = default;
};

// Scores sorted non-increasing; equal scores ordered by handle ascending.
// Rank of ranked[i] is i + 1.
struct RankingResult {
    std::string query_id;
    std::vector<SimilarityScore> ranked;

    bool operator==(const RankingResult&) const = default;
};

// Conventional cosine similarity (d1.d2)/(|d1||d2|); 0 when either norm is 0.
// The dot product is accumulated over the sparse intersection in ascending
// index order.
double cosine_similarity(const TfIdfVector& d1, const TfIdfVector& d2);

// Drops profile entries whose term index is absent from the query vector's
// support; the restricted norm is recomputed.
TfIdfVector restrict_to_query_terms(const TfIdfVector& profile_vec, const TfIdfVector& query_vec);

// similarity(p) = cosine(restrict(p, query), query). Throws ConfigError on an
// empty profile list. `workers` bounds internal parallelism only; the result
// does not depend on it.
RankingResult rank_profiles(std::span<const TfIdfVector> profiles, const TfIdfVector& query,
                            unsigned workers = 1);

// CSV `rank,handle,similarity` with similarity at 6 decimal places.
std::string ranking_to_csv(const RankingResult& result);

// JSON equivalent; also carries distance = 1 - similarity as a derived
// column.
std::string ranking_to_json(const RankingResult& result);

} // namespace tweetit
