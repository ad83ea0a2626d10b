#pragma once

#include "tweetit/vectorize.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tweetit {

// A term weighted high in both the profile document and the query document.
// influence = profile_weight * query_weight; zero-influence terms are never
// emitted.
struct InfluentialTerm {
    std::string term;
    double profile_weight = 0.0;
    double query_weight = 0.0;
    double influence = 0.0;

    bool operator==(const InfluentialTerm&) const = default;
};

// Optional extension, off by default: terms whose most recent source tweet
// falls in the newest decile of the selection get their influence multiplied
// by (1 + bonus).
struct RecencyBoost {
    double bonus = 0.0;
    std::unordered_set<std::uint32_t> recent_term_indices;
};

double influence_score(std::string_view term, const TfIdfVector& profile_vec,
                       const TfIdfVector& query_vec, const Vocabulary& vocab);

// The k terms of highest influence, descending; ties by term ascending; fewer
// than k returned when fewer have positive influence.
std::vector<InfluentialTerm> top_terms(const TfIdfVector& profile_vec,
                                       const TfIdfVector& query_vec, const Vocabulary& vocab,
                                       std::uint32_t k, const RecencyBoost* recency = nullptr);

struct ProfileTerms {
    std::string handle;
    std::vector<InfluentialTerm> terms;

    bool operator==(const ProfileTerms&) const = default;
};

// CSV `handle,term,influence`, profiles in the order given (rank order when
// produced by the pipeline).
std::string terms_to_csv(std::span<const ProfileTerms> profiles);
std::string terms_to_json(std::span<const ProfileTerms> profiles);

} // namespace tweetit
