#pragma once

#include "tweetit/corpus.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tweetit {

struct ScoredTweet {
    Tweet tweet;
    double attention = 0.0;

    bool operator==(const ScoredTweet&) const = default;
};

struct SelectionConfig {
    std::uint32_t top_k = 1000;

    bool operator==(const SelectionConfig&) const = default;
};

// Equal-weight average of likes and retweets. Exact in double for any
// realistic count.
inline double attention_factor(std::int64_t like_count, std::int64_t retweet_count) {
    return 0.5 * static_cast<double>(like_count) + 0.5 * static_cast<double>(retweet_count);
}

// Picks the min(K, n) tweets with the highest attention (ties: newer
// created_at first, then smaller id) and returns them reordered latest to
// oldest (ties: id ascending).
std::vector<ScoredTweet> select_top_k(std::span<const Tweet> tweets, const SelectionConfig& config);

} // namespace tweetit
