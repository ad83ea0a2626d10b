#include "tweetit/attention.hpp"

#include <algorithm>

namespace tweetit {

namespace {

// Higher attention first; ties broken by recency, then id, so selection is a
// total order.
bool selection_less(const ScoredTweet& a, const ScoredTweet& b) {
    if (a.attention != b.attention) return a.attention > b.attention;
    if (a.tweet.created_at != b.tweet.created_at) return a.tweet.created_at > b.tweet.created_at;
    return a.tweet.id < b.tweet.id;
}

bool recency_less(const ScoredTweet& a, const ScoredTweet& b) {
    if (a.tweet.created_at != b.tweet.created_at) return a.tweet.created_at > b.tweet.created_at;
    return a.tweet.id < b.tweet.id;
}

} // namespace

std::vector<ScoredTweet> select_top_k(std::span<const Tweet> tweets,
                                      const SelectionConfig& config) {
    std::vector<ScoredTweet> scored;
    scored.reserve(tweets.size());
    for (const Tweet& tweet : tweets) {
        scored.push_back({tweet, attention_factor(tweet.like_count, tweet.retweet_count)});
    }
    const std::size_t k = std::min<std::size_t>(config.top_k, scored.size());
    if (k < scored.size()) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                          scored.end(), selection_less);
        scored.resize(k);
    }
    std::sort(scored.begin(), scored.end(), recency_less);
    return scored;
}

} // namespace tweetit
