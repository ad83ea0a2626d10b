#pragma once

#include "tweetit/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tweetit {

// Maps a lowercase acronym token to its expansion tokens.
struct AcronymDictionary {
    std::map<std::string, std::vector<std::string>> entries;

    bool operator==(const AcronymDictionary&) const = default;

    // JSON object file: {"omg": "oh my god", ...}. Expansions are lowercased
    // and whitespace-split on load.
    static AcronymDictionary load(const std::filesystem::path& path);
    static AcronymDictionary from_json_text(std::string_view json_text);
};

using StopwordSet = std::unordered_set<std::string>;

// Built-in English list (~170 words), used when no stopword file is given.
const StopwordSet& default_stopwords();

// One term per line, UTF-8; blank lines ignored; entries lowercased.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Fully cleaned token sequence: lowercase, no '@'/'#'/digit/whitespace in any
// token, no stopwords.
struct TokenStream {
    std::vector<std::string> tokens;

    bool operator==(const TokenStream&) const = default;
};

// Splits on Unicode whitespace, strips leading/trailing punctuation except
// '@' and '#' (kept so the later filter can see and remove those tokens),
// lowercases ASCII. Tokens that strip to nothing are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Single pass: each token equal to a dictionary key is replaced by its
// expansion tokens. Expansions are not re-expanded.
std::vector<std::string> expand_acronyms(std::vector<std::string> tokens,
                                         const AcronymDictionary& dict);

// Drops tokens containing '@', '#', or a decimal digit, tokens starting with
// "http", and stopwords. Survivor order is preserved.
TokenStream filter_tokens(const std::vector<std::string>& tokens, const StopwordSet& stopwords);

// Bundles the active dictionary and stopword set so the same normalization is
// applied everywhere.
struct Preprocessor {
    AcronymDictionary acronyms;
    StopwordSet stopwords;

    TokenStream run(std::string_view text) const {
        return filter_tokens(expand_acronyms(tokenize(text), acronyms), stopwords);
    }
};

// Merged text of one profile's selected tweets, in the selection's
// latest-to-oldest order. tokens_per_tweet mirrors source_tweet_ids: how many
// tokens each tweet contributed (possibly zero), which also records where
// each tweet's span starts inside `tokens`.
struct ProfileDocument {
    std::string handle;
    TokenStream tokens;
    std::vector<std::string> source_tweet_ids;
    std::vector<std::uint32_t> tokens_per_tweet;

    bool operator==(const ProfileDocument&) const = default;
};

// The single aggregated news document profiles are ranked against.
struct QueryDocument {
    TokenStream tokens;
    std::vector<std::string> source_article_ids;

    bool operator==(const QueryDocument&) const = default;
};

// `selected` must already be the attention module's top-K output in its
// latest-to-oldest order.
ProfileDocument build_profile_document(std::string handle, std::span<const Tweet> selected,
                                       const AcronymDictionary& dict,
                                       const StopwordSet& stopwords);

// Article bodies preprocessed identically to tweets, concatenated in
// ascending id order. Throws ConfigError when `articles` is empty.
QueryDocument build_query_document(std::span<const NewsArticle> articles,
                                   const AcronymDictionary& dict, const StopwordSet& stopwords);

} // namespace tweetit
