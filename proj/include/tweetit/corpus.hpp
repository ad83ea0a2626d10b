#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tweetit {

struct Preprocessor;

// One archived post. `created_at` is UTC epoch seconds (ISO 8601 in files).
struct Tweet {
    std::string id;
    std::string author;
    std::string text;
    std::int64_t like_count = 0;
    std::int64_t retweet_count = 0;
    std::int64_t created_at = 0;
    std::optional<std::string> lang;

    bool operator==(const Tweet&) const = default;
};

struct ProfileRecord {
    std::string handle;
    std::int64_t follower_count = 0;
    std::vector<Tweet> tweets;

    bool operator==(const ProfileRecord&) const = default;
};

struct NewsArticle {
    std::string id;
    std::string title;
    std::string body;
    std::optional<std::string> category;

    bool operator==(const NewsArticle&) const = default;
};

struct IngestConfig {
    std::int64_t min_followers = 5000;
    std::string language_code = "en";
    double ascii_ratio_threshold = 0.9;
    bool domain_filter_enabled = false;
    double domain_overlap_threshold = 0.05;
    std::uint32_t domain_top_m_terms = 500;

    bool operator==(const IngestConfig&) const = default;
};

struct IngestReport {
    std::uint64_t files_read = 0;
    std::uint64_t lines_parsed = 0;
    std::uint64_t lines_skipped = 0;
    std::uint64_t profiles_loaded = 0;
    std::vector<std::string> warnings;

    bool operator==(const IngestReport&) const = default;

    std::string to_json() const;
};

// Loads every *.jsonl file under `path` (recursively, in sorted path order).
// Lines are either tweet objects or profile-metadata objects; malformed lines
// are counted and skipped. Profiles come back sorted by handle, tweets within
// a profile sorted by (created_at, id), so the corpus is independent of file
// layout and scheduling.
std::vector<ProfileRecord> load_profiles(const std::filesystem::path& path,
                                         const IngestConfig& config,
                                         IngestReport& report);

// Loads *.txt files (filename stem = id, whole file = body) and *.jsonl
// records, returned sorted by id.
std::vector<NewsArticle> load_news(const std::filesystem::path& path);

// Keeps profiles with follower_count >= min_followers. Order preserved.
std::vector<ProfileRecord> popularity_filter(std::vector<ProfileRecord> profiles,
                                             const IngestConfig& config);

// Keeps tweets whose lang equals the configured code; tweets without a lang
// tag are kept iff their ASCII-alphabetic ratio clears the threshold.
ProfileRecord language_filter(ProfileRecord profile, const IngestConfig& config);

// Fraction of ASCII letters among alphabetic codepoints. Text with no
// alphabetic codepoints at all rates 1.0 (nothing non-ASCII to object to).
double ascii_alpha_ratio(std::string_view text);

// When enabled, keeps profiles whose preprocessed tweet vocabulary has
// Jaccard overlap >= domain_overlap_threshold with `news_vocab` (the query
// corpus's top-M frequency terms). Disabled -> identity.
std::vector<ProfileRecord> domain_filter(std::vector<ProfileRecord> profiles,
                                         const std::set<std::string>& news_vocab,
                                         const IngestConfig& config,
                                         const Preprocessor& preprocessor);

} // namespace tweetit
