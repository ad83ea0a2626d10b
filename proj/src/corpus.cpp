#include "tweetit/corpus.hpp"

#include "tweetit/errors.hpp"
#include "tweetit/preprocess.hpp"
#include "tweetit/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

namespace fs = std::filesystem;
using nlohmann::json;

namespace tweetit {

namespace {

std::vector<fs::path> collect_files(const fs::path& root,
                                    const std::unordered_set<std::string>& extensions) {
    std::error_code ec;
    const auto status = fs::status(root, ec);
    if (ec || !fs::is_directory(status)) {
        throw IoError("not a readable directory: " + root.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && extensions.contains(entry.path().extension().string())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    return files;
}

bool get_string(const json& obj, const char* key, std::string& out) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

bool get_count(const json& obj, const char* key, std::int64_t& out) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) return false;
    out = it->get<std::int64_t>();
    return out >= 0;
}

// A tweet line needs id/author/text/counts/created_at; a metadata line needs
// handle/follower_count. Anything else is malformed.
enum class LineKind { Tweet, Metadata, Malformed };

LineKind classify_line(const json& obj, Tweet& tweet, std::string& handle,
                       std::int64_t& follower_count) {
    if (!obj.is_object()) return LineKind::Malformed;
    if (obj.contains("id") || obj.contains("text")) {
        if (!get_string(obj, "id", tweet.id) || tweet.id.empty()) return LineKind::Malformed;
        if (!get_string(obj, "author", tweet.author) || tweet.author.empty()) {
            return LineKind::Malformed;
        }
        if (!get_string(obj, "text", tweet.text)) return LineKind::Malformed;
        if (!get_count(obj, "like_count", tweet.like_count)) return LineKind::Malformed;
        if (!get_count(obj, "retweet_count", tweet.retweet_count)) return LineKind::Malformed;
        std::string created;
        if (!get_string(obj, "created_at", created)) return LineKind::Malformed;
        const auto instant = parse_iso8601_utc(created);
        if (!instant) return LineKind::Malformed;
        tweet.created_at = *instant;
        if (const auto it = obj.find("lang"); it != obj.end()) {
            if (!it->is_string()) return LineKind::Malformed;
            tweet.lang = it->get<std::string>();
        } else {
            tweet.lang.reset();
        }
        return LineKind::Tweet;
    }
    if (get_string(obj, "handle", handle) && !handle.empty() &&
        get_count(obj, "follower_count", follower_count)) {
        return LineKind::Metadata;
    }
    return LineKind::Malformed;
}

} // namespace

std::string IngestReport::to_json() const {
    json doc;
    doc["files_read"] = files_read;
    doc["lines_parsed"] = lines_parsed;
    doc["lines_skipped"] = lines_skipped;
    doc["profiles_loaded"] = profiles_loaded;
    doc["warnings"] = warnings;
    return doc.dump(2) + "\n";
}

std::vector<ProfileRecord> load_profiles(const fs::path& path, const IngestConfig& config,
                                         IngestReport& report) {
    (void)config;
    const auto files = collect_files(path, {".jsonl"});
    std::map<std::string, ProfileRecord> by_handle;
    std::unordered_set<std::string> seen_ids;

    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw IoError("cannot read file: " + file.string());
        }
        ++report.files_read;
        std::uint64_t parsed_here = 0;
        bool any_line = false;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            any_line = true;
            json obj = json::parse(line, nullptr, false);
            Tweet tweet;
            std::string handle;
            std::int64_t follower_count = 0;
            switch (classify_line(obj, tweet, handle, follower_count)) {
                case LineKind::Tweet: {
                    if (!seen_ids.insert(tweet.id).second) {
                        ++report.lines_skipped; // duplicate id violates uniqueness
                        break;
                    }
                    auto& record = by_handle[tweet.author];
                    record.handle = tweet.author;
                    record.tweets.push_back(std::move(tweet));
                    ++report.lines_parsed;
                    ++parsed_here;
                    break;
                }
                case LineKind::Metadata: {
                    auto& record = by_handle[handle];
                    record.handle = handle;
                    record.follower_count = follower_count;
                    ++report.lines_parsed;
                    ++parsed_here;
                    break;
                }
                case LineKind::Malformed:
                    ++report.lines_skipped;
                    break;
            }
        }
        if (any_line && parsed_here == 0) {
            report.warnings.push_back("no parseable lines: " + file.generic_string());
        }
    }

    std::vector<ProfileRecord> profiles;
    profiles.reserve(by_handle.size());
    for (auto& [handle, record] : by_handle) {
        // Canonical order regardless of file layout or load scheduling.
        std::sort(record.tweets.begin(), record.tweets.end(), [](const Tweet& a, const Tweet& b) {
            if (a.created_at != b.created_at) return a.created_at < b.created_at;
            return a.id < b.id;
        });
        profiles.push_back(std::move(record));
    }
    report.profiles_loaded += profiles.size();
    return profiles;
}

std::vector<NewsArticle> load_news(const fs::path& path) {
    const auto files = collect_files(path, {".txt", ".jsonl"});
    std::vector<NewsArticle> articles;
    for (const auto& file : files) {
        if (file.extension() == ".txt") {
            NewsArticle article;
            article.id = file.stem().string();
            article.body = read_file(file);
            articles.push_back(std::move(article));
            continue;
        }
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw IoError("cannot read file: " + file.string());
        }
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            json obj = json::parse(line, nullptr, false);
            NewsArticle article;
            if (!obj.is_object() || !get_string(obj, "id", article.id) || article.id.empty() ||
                !get_string(obj, "body", article.body)) {
                continue;
            }
            get_string(obj, "title", article.title);
            if (const auto it = obj.find("category"); it != obj.end() && it->is_string()) {
                article.category = it->get<std::string>();
            }
            articles.push_back(std::move(article));
        }
    }
    std::sort(articles.begin(), articles.end(),
              [](const NewsArticle& a, const NewsArticle& b) { return a.id < b.id; });
    return articles;
}

std::vector<ProfileRecord> popularity_filter(std::vector<ProfileRecord> profiles,
                                             const IngestConfig& config) {
    std::erase_if(profiles, [&](const ProfileRecord& p) {
        return p.follower_count < config.min_followers;
    });
    return profiles;
}

double ascii_alpha_ratio(std::string_view text) {
    std::uint64_t ascii_alpha = 0;
    std::uint64_t alpha = 0;
    for_each_codepoint(text, [&](char32_t cp) {
        if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) {
            ++ascii_alpha;
            ++alpha;
            return;
        }
        if (cp < 0x80) return; // ASCII digits/punctuation are not letters
        // Symbol and emoji ranges are not treated as letters; everything else
        // non-ASCII is assumed to be script.
        const bool symbol = (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x1F000 && cp <= 0x1FFFF) ||
                            (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0x3000 && cp <= 0x303F) ||
                            cp == 0xFFFD;
        if (!symbol) ++alpha;
    });
    if (alpha == 0) return 1.0;
    return static_cast<double>(ascii_alpha) / static_cast<double>(alpha);
}

ProfileRecord language_filter(ProfileRecord profile, const IngestConfig& config) {
    std::erase_if(profile.tweets, [&](const Tweet& tweet) {
        if (tweet.lang.has_value()) {
            return *tweet.lang != config.language_code;
        }
        return ascii_alpha_ratio(tweet.text) < config.ascii_ratio_threshold;
    });
    return profile;
}

std::vector<ProfileRecord> domain_filter(std::vector<ProfileRecord> profiles,
                                         const std::set<std::string>& news_vocab,
                                         const IngestConfig& config,
                                         const Preprocessor& preprocessor) {
    if (!config.domain_filter_enabled) return profiles;
    if (news_vocab.empty()) {
        throw ConfigError("domain filter enabled but the news vocabulary is empty");
    }
    std::erase_if(profiles, [&](const ProfileRecord& profile) {
        std::set<std::string> vocabulary;
        for (const Tweet& tweet : profile.tweets) {
            TokenStream stream = preprocessor.run(tweet.text);
            vocabulary.insert(std::make_move_iterator(stream.tokens.begin()),
                              std::make_move_iterator(stream.tokens.end()));
        }
        std::uint64_t shared = 0;
        for (const auto& term : vocabulary) {
            if (news_vocab.contains(term)) ++shared;
        }
        const std::uint64_t unioned = vocabulary.size() + news_vocab.size() - shared;
        const double jaccard =
            unioned == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(unioned);
        return jaccard < config.domain_overlap_threshold;
    });
    return profiles;
}

} // namespace tweetit
