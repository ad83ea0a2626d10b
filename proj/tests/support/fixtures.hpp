#pragma once

#include "tweetit/corpus.hpp"
#include "tweetit/util.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace tweetit::test {

namespace fs = std::filesystem;

// Unique scratch directory, removed on scope exit.
struct TempDir {
    fs::path path;

    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path = fs::temp_directory_path() / ("tweetit-test-" + hex64(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline void write_text(const fs::path& file, std::string_view content) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Inverse of the loader's epoch conversion (proleptic Gregorian), so
// generators can mint valid ISO 8601 UTC strings for arbitrary instants.
inline std::string iso_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    const std::int64_t year = y + (m <= 2);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return std::string(buf);
}

// Tokens in fixtures are letters-only, so tweet JSONL lines can be assembled
// without an escaping pass.
inline std::string tweet_line(const std::string& id, const std::string& author,
                              const std::string& text, std::int64_t likes, std::int64_t retweets,
                              std::int64_t created_at, const char* lang = nullptr) {
    std::string line = "{\"id\":\"" + id + "\",\"author\":\"" + author + "\",\"text\":\"" + text +
                       "\",\"like_count\":" + std::to_string(likes) +
                       ",\"retweet_count\":" + std::to_string(retweets) + ",\"created_at\":\"" +
                       iso_utc(created_at) + "\"";
    if (lang) line += std::string(",\"lang\":\"") + lang + "\"";
    line += "}\n";
    return line;
}

inline std::string meta_line(const std::string& handle, std::int64_t followers) {
    return "{\"handle\":\"" + handle + "\",\"follower_count\":" + std::to_string(followers) +
           "}\n";
}

} // namespace tweetit::test
