#include "tweetit/preprocess.hpp"

#include "tweetit/errors.hpp"
#include "tweetit/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tweetit {

namespace {

// Common English function words plus the contractions tweets are full of.
constexpr const char* kDefaultStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "aren't", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "can't", "cannot", "could", "couldn't", "did", "didn't", "do", "does",
    "doesn't", "doing", "don't", "down", "during", "each", "few", "for", "from", "further", "had",
    "hadn't", "has", "hasn't", "have", "haven't", "having", "he", "he'd", "he'll", "he's", "her",
    "here", "here's", "hers", "herself", "him", "himself", "his", "how", "how's", "i", "i'd",
    "i'll", "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its", "itself",
    "just", "let's", "me", "more", "most", "mustn't", "my", "myself", "no", "nor", "not", "now",
    "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out",
    "over", "own", "same", "shan't", "she", "she'd", "she'll", "she's", "should", "shouldn't",
    "so", "some", "such", "than", "that", "that's", "the", "their", "theirs", "them",
    "themselves", "then", "there", "there's", "these", "they", "they'd", "they'll", "they're",
    "they've", "this", "those", "through", "to", "too", "under", "until", "up", "very", "was",
    "wasn't", "we", "we'd", "we'll", "we're", "we've", "were", "weren't", "what", "what's",
    "when", "when's", "where", "where's", "which", "while", "who", "who's", "whom", "why",
    "why's", "will", "with", "won't", "would", "wouldn't", "you", "you'd", "you'll", "you're",
    "you've", "your", "yours", "yourself", "yourselves",
};

bool is_whitespace_cp(char32_t cp) {
    switch (cp) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Edge punctuation stripped from tokens. '@' and '#' stay so the token filter
// can remove those tokens whole.
bool is_strippable_cp(char32_t cp) {
    if (cp < 0x80) {
        const char c = static_cast<char>(cp);
        if (c == '@' || c == '#') return false;
        return std::ispunct(static_cast<unsigned char>(c)) != 0;
    }
    switch (cp) {
        case 0xA1: case 0xAB: case 0xBB: case 0xBF:   // inverted marks, guillemets
        case 0x2026:                                  // ellipsis
        case 0x2039: case 0x203A:
        case 0xFFFD:                                  // decode replacement
            return true;
        default:
            return (cp >= 0x2010 && cp <= 0x2015) ||  // dashes
                   (cp >= 0x2018 && cp <= 0x201F);    // curly quotes
    }
}

char32_t lower_ascii(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    return cp;
}

std::string lowercase_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

} // namespace

const StopwordSet& default_stopwords() {
    static const StopwordSet words = [] {
        StopwordSet s;
        for (const char* w : kDefaultStopwords) s.insert(w);
        return s;
    }();
    return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read stopword file: " + path.string());
    }
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start < line.size()) {
            words.insert(lowercase_ascii(std::string_view(line).substr(start)));
        }
    }
    return words;
}

AcronymDictionary AcronymDictionary::from_json_text(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid acronym dictionary JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("acronym dictionary must be a JSON object");
    }
    AcronymDictionary dict;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_string()) {
            throw ConfigError("acronym expansion for '" + key + "' must be a string");
        }
        const std::string acronym = lowercase_ascii(key);
        if (acronym.empty() ||
            acronym.find_first_of(" \t\r\n\v\f") != std::string::npos) {
            throw ConfigError("acronym key must be a single token: '" + key + "'");
        }
        std::istringstream ss(lowercase_ascii(value.get<std::string>()));
        std::vector<std::string> expansion;
        std::string word;
        while (ss >> word) expansion.push_back(word);
        if (expansion.empty()) {
            throw ConfigError("acronym expansion for '" + key + "' is empty");
        }
        dict.entries[acronym] = std::move(expansion);
    }
    return dict;
}

AcronymDictionary AcronymDictionary::load(const std::filesystem::path& path) {
    return from_json_text(read_file(path));
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::vector<char32_t> current;
    auto flush = [&] {
        if (current.empty()) return;
        std::size_t begin = 0;
        std::size_t end = current.size();
        while (begin < end && is_strippable_cp(current[begin])) ++begin;
        while (end > begin && is_strippable_cp(current[end - 1])) --end;
        if (begin < end) {
            std::string token;
            for (std::size_t i = begin; i < end; ++i) {
                append_codepoint_utf8(token, lower_ascii(current[i]));
            }
            tokens.push_back(std::move(token));
        }
        current.clear();
    };
    for_each_codepoint(text, [&](char32_t cp) {
        if (is_whitespace_cp(cp)) {
            flush();
        } else {
            current.push_back(cp);
        }
    });
    flush();
    return tokens;
}

std::vector<std::string> expand_acronyms(std::vector<std::string> tokens,
                                         const AcronymDictionary& dict) {
    if (dict.entries.empty()) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& token : tokens) {
        const auto it = dict.entries.find(token);
        if (it == dict.entries.end()) {
            out.push_back(std::move(token));
        } else {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
    return out;
}

TokenStream filter_tokens(const std::vector<std::string>& tokens, const StopwordSet& stopwords) {
    TokenStream stream;
    stream.tokens.reserve(tokens.size());
    for (const auto& token : tokens) {
        bool drop = token.starts_with("http");
        if (!drop) {
            for (const char c : token) {
                if (c == '@' || c == '#' || (c >= '0' && c <= '9')) {
                    drop = true;
                    break;
                }
            }
        }
        if (!drop && stopwords.contains(token)) drop = true;
        if (!drop) stream.tokens.push_back(token);
    }
    return stream;
}

ProfileDocument build_profile_document(std::string handle, std::span<const Tweet> selected,
                                       const AcronymDictionary& dict,
                                       const StopwordSet& stopwords) {
    ProfileDocument doc;
    doc.handle = std::move(handle);
    doc.source_tweet_ids.reserve(selected.size());
    doc.tokens_per_tweet.reserve(selected.size());
    for (const Tweet& tweet : selected) {
        TokenStream cleaned = filter_tokens(expand_acronyms(tokenize(tweet.text), dict), stopwords);
        doc.source_tweet_ids.push_back(tweet.id);
        doc.tokens_per_tweet.push_back(static_cast<std::uint32_t>(cleaned.tokens.size()));
        doc.tokens.tokens.insert(doc.tokens.tokens.end(),
                                 std::make_move_iterator(cleaned.tokens.begin()),
                                 std::make_move_iterator(cleaned.tokens.end()));
    }
    return doc;
}

QueryDocument build_query_document(std::span<const NewsArticle> articles,
                                   const AcronymDictionary& dict, const StopwordSet& stopwords) {
    if (articles.empty()) {
        throw ConfigError("query document needs at least one news article");
    }
    std::vector<const NewsArticle*> ordered;
    ordered.reserve(articles.size());
    for (const auto& article : articles) ordered.push_back(&article);
    std::sort(ordered.begin(), ordered.end(),
              [](const NewsArticle* a, const NewsArticle* b) { return a->id < b->id; });

    QueryDocument doc;
    doc.source_article_ids.reserve(ordered.size());
    for (const NewsArticle* article : ordered) {
        TokenStream cleaned =
            filter_tokens(expand_acronyms(tokenize(article->body), dict), stopwords);
        doc.source_article_ids.push_back(article->id);
        doc.tokens.tokens.insert(doc.tokens.tokens.end(),
                                 std::make_move_iterator(cleaned.tokens.begin()),
                                 std::make_move_iterator(cleaned.tokens.end()));
    }
    return doc;
}

} // namespace tweetit
