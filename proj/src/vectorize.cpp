#include "tweetit/vectorize.hpp"

#include "tweetit/errors.hpp"
#include "tweetit/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tweetit {

DocumentTermCounts DocumentTermCounts::from_tokens(const DocumentTokens& doc) {
    std::map<std::string, std::uint32_t> counts;
    for (const auto& token : doc.tokens.tokens) {
        ++counts[token];
    }
    DocumentTermCounts out;
    out.id = doc.id;
    out.counts.assign(counts.begin(), counts.end());
    return out;
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
    const auto it = term_to_index.find(std::string(term));
    if (it == term_to_index.end()) return std::nullopt;
    return it->second;
}

double Vocabulary::idf(std::uint32_t index) const {
    const double n = static_cast<double>(corpus_size);
    const double df = static_cast<double>(document_frequency[index]);
    return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

Vocabulary build_vocabulary_from_counts(std::span<const DocumentTermCounts> documents) {
    if (documents.empty()) {
        throw ConfigError("cannot build a vocabulary over zero documents");
    }
    std::map<std::string, std::uint32_t> df;
    for (const auto& doc : documents) {
        for (const auto& [term, count] : doc.counts) {
            ++df[term];
        }
    }
    Vocabulary vocab;
    vocab.corpus_size = static_cast<std::uint32_t>(documents.size());
    vocab.terms.reserve(df.size());
    vocab.document_frequency.reserve(df.size());
    vocab.term_to_index.reserve(df.size());
    for (auto& [term, count] : df) { // std::map iterates lexicographically
        vocab.term_to_index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
        vocab.terms.push_back(term);
        vocab.document_frequency.push_back(count);
    }
    return vocab;
}

Vocabulary build_vocabulary(std::span<const DocumentTokens> documents) {
    if (documents.empty()) {
        throw ConfigError("cannot build a vocabulary over zero documents");
    }
    std::vector<DocumentTermCounts> counts;
    counts.reserve(documents.size());
    for (const auto& doc : documents) {
        counts.push_back(DocumentTermCounts::from_tokens(doc));
    }
    return build_vocabulary_from_counts(counts);
}

double tfidf_weight(std::string_view term, const TokenStream& document, const Vocabulary& vocab) {
    const auto index = vocab.index_of(term);
    if (!index) return 0.0;
    std::uint64_t tf = 0;
    for (const auto& token : document.tokens) {
        if (token == term) ++tf;
    }
    if (tf == 0) return 0.0;
    return static_cast<double>(tf) * vocab.idf(*index);
}

double vector_norm(const std::vector<std::pair<std::uint32_t, double>>& entries) {
    double sum = 0.0;
    for (const auto& [index, weight] : entries) {
        sum += weight * weight;
    }
    return std::sqrt(sum);
}

TfIdfVector vectorize_counts(const DocumentTermCounts& document, const Vocabulary& vocab) {
    TfIdfVector vec;
    vec.doc_id = document.id;
    vec.entries.reserve(document.counts.size());
    for (const auto& [term, count] : document.counts) {
        const auto index = vocab.index_of(term);
        if (!index) continue;
        vec.entries.emplace_back(*index, static_cast<double>(count) * vocab.idf(*index));
    }
    // counts are sorted by term and index order equals term order, but keep
    // the ascending-index invariant explicit
    std::sort(vec.entries.begin(), vec.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    vec.norm = vector_norm(vec.entries);
    return vec;
}

TfIdfVector vectorize_document(const DocumentTokens& document, const Vocabulary& vocab) {
    return vectorize_counts(DocumentTermCounts::from_tokens(document), vocab);
}

std::string vector_dump_json(const TfIdfVector& vec, const Vocabulary& vocab) {
    std::string out = "{\"doc_id\":";
    append_json_string(out, vec.doc_id);
    out += ",\"entries\":[";
    bool first = true;
    for (const auto& [index, weight] : vec.entries) {
        if (!first) out.push_back(',');
        first = false;
        out.push_back('[');
        append_json_string(out, vocab.terms[index]);
        out.push_back(',');
        out += format_double(weight);
        out.push_back(']');
    }
    out += "]}";
    return out;
}

} // namespace tweetit
