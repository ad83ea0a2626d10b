#pragma once

#include "tweetit/preprocess.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tweetit {

struct DocumentTokens {
    std::string id;
    TokenStream tokens;

    bool operator==(const DocumentTokens&) const = default;
};

// Per-document term occurrence counts, sorted by term. The compact form the
// pipeline keeps once raw token streams are no longer needed.
struct DocumentTermCounts {
    std::string id;
    std::vector<std::pair<std::string, std::uint32_t>> counts;

    static DocumentTermCounts from_tokens(const DocumentTokens& doc);

    bool operator==(const DocumentTermCounts&) const = default;
};

// Shared term <-> index mapping with per-term document frequencies. Index
// order equals lexicographic term order.
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<std::uint32_t> document_frequency;
    std::uint32_t corpus_size = 0;
    std::unordered_map<std::string, std::uint32_t> term_to_index;

    std::optional<std::uint32_t> index_of(std::string_view term) const;

    // Smoothed, strictly positive: ln((1+N)/(1+df)) + 1.
    double idf(std::uint32_t index) const;

    std::size_t size() const { return terms.size(); }

    bool operator==(const Vocabulary&) const = default;
};

// Builds the vocabulary over the whole corpus (all profile documents plus the
// query document). df counts documents, not occurrences. Throws ConfigError
// when `documents` is empty.
Vocabulary build_vocabulary(std::span<const DocumentTokens> documents);
Vocabulary build_vocabulary_from_counts(std::span<const DocumentTermCounts> documents);

// tf(t,d) * idf(t); 0 when the term is absent from the document or unknown to
// the vocabulary.
double tfidf_weight(std::string_view term, const TokenStream& document, const Vocabulary& vocab);

// Sparse weighted term vector. Entries are (term index, weight), ascending by
// index, weights strictly positive. `norm` caches the Euclidean length,
// accumulated in ascending index order so rebuilds are bit-identical.
struct TfIdfVector {
    std::string doc_id;
    std::vector<std::pair<std::uint32_t, double>> entries;
    double norm = 0.0;

    bool operator==(const TfIdfVector&) const = default;
};

// Recomputes the cached norm from the entries (ascending order).
double vector_norm(const std::vector<std::pair<std::uint32_t, double>>& entries);

TfIdfVector vectorize_document(const DocumentTokens& document, const Vocabulary& vocab);
TfIdfVector vectorize_counts(const DocumentTermCounts& document, const Vocabulary& vocab);

// Debug dump: {"doc_id": ..., "entries": [[term, weight], ...]} sorted by
// term.
std::string vector_dump_json(const TfIdfVector& vec, const Vocabulary& vocab);

} // namespace tweetit
