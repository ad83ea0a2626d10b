#include "tweetit/terms.hpp"

#include "tweetit/util.hpp"

#include "json.hpp"

#include <algorithm>

namespace tweetit {

double influence_score(std::string_view term, const TfIdfVector& profile_vec,
                       const TfIdfVector& query_vec, const Vocabulary& vocab) {
    const auto index = vocab.index_of(term);
    if (!index) return 0.0;
    auto weight_of = [&](const TfIdfVector& vec) {
        const auto it = std::lower_bound(
            vec.entries.begin(), vec.entries.end(), *index,
            [](const auto& entry, std::uint32_t target) { return entry.first < target; });
        if (it == vec.entries.end() || it->first != *index) return 0.0;
        return it->second;
    };
    return weight_of(profile_vec) * weight_of(query_vec);
}

std::vector<InfluentialTerm> top_terms(const TfIdfVector& profile_vec,
                                       const TfIdfVector& query_vec, const Vocabulary& vocab,
                                       std::uint32_t k, const RecencyBoost* recency) {
    struct Scored {
        std::uint32_t index;
        double profile_weight;
        double query_weight;
        double influence;
    };
    std::vector<Scored> shared;
    auto p = profile_vec.entries.begin();
    auto q = query_vec.entries.begin();
    while (p != profile_vec.entries.end() && q != query_vec.entries.end()) {
        if (p->first < q->first) {
            ++p;
        } else if (q->first < p->first) {
            ++q;
        } else {
            double influence = p->second * q->second;
            if (recency && recency->bonus != 0.0 &&
                recency->recent_term_indices.contains(p->first)) {
                influence *= 1.0 + recency->bonus;
            }
            if (influence > 0.0) {
                shared.push_back({p->first, p->second, q->second, influence});
            }
            ++p;
            ++q;
        }
    }
    const std::size_t take = std::min<std::size_t>(k, shared.size());
    // index ascending == term ascending, by the vocabulary's ordering invariant
    std::partial_sort(shared.begin(), shared.begin() + static_cast<std::ptrdiff_t>(take),
                      shared.end(), [](const Scored& a, const Scored& b) {
                          if (a.influence != b.influence) return a.influence > b.influence;
                          return a.index < b.index;
                      });
    shared.resize(take);

    std::vector<InfluentialTerm> out;
    out.reserve(take);
    for (const Scored& s : shared) {
        out.push_back({vocab.terms[s.index], s.profile_weight, s.query_weight, s.influence});
    }
    return out;
}

std::string terms_to_csv(std::span<const ProfileTerms> profiles) {
    std::string out = "handle,term,influence\n";
    for (const auto& profile : profiles) {
        for (const auto& term : profile.terms) {
            out += csv_field(profile.handle);
            out.push_back(',');
            out += csv_field(term.term);
            out.push_back(',');
            out += format_fixed6(term.influence);
            out.push_back('\n');
        }
    }
    return out;
}

std::string terms_to_json(std::span<const ProfileTerms> profiles) {
    nlohmann::json doc;
    auto& rows = doc["profiles"] = nlohmann::json::array();
    for (const auto& profile : profiles) {
        nlohmann::json entry;
        entry["handle"] = profile.handle;
        auto& terms = entry["terms"] = nlohmann::json::array();
        for (const auto& term : profile.terms) {
            nlohmann::json t;
            t["term"] = term.term;
            t["profile_weight"] = term.profile_weight;
            t["query_weight"] = term.query_weight;
            t["influence"] = term.influence;
            terms.push_back(std::move(t));
        }
        rows.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

} // namespace tweetit
