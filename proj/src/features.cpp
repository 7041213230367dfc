#include "edstop/features.hpp"

#include "edstop/textnorm.hpp"

namespace edstop {

std::string to_string(FeatureKind k) {
    return k == FeatureKind::unigram ? "unigram" : "bigram";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view s) {
    if (s == "unigram") return FeatureKind::unigram;
    if (s == "bigram") return FeatureKind::bigram;
    return std::nullopt;
}

StopwordFilter::StopwordFilter(const StopwordList& list, MatchMode mode) : mode_(mode) {
    if (mode == MatchMode::exact) {
        match_set_ = list.entries;
    } else {
        for (const std::string& entry : list.entries)
            match_set_.insert(fold_variants(entry));
    }
}

bool StopwordFilter::matches(const std::string& token) const {
    if (mode_ == MatchMode::exact) return match_set_.count(token) > 0;
    return match_set_.count(fold_variants(token)) > 0;
}

std::vector<std::string> StopwordFilter::remove(std::span<const std::string> tokens) const {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const std::string& tok : tokens)
        if (!matches(tok)) kept.push_back(tok);
    return kept;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopwordList& list, MatchMode mode) {
    return StopwordFilter(list, mode).remove(tokens);
}

FeatureSet unigram_features(std::span<const std::string> tokens) {
    FeatureSet fs;
    fs.kind = FeatureKind::unigram;
    fs.features.insert(tokens.begin(), tokens.end());
    return fs;
}

FeatureSet bigram_features(std::span<const std::string> tokens) {
    FeatureSet fs;
    fs.kind = FeatureKind::bigram;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        fs.features.insert(tokens[i] + " " + tokens[i + 1]);
    return fs;
}

FeatureSet extract_features(std::span<const std::string> tokens, FeatureKind kind) {
    return kind == FeatureKind::unigram ? unigram_features(tokens)
                                        : bigram_features(tokens);
}

}  // namespace edstop
