#ifndef EDSTOP_FEATURES_HPP
#define EDSTOP_FEATURES_HPP

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "edstop/stoplist.hpp"

// Stopword removal and presence-based unigram/bigram feature extraction.

namespace edstop {

enum class FeatureKind { unigram, bigram };
enum class MatchMode { exact, folded };

std::string to_string(FeatureKind k);
std::optional<FeatureKind> parse_feature_kind(std::string_view s);

struct FeatureSet {
    FeatureKind kind = FeatureKind::unigram;
    std::set<std::string> features;  // a bigram id is "first second"
};

// Precomputed match set; folded mode compares fold_variants of both sides.
class StopwordFilter {
  public:
    StopwordFilter(const StopwordList& list, MatchMode mode);

    bool matches(const std::string& token) const;
    std::vector<std::string> remove(std::span<const std::string> tokens) const;

  private:
    std::set<std::string> match_set_;
    MatchMode mode_;
};

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopwordList& list,
                                          MatchMode mode = MatchMode::exact);

FeatureSet unigram_features(std::span<const std::string> tokens);

// Distinct adjacent ordered pairs; fewer than two tokens yield nothing.
FeatureSet bigram_features(std::span<const std::string> tokens);

FeatureSet extract_features(std::span<const std::string> tokens, FeatureKind kind);

}  // namespace edstop

#endif
