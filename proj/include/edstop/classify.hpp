#ifndef EDSTOP_CLASSIFY_HPP
#define EDSTOP_CLASSIFY_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

// The two classifiers: Bernoulli Naive Bayes over presence features and a
// boolean-feature decision tree grown by information gain under the three
// refinement cutoffs (entropy, depth, support).

namespace edstop {

struct Example {
    std::set<std::string> features;
    std::string label;
};

struct FeatureLogProbs {
    double log_present = 0.0;
    double log_absent = 0.0;
};

struct NBModel {
    double alpha = 1.0;
    std::vector<std::string> labels;  // sorted ascending
    std::map<std::string, double> log_prior;
    // feature -> label -> presence/absence log probabilities
    std::map<std::string, std::map<std::string, FeatureLogProbs>> feature_logs;

    const std::set<std::string>& vocabulary() const { return vocabulary_; }
    std::set<std::string> vocabulary_;
};

struct Classification {
    std::string label;
    std::map<std::string, double> log_scores;
};

// Bernoulli presence model with symmetric add-alpha smoothing:
// P(f|l) = (n_fl + alpha) / (n_l + 2*alpha). Needs at least two labels.
NBModel nb_train(std::span<const Example> examples, double alpha = 1.0);

// score(l) = log prior + sum over the training vocabulary of the presence
// or absence log term; unseen features are ignored. Ties go to the
// lexicographically smallest label.
Classification nb_classify(const NBModel& model, const std::set<std::string>& features);

// Shannon entropy in bits of a count distribution. Errors on all-zero.
double entropy(std::span<const std::uint64_t> counts);

struct DTConfig {
    double entropy_cutoff = 0.8;
    std::size_t depth_cutoff = 5;
    std::size_t support_cutoff = 30;
};

struct DTNode {
    bool is_leaf = true;
    std::string label;    // leaf only
    std::string feature;  // split only
    std::unique_ptr<DTNode> present;
    std::unique_ptr<DTNode> absent;
};

struct DTModel {
    std::unique_ptr<DTNode> root;
    DTConfig config;
};

// Recursive growth; a node becomes a leaf with the majority label when its
// entropy is at or below the cutoff, the depth or support cutoff is hit,
// or no feature has positive information gain.
DTModel dt_train(std::span<const Example> examples, const DTConfig& config = {});

std::string dt_classify(const DTModel& model, const std::set<std::string>& features);

// JSON serialization; scores round-trip bit-exactly.
nlohmann::json nb_to_json(const NBModel& model);
NBModel nb_from_json(const nlohmann::json& j);
nlohmann::json dt_to_json(const DTModel& model);
DTModel dt_from_json(const nlohmann::json& j);

}  // namespace edstop

#endif
