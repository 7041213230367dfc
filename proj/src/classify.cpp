#include "edstop/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edstop {

namespace {

std::map<std::string, std::uint64_t> label_counts(std::span<const Example> examples) {
    std::map<std::string, std::uint64_t> counts;
    for (const Example& e : examples) ++counts[e.label];
    return counts;
}

double counts_entropy(const std::map<std::string, std::uint64_t>& counts) {
    std::vector<std::uint64_t> values;
    values.reserve(counts.size());
    for (const auto& [label, n] : counts) values.push_back(n);
    return entropy(values);
}

std::string majority_label(const std::map<std::string, std::uint64_t>& counts) {
    std::string best;
    std::uint64_t best_count = 0;
    for (const auto& [label, n] : counts) {
        if (n > best_count) {  // map order breaks ties by label name
            best = label;
            best_count = n;
        }
    }
    return best;
}

}  // namespace

NBModel nb_train(std::span<const Example> examples, double alpha) {
    if (examples.empty()) throw std::runtime_error("nb_train: no training examples");
    if (alpha <= 0.0) throw std::runtime_error("nb_train: alpha must be positive");

    const auto counts = label_counts(examples);
    if (counts.size() < 2)
        throw std::runtime_error("nb_train: training set has a single label");

    NBModel model;
    model.alpha = alpha;
    for (const auto& [label, n] : counts) {
        model.labels.push_back(label);
        model.log_prior[label] =
            std::log(static_cast<double>(n) / static_cast<double>(examples.size()));
    }

    std::map<std::string, std::map<std::string, std::uint64_t>> present_counts;
    for (const Example& e : examples) {
        for (const std::string& f : e.features) {
            model.vocabulary_.insert(f);
            ++present_counts[f][e.label];
        }
    }

    for (const std::string& f : model.vocabulary_) {
        auto& per_label = model.feature_logs[f];
        for (const auto& [label, n_label] : counts) {
            const auto& fc = present_counts[f];
            const auto it = fc.find(label);
            const double n_present = it != fc.end() ? static_cast<double>(it->second) : 0.0;
            const double denom = static_cast<double>(n_label) + 2.0 * alpha;
            per_label[label] = FeatureLogProbs{
                std::log((n_present + alpha) / denom),
                std::log((static_cast<double>(n_label) - n_present + alpha) / denom)};
        }
    }
    return model;
}

Classification nb_classify(const NBModel& model, const std::set<std::string>& features) {
    if (model.labels.empty()) throw std::runtime_error("nb_classify: model not trained");

    Classification result;
    for (const std::string& label : model.labels) {
        double score = model.log_prior.at(label);
        for (const auto& [feature, per_label] : model.feature_logs) {
            const FeatureLogProbs& lp = per_label.at(label);
            score += features.count(feature) ? lp.log_present : lp.log_absent;
        }
        result.log_scores[label] = score;
    }

    std::string best = model.labels.front();
    for (const std::string& label : model.labels)
        if (result.log_scores[label] > result.log_scores[best]) best = label;
    result.label = best;
    return result;
}

double entropy(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) throw std::runtime_error("entropy: all counts are zero");
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

struct GainSplit {
    std::string feature;
    double gain = 0.0;
};

// Best positive-gain feature, ties by feature id ascending; nullopt when no
// feature improves on the node entropy.
std::optional<GainSplit> best_split(std::span<const Example* const> examples,
                                    double node_entropy) {
    std::map<std::string, std::map<std::string, std::uint64_t>> present_by_feature;
    std::map<std::string, std::uint64_t> node_counts;
    for (const Example* e : examples) {
        ++node_counts[e->label];
        for (const std::string& f : e->features) ++present_by_feature[f][e->label];
    }

    const double total = static_cast<double>(examples.size());
    std::optional<GainSplit> best;
    for (const auto& [feature, present_counts] : present_by_feature) {
        std::uint64_t n_present = 0;
        for (const auto& [label, n] : present_counts) n_present += n;
        const std::uint64_t n_absent = examples.size() - n_present;
        if (n_present == 0 || n_absent == 0) continue;

        std::map<std::string, std::uint64_t> absent_counts;
        for (const auto& [label, n] : node_counts) {
            const auto it = present_counts.find(label);
            const std::uint64_t p = it != present_counts.end() ? it->second : 0;
            if (n > p) absent_counts[label] = n - p;
        }
        const double gain =
            node_entropy -
            (static_cast<double>(n_present) / total) * counts_entropy(present_counts) -
            (static_cast<double>(n_absent) / total) * counts_entropy(absent_counts);
        if (gain > 0.0 && (!best || gain > best->gain))
            best = GainSplit{feature, gain};
    }
    return best;
}

std::unique_ptr<DTNode> grow(std::span<const Example* const> examples,
                             std::size_t depth, const DTConfig& config) {
    const auto counts = [&] {
        std::map<std::string, std::uint64_t> c;
        for (const Example* e : examples) ++c[e->label];
        return c;
    }();
    const double node_entropy = counts_entropy(counts);

    auto leaf = [&] {
        auto node = std::make_unique<DTNode>();
        node->is_leaf = true;
        node->label = majority_label(counts);
        return node;
    };

    if (node_entropy <= config.entropy_cutoff) return leaf();
    if (depth >= config.depth_cutoff) return leaf();
    if (examples.size() <= config.support_cutoff) return leaf();

    const auto split = best_split(examples, node_entropy);
    if (!split) return leaf();

    std::vector<const Example*> present, absent;
    for (const Example* e : examples)
        (e->features.count(split->feature) ? present : absent).push_back(e);

    auto node = std::make_unique<DTNode>();
    node->is_leaf = false;
    node->feature = split->feature;
    node->present = grow(present, depth + 1, config);
    node->absent = grow(absent, depth + 1, config);
    return node;
}

}  // namespace

DTModel dt_train(std::span<const Example> examples, const DTConfig& config) {
    if (examples.empty()) throw std::runtime_error("dt_train: no training examples");
    std::vector<const Example*> ptrs;
    ptrs.reserve(examples.size());
    for (const Example& e : examples) ptrs.push_back(&e);

    DTModel model;
    model.config = config;
    model.root = grow(ptrs, 0, config);
    return model;
}

std::string dt_classify(const DTModel& model, const std::set<std::string>& features) {
    if (!model.root) throw std::runtime_error("dt_classify: model not trained");
    const DTNode* node = model.root.get();
    while (!node->is_leaf)
        node = features.count(node->feature) ? node->present.get() : node->absent.get();
    return node->label;
}

nlohmann::json nb_to_json(const NBModel& model) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = "naive_bayes";
    j["alpha"] = model.alpha;
    j["labels"] = model.labels;
    j["log_prior"] = model.log_prior;
    nlohmann::json feats = nlohmann::json::object();
    for (const auto& [feature, per_label] : model.feature_logs) {
        nlohmann::json fl = nlohmann::json::object();
        for (const auto& [label, lp] : per_label)
            fl[label] = {lp.log_present, lp.log_absent};
        feats[feature] = std::move(fl);
    }
    j["features"] = std::move(feats);
    return j;
}

NBModel nb_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != 1 || j.value("model", "") != "naive_bayes")
        throw std::runtime_error("nb_from_json: not a version-1 naive_bayes document");
    NBModel model;
    model.alpha = j.at("alpha").get<double>();
    model.labels = j.at("labels").get<std::vector<std::string>>();
    model.log_prior = j.at("log_prior").get<std::map<std::string, double>>();
    for (const auto& [feature, per_label] : j.at("features").items()) {
        model.vocabulary_.insert(feature);
        for (const auto& [label, pair] : per_label.items())
            model.feature_logs[feature][label] =
                FeatureLogProbs{pair.at(0).get<double>(), pair.at(1).get<double>()};
    }
    return model;
}

namespace {

nlohmann::json node_to_json(const DTNode& node) {
    nlohmann::json j;
    if (node.is_leaf) {
        j["leaf"] = node.label;
    } else {
        j["split"] = node.feature;
        j["present"] = node_to_json(*node.present);
        j["absent"] = node_to_json(*node.absent);
    }
    return j;
}

std::unique_ptr<DTNode> node_from_json(const nlohmann::json& j) {
    auto node = std::make_unique<DTNode>();
    if (j.contains("leaf")) {
        node->is_leaf = true;
        node->label = j.at("leaf").get<std::string>();
    } else {
        node->is_leaf = false;
        node->feature = j.at("split").get<std::string>();
        node->present = node_from_json(j.at("present"));
        node->absent = node_from_json(j.at("absent"));
    }
    return node;
}

}  // namespace

nlohmann::json dt_to_json(const DTModel& model) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = "decision_tree";
    j["config"] = {{"entropy_cutoff", model.config.entropy_cutoff},
                   {"depth_cutoff", model.config.depth_cutoff},
                   {"support_cutoff", model.config.support_cutoff}};
    j["root"] = node_to_json(*model.root);
    return j;
}

DTModel dt_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != 1 || j.value("model", "") != "decision_tree")
        throw std::runtime_error("dt_from_json: not a version-1 decision_tree document");
    DTModel model;
    model.config.entropy_cutoff = j.at("config").at("entropy_cutoff").get<double>();
    model.config.depth_cutoff = j.at("config").at("depth_cutoff").get<std::size_t>();
    model.config.support_cutoff = j.at("config").at("support_cutoff").get<std::size_t>();
    model.root = node_from_json(j.at("root"));
    return model;
}

}  // namespace edstop
