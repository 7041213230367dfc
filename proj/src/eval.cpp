#include "edstop/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "edstop/csv.hpp"
#include "edstop/stoplist.hpp"
#include "edstop/textnorm.hpp"

namespace edstop {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng() % i)]);
    return idx;
}

namespace {

std::string record_label(const RawRecord& r) {
    if (!r.label) throw std::runtime_error("record " + r.id + " has no label");
    return to_string(*r.label);
}

// Largest-remainder apportionment of `target` across per-label counts:
// each label lands within one of proportional and the sum is exact.
std::map<std::string, std::size_t> apportion(
    const std::map<std::string, std::size_t>& label_totals, double fraction,
    std::size_t target) {
    std::map<std::string, std::size_t> out;
    std::vector<std::pair<double, std::string>> remainders;
    std::size_t assigned = 0;
    for (const auto& [label, n] : label_totals) {
        const double exact = static_cast<double>(n) * fraction;
        const auto base = static_cast<std::size_t>(std::floor(exact));
        out[label] = base;
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), label);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i, ++assigned)
        ++out[remainders[i].second];
    return out;
}

}  // namespace

std::pair<std::vector<RawRecord>, std::vector<RawRecord>> split_train_test(
    std::span<const RawRecord> corpus, const SplitSpec& spec) {
    if (spec.test_fraction <= 0.0 || spec.test_fraction >= 1.0)
        throw std::runtime_error("split: test_fraction must be in (0,1)");
    if (spec.fold_count < 1) throw std::runtime_error("split: fold_count must be >= 1");
    if (corpus.size() < spec.fold_count + 1)
        throw std::runtime_error("split: corpus smaller than fold_count + 1");

    std::map<std::string, std::size_t> label_totals;
    for (const RawRecord& r : corpus) ++label_totals[record_label(r)];
    if (label_totals.size() < 2)
        throw std::runtime_error("split: corpus must contain both labels");

    const auto test_target = static_cast<std::size_t>(
        std::llround(static_cast<double>(corpus.size()) * spec.test_fraction));
    const auto test_counts = apportion(label_totals, spec.test_fraction, test_target);
    for (const auto& [label, n_test] : test_counts) {
        if (n_test == 0)
            throw std::runtime_error("split: label " + label + " absent from test set");
        if (n_test >= label_totals.at(label))
            throw std::runtime_error("split: label " + label + " absent from train set");
    }

    const auto order = shuffled_indices(corpus.size(), spec.seed);
    std::map<std::string, std::size_t> seen;
    std::vector<RawRecord> train, test;
    for (std::size_t i : order) {
        const RawRecord& r = corpus[i];
        const std::string label = record_label(r);
        const std::size_t train_quota = label_totals.at(label) - test_counts.at(label);
        (seen[label]++ < train_quota ? train : test).push_back(r);
    }
    return {std::move(train), std::move(test)};
}

std::vector<std::vector<RawRecord>> make_folds(std::span<const RawRecord> train,
                                               std::size_t fold_count) {
    if (fold_count < 1) throw std::runtime_error("make_folds: fold_count must be >= 1");
    if (train.size() < fold_count)
        throw std::runtime_error("make_folds: fewer records than folds");
    std::vector<std::vector<RawRecord>> folds(fold_count);
    for (std::size_t i = 0; i < train.size(); ++i)
        folds[i % fold_count].push_back(train[i]);
    return folds;
}

void ConfusionMatrix::add(const std::string& truth, const std::string& predicted) {
    ++counts[{truth, predicted}];
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t n = 0;
    for (const auto& [pair, c] : counts) n += c;
    return n;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::uint64_t n = cm.total();
    if (n == 0) throw std::runtime_error("accuracy: empty confusion matrix");
    std::uint64_t correct = 0;
    for (const auto& [pair, c] : cm.counts)
        if (pair.first == pair.second) correct += c;
    return static_cast<double>(correct) / static_cast<double>(n);
}

std::pair<double, double> precision_recall(const ConfusionMatrix& cm,
                                           const std::string& cls) {
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [pair, c] : cm.counts) {
        const auto& [truth, predicted] = pair;
        if (truth == cls && predicted == cls) tp += c;
        else if (predicted == cls) fp += c;
        else if (truth == cls) fn += c;
    }
    const double precision =
        tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall =
        tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    return {precision, recall};
}

double f_measure(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

ClassMetrics class_metrics(const ConfusionMatrix& cm, const std::string& cls) {
    const auto [p, r] = precision_recall(cm, cls);
    return {p, r, f_measure(p, r)};
}

std::string to_string(Classifier c) {
    return c == Classifier::NB ? "NB" : "DT";
}

std::string to_string(Stoplist s) {
    switch (s) {
        case Stoplist::NONE: return "NONE";
        case Stoplist::MSA: return "MSA";
        case Stoplist::ED: return "ED";
        case Stoplist::MSA_ED: return "MSA+ED";
    }
    return "NONE";
}

std::optional<Classifier> parse_classifier(std::string_view s) {
    if (s == "NB") return Classifier::NB;
    if (s == "DT") return Classifier::DT;
    return std::nullopt;
}

std::optional<Stoplist> parse_stoplist(std::string_view s) {
    if (s == "NONE") return Stoplist::NONE;
    if (s == "MSA") return Stoplist::MSA;
    if (s == "ED") return Stoplist::ED;
    if (s == "MSA+ED") return Stoplist::MSA_ED;
    return std::nullopt;
}

std::string cell_id(const CellSpec& cell) {
    return "corpus=" + cell.corpus_name + " stoplist=" + to_string(cell.stoplist) +
           " classifier=" + to_string(cell.classifier) +
           " features=" + to_string(cell.features);
}

namespace {

Example make_example(const RawRecord& r, const StopwordFilter* filter,
                     FeatureKind kind) {
    auto tokens = tokenize(r.text);
    if (filter) tokens = filter->remove(tokens);
    Example e;
    e.features = extract_features(tokens, kind).features;
    e.label = record_label(r);
    return e;
}

ReportRow run_cell_inner(std::span<const RawRecord> corpus, const CellSpec& cell,
                         const StopwordList* list, const EvalOptions& options) {
    std::optional<StopwordFilter> filter;
    if (cell.stoplist != Stoplist::NONE) {
        if (!list) throw std::runtime_error("no stopword list supplied");
        filter.emplace(*list, options.match_mode);
    }

    auto [train, test] = split_train_test(corpus, options.split);
    const auto folds = make_folds(train, options.split.fold_count);

    std::vector<Example> test_examples;
    test_examples.reserve(test.size());
    for (const RawRecord& r : test)
        test_examples.push_back(make_example(r, filter ? &*filter : nullptr, cell.features));

    ReportRow row;
    row.corpus = cell.corpus_name;
    row.classifier = cell.classifier;
    row.features = cell.features;
    row.stoplist = cell.stoplist;

    for (const auto& fold : folds) {
        std::vector<Example> fold_examples;
        fold_examples.reserve(fold.size());
        for (const RawRecord& r : fold)
            fold_examples.push_back(
                make_example(r, filter ? &*filter : nullptr, cell.features));

        const auto started = std::chrono::steady_clock::now();
        NBModel nb;
        DTModel dt;
        if (cell.classifier == Classifier::NB)
            nb = nb_train(fold_examples, options.nb_alpha);
        else
            dt = dt_train(fold_examples, options.dt);
        if (options.record_timing) {
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - started;
            row.train_seconds += elapsed.count();
        }

        ConfusionMatrix cm;
        for (const Example& e : test_examples) {
            const std::string predicted = cell.classifier == Classifier::NB
                                              ? nb_classify(nb, e.features).label
                                              : dt_classify(dt, e.features);
            cm.add(e.label, predicted);
        }
        row.accuracy += accuracy(cm);
        row.f_positive += class_metrics(cm, to_string(Label::positive)).f;
        row.f_negative += class_metrics(cm, to_string(Label::negative)).f;
    }

    const auto n = static_cast<double>(folds.size());
    row.accuracy /= n;
    row.f_positive /= n;
    row.f_negative /= n;
    return row;
}

}  // namespace

ReportRow run_cell(std::span<const RawRecord> corpus, const CellSpec& cell,
                   const StopwordList* list, const EvalOptions& options) {
    try {
        return run_cell_inner(corpus, cell, list, options);
    } catch (const std::exception& e) {
        throw std::runtime_error(cell_id(cell) + ": " + e.what());
    }
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end())
            throw std::runtime_error(where + ": unknown key \"" + key + "\"");
    }
}

std::filesystem::path resolve_existing(const std::filesystem::path& base,
                                       const std::filesystem::path& p,
                                       const std::string& what) {
    const auto resolved = p.is_absolute() ? p : base / p;
    if (!std::filesystem::exists(resolved))
        throw std::runtime_error(what + " file not found: " + resolved.string());
    return resolved;
}

}  // namespace

GridConfig load_grid_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    const std::string where = path.string();
    require_keys(j,
                 {"seed", "test_fraction", "fold_count", "nb_alpha", "dt",
                  "record_timing", "match_mode", "corpora", "lists"},
                 where);

    GridConfig config;
    config.options.split.seed = j.value("seed", std::uint64_t{0});
    config.options.split.test_fraction = j.value("test_fraction", 0.25);
    config.options.split.fold_count = j.value("fold_count", std::size_t{3});
    config.options.nb_alpha = j.value("nb_alpha", 1.0);
    config.options.record_timing = j.value("record_timing", false);
    if (j.contains("dt")) {
        const auto& dt = j.at("dt");
        require_keys(dt, {"entropy_cutoff", "depth_cutoff", "support_cutoff"},
                     where + ": dt");
        config.options.dt.entropy_cutoff = dt.value("entropy_cutoff", 0.8);
        config.options.dt.depth_cutoff = dt.value("depth_cutoff", std::size_t{5});
        config.options.dt.support_cutoff = dt.value("support_cutoff", std::size_t{30});
    }
    if (j.contains("match_mode")) {
        const std::string mode = j.at("match_mode").get<std::string>();
        if (mode == "exact") config.options.match_mode = MatchMode::exact;
        else if (mode == "folded") config.options.match_mode = MatchMode::folded;
        else throw std::runtime_error(where + ": match_mode must be exact or folded");
    }

    if (config.options.split.test_fraction <= 0.0 ||
        config.options.split.test_fraction >= 1.0)
        throw std::runtime_error(where + ": test_fraction must be in (0,1)");
    if (config.options.split.fold_count < 1)
        throw std::runtime_error(where + ": fold_count must be >= 1");
    if (config.options.nb_alpha <= 0.0)
        throw std::runtime_error(where + ": nb_alpha must be positive");

    const auto base = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
    if (!j.contains("corpora") || !j.at("corpora").is_array() || j.at("corpora").empty())
        throw std::runtime_error(where + ": corpora must be a non-empty array");
    for (const auto& entry : j.at("corpora")) {
        require_keys(entry, {"name", "path"}, where + ": corpora entry");
        GridCorpus corpus;
        corpus.name = entry.at("name").get<std::string>();
        if (corpus.name.empty())
            throw std::runtime_error(where + ": corpus name must be non-empty");
        corpus.path = resolve_existing(
            base, entry.at("path").get<std::string>(), "corpus " + corpus.name);
        config.corpora.push_back(std::move(corpus));
    }
    if (!j.contains("lists"))
        throw std::runtime_error(where + ": missing \"lists\" with msa and ed paths");
    const auto& lists = j.at("lists");
    require_keys(lists, {"msa", "ed"}, where + ": lists");
    if (!lists.contains("msa") || !lists.contains("ed"))
        throw std::runtime_error(where + ": lists needs both msa and ed paths");
    config.msa_list = resolve_existing(base, lists.at("msa").get<std::string>(), "msa list");
    config.ed_list = resolve_existing(base, lists.at("ed").get<std::string>(), "ed list");
    return config;
}

GridResult run_grid(const GridConfig& config) {
    const StopwordList msa = load_list(config.msa_list, ListTag::MSA, "MSA");
    const StopwordList ed = load_list(config.ed_list, ListTag::ED, "ED");
    const StopwordList merged = merge_lists(msa, ed);

    GridResult result;
    static constexpr Stoplist kStoplists[] = {Stoplist::NONE, Stoplist::MSA,
                                              Stoplist::ED, Stoplist::MSA_ED};
    static constexpr Classifier kClassifiers[] = {Classifier::NB, Classifier::DT};
    static constexpr FeatureKind kFeatures[] = {FeatureKind::unigram,
                                                FeatureKind::bigram};

    for (const GridCorpus& corpus : config.corpora) {
        std::vector<RawRecord> records;
        try {
            records = load_corpus(corpus.path);
            for (const RawRecord& r : records)
                if (!r.label || *r.label == Label::neutral)
                    throw std::runtime_error("record " + r.id +
                                             " is not labeled positive or negative");
        } catch (const std::exception& e) {
            result.failures.push_back({"corpus=" + corpus.name, e.what()});
            continue;
        }
        for (Stoplist stoplist : kStoplists) {
            const StopwordList* list = nullptr;
            switch (stoplist) {
                case Stoplist::NONE: break;
                case Stoplist::MSA: list = &msa; break;
                case Stoplist::ED: list = &ed; break;
                case Stoplist::MSA_ED: list = &merged; break;
            }
            for (Classifier classifier : kClassifiers) {
                for (FeatureKind features : kFeatures) {
                    const CellSpec cell{corpus.name, stoplist, classifier, features};
                    try {
                        result.rows.push_back(
                            run_cell(records, cell, list, config.options));
                    } catch (const std::exception& e) {
                        // run_cell already prefixes the cell id; keep the
                        // failure message bare.
                        std::string message = e.what();
                        const std::string prefix = cell_id(cell) + ": ";
                        if (message.rfind(prefix, 0) == 0)
                            message.erase(0, prefix.size());
                        result.failures.push_back({cell_id(cell), std::move(message)});
                    }
                }
            }
        }
    }
    return result;
}

namespace {

std::string fixed(double value, int places) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", places, value);
    return buffer;
}

}  // namespace

void write_report_csv(const GridResult& result, std::ostream& out) {
    out << "corpus,classifier,features,stoplist,accuracy,f_pos,f_neg,train_seconds\n";
    for (const ReportRow& row : result.rows) {
        out << csv_field(row.corpus) << ',' << to_string(row.classifier) << ','
            << to_string(row.features) << ',' << to_string(row.stoplist) << ','
            << fixed(row.accuracy, 4) << ',' << fixed(row.f_positive, 4) << ','
            << fixed(row.f_negative, 4) << ',' << fixed(row.train_seconds, 3) << '\n';
    }
    for (const CellFailure& failure : result.failures)
        out << "# failed " << failure.cell << ": " << failure.message << '\n';
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
    std::vector<ReportRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line !=
                "corpus,classifier,features,stoplist,accuracy,f_pos,f_neg,train_seconds")
                throw std::runtime_error("report line 1: unexpected header");
            header_seen = true;
            continue;
        }
        const auto fields = csv_split(line);
        if (fields.size() != 8)
            throw std::runtime_error("report line " + std::to_string(line_no) +
                                     ": expected 8 fields");
        ReportRow row;
        row.corpus = fields[0];
        const auto classifier = parse_classifier(fields[1]);
        const auto features = parse_feature_kind(fields[2]);
        const auto stoplist = parse_stoplist(fields[3]);
        if (!classifier || !features || !stoplist)
            throw std::runtime_error("report line " + std::to_string(line_no) +
                                     ": bad classifier/features/stoplist");
        row.classifier = *classifier;
        row.features = *features;
        row.stoplist = *stoplist;
        try {
            row.accuracy = std::stod(fields[4]);
            row.f_positive = std::stod(fields[5]);
            row.f_negative = std::stod(fields[6]);
            row.train_seconds = std::stod(fields[7]);
        } catch (const std::exception&) {
            throw std::runtime_error("report line " + std::to_string(line_no) +
                                     ": bad numeric field");
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw std::runtime_error("report: missing header");
    return rows;
}

std::string render_report_table(std::span<const ReportRow> rows) {
    const std::vector<std::string> header = {"corpus",   "classifier",   "features",
                                             "stoplist", "accuracy (%)", "F-P",
                                             "F-N",      "train (s)"};
    std::vector<std::vector<std::string>> table;
    table.push_back(header);
    for (const ReportRow& row : rows)
        table.push_back({row.corpus, to_string(row.classifier),
                         to_string(row.features), to_string(row.stoplist),
                         fixed(row.accuracy * 100.0, 2), fixed(row.f_positive, 2),
                         fixed(row.f_negative, 2), fixed(row.train_seconds, 3)});

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : table)
        for (std::size_t i = 0; i < line.size(); ++i)
            widths[i] = std::max(widths[i], line[i].size());

    std::ostringstream out;
    for (const auto& line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) out << "  ";
            // Left-align the identifying columns, right-align the numbers.
            if (i < 4)
                out << line[i] << std::string(widths[i] - line[i].size(), ' ');
            else
                out << std::string(widths[i] - line[i].size(), ' ') << line[i];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace edstop
