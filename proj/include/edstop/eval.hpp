#ifndef EDSTOP_EVAL_HPP
#define EDSTOP_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edstop/classify.hpp"
#include "edstop/corpus.hpp"
#include "edstop/features.hpp"

// Train/test protocol, metrics, and the experiment grid
// (corpora x stoplists x classifiers x feature kinds) with CSV reports.

namespace edstop {

struct SplitSpec {
    double test_fraction = 0.25;
    std::size_t fold_count = 3;
    std::uint64_t seed = 0;
};

// Seeded Fisher-Yates over 0..n-1. Hand-rolled because std::shuffle does
// not pin the algorithm, and reports must be reproducible across builds.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// Stratified split: seeded shuffle, then per label the first
// (1 - test_fraction) share goes to train, the rest to test. Per-label
// counts stay within one record of proportional and the totals are exact.
// Errors when a label would be missing from either side.
std::pair<std::vector<RawRecord>, std::vector<RawRecord>> split_train_test(
    std::span<const RawRecord> corpus, const SplitSpec& spec);

// Round-robin partition of the train order; sizes differ by at most one.
std::vector<std::vector<RawRecord>> make_folds(std::span<const RawRecord> train,
                                               std::size_t fold_count);

struct ConfusionMatrix {
    // (true label, predicted label) -> count
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;

    void add(const std::string& truth, const std::string& predicted);
    std::uint64_t total() const;
};

double accuracy(const ConfusionMatrix& cm);

// Both are 0 when their denominator is 0.
std::pair<double, double> precision_recall(const ConfusionMatrix& cm,
                                           const std::string& cls);

// 2pr/(p+r), 0 when p + r = 0.
double f_measure(double precision, double recall);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

ClassMetrics class_metrics(const ConfusionMatrix& cm, const std::string& cls);

enum class Classifier { NB, DT };
enum class Stoplist { NONE, MSA, ED, MSA_ED };

std::string to_string(Classifier c);
std::string to_string(Stoplist s);
std::optional<Classifier> parse_classifier(std::string_view s);
std::optional<Stoplist> parse_stoplist(std::string_view s);

struct ReportRow {
    std::string corpus;
    Classifier classifier = Classifier::NB;
    FeatureKind features = FeatureKind::unigram;
    Stoplist stoplist = Stoplist::NONE;
    double accuracy = 0.0;
    double f_positive = 0.0;
    double f_negative = 0.0;
    double train_seconds = 0.0;
};

struct CellSpec {
    std::string corpus_name;
    Stoplist stoplist = Stoplist::NONE;
    Classifier classifier = Classifier::NB;
    FeatureKind features = FeatureKind::unigram;
};

std::string cell_id(const CellSpec& cell);

struct EvalOptions {
    SplitSpec split;
    double nb_alpha = 1.0;
    DTConfig dt;
    MatchMode match_mode = MatchMode::exact;
    // Off by default so identical runs give byte-identical reports;
    // train_seconds is written as 0.000 when off.
    bool record_timing = false;
};

// One grid cell: split once, train one model per fold, score every fold's
// model on the fixed test set, and average accuracy/F over folds.
// train_seconds is the summed wall-clock training time of the folds.
// The list is ignored for the NONE condition and required otherwise.
// Errors carry the cell id.
ReportRow run_cell(std::span<const RawRecord> corpus, const CellSpec& cell,
                   const StopwordList* list, const EvalOptions& options);

struct GridCorpus {
    std::string name;
    std::filesystem::path path;
};

struct GridConfig {
    EvalOptions options;
    std::vector<GridCorpus> corpora;
    std::filesystem::path msa_list;
    std::filesystem::path ed_list;
};

// JSON config file; relative paths resolve against the config's directory
// and every referenced file must exist. Unknown keys are errors.
GridConfig load_grid_config(const std::filesystem::path& path);

struct CellFailure {
    std::string cell;
    std::string message;
};

struct GridResult {
    std::vector<ReportRow> rows;  // corpus, stoplist, classifier, features nesting
    std::vector<CellFailure> failures;

    bool ok() const { return failures.empty(); }
};

// Full cartesian product; a failing cell is noted and the rest continue.
GridResult run_grid(const GridConfig& config);

// Header `corpus,classifier,features,stoplist,accuracy,f_pos,f_neg,
// train_seconds`; failures appended as `#` comment lines.
void write_report_csv(const GridResult& result, std::ostream& out);
std::vector<ReportRow> read_report_csv(std::istream& in);

// Aligned text table, accuracy as a percentage.
std::string render_report_table(std::span<const ReportRow> rows);

}  // namespace edstop

#endif
