// Command-line front end: clean, freq, candidates, review, expand, merge,
// grid, report. Exit codes: 0 success, 1 usage/config error, 2 cell failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edstop/corpus.hpp"
#include "edstop/eval.hpp"
#include "edstop/features.hpp"
#include "edstop/stoplist.hpp"
#include "edstop/textnorm.hpp"

namespace {

using namespace edstop;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

struct CleanArgs {
    std::string in, out, filter_report, source;
    double arabic_threshold = 0.5;
    bool keep_neutral = false;
};

int run_clean(const CleanArgs& args) {
    std::optional<Source> declared;
    if (!args.source.empty()) {
        declared = parse_source(args.source);
        if (!declared) {
            std::cerr << "error: unknown source '" << args.source << "'\n";
            return 1;
        }
    }
    auto records = load_corpus(args.in, declared);
    Source tag;
    if (declared) {
        tag = *declared;
    } else {
        if (records.empty())
            throw std::runtime_error("empty corpus and no --source given");
        tag = records.front().source;
        for (const RawRecord& r : records)
            if (r.source != tag)
                throw std::runtime_error(
                    "corpus mixes sources; pass --source to pick the tag");
    }

    CleanOptions options;
    options.arabic_threshold = args.arabic_threshold;
    options.keep_neutral = args.keep_neutral;
    const CleanCorpus cleaned = clean_corpus(std::move(records), tag, options);

    auto out = open_output(args.out);
    save_corpus(cleaned.records, out);
    if (args.filter_report.empty()) {
        write_filter_csv(cleaned.filter_report, std::cout);
    } else {
        auto report = open_output(args.filter_report);
        write_filter_csv(cleaned.filter_report, report);
    }
    std::cerr << cleaned.records.size() << " records kept ("
              << to_string(cleaned.source_tag) << ")\n";
    return 0;
}

struct FreqArgs {
    std::vector<std::string> inputs;
    std::string out, abbrev;
};

int run_freq(const FreqArgs& args) {
    AbbrevMap abbrev;
    if (!args.abbrev.empty()) abbrev = load_abbrev_map(args.abbrev);

    FrequencyTable table;
    for (const std::string& path : args.inputs) {
        for (const RawRecord& r : load_corpus(path)) {
            if (abbrev.empty())
                add_text(table, r.text);
            else
                add_text(table, apply_abbrev_map(r.text, abbrev));
        }
    }
    if (args.out.empty()) {
        write_frequency_csv(table, std::cout);
    } else {
        auto out = open_output(args.out);
        write_frequency_csv(table, out);
    }
    std::cerr << table.unique_words() << " unique words, " << table.total_tokens
              << " tokens\n";
    return 0;
}

struct CandidatesArgs {
    std::string freq, msa, english, lexicon, out;
    std::size_t top = 200;
};

int run_candidates(const CandidatesArgs& args) {
    std::ifstream freq_in(args.freq);
    if (!freq_in) throw std::runtime_error("cannot open " + args.freq);
    const FrequencyTable table = read_frequency_csv(freq_in);

    const StopwordList msa = load_list(args.msa, ListTag::MSA, "MSA");
    const std::set<std::string> english = load_wordlist(args.english);
    const Lexicon lexicon = load_lexicon(args.lexicon);

    auto candidates = extract_candidates(table, args.top);
    for (CandidateWord& c : candidates)
        c = auto_validate(std::move(c), msa, english, lexicon);

    auto out = open_output(args.out);
    save_candidates(candidates, out);

    std::size_t pending = 0;
    for (const CandidateWord& c : candidates)
        if (c.status == CandidateStatus::pending) ++pending;
    std::cerr << candidates.size() << " candidates, " << pending
              << " pending review\n";
    return 0;
}

struct ReviewArgs {
    std::string candidates, out, log, append_log;
    bool interactive = false;
};

int run_review(const ReviewArgs& args) {
    auto candidates = load_candidates(args.candidates);
    std::vector<Decision> log;
    if (!args.log.empty()) log = load_decision_log(args.log);

    ReviewOptions options;
    options.interactive = args.interactive;
    options.input = &std::cin;
    options.prompt = &std::cout;
    if (!args.append_log.empty()) options.append_log = args.append_log;

    const auto accepted = review_candidates(candidates, log, options);

    // The candidates file is review state; rewrite it with the outcomes.
    auto state = open_output(args.candidates);
    save_candidates(candidates, state);

    StopwordList base;
    base.name = "ed-base";
    base.tag = ListTag::ED;
    base.entries = accepted;
    save_list(base, args.out);
    std::cerr << accepted.size() << " words accepted\n";
    return 0;
}

struct ExpandArgs {
    std::string in, out, name = "ed-generated";
};

int run_expand(const ExpandArgs& args) {
    const StopwordList base = load_list(args.in, ListTag::ED);
    const StopwordList expanded =
        expand_list(base.entries, ExpansionRules::defaults(), args.name);
    save_list(expanded, args.out);
    std::cerr << base.entries.size() << " base words -> " << expanded.entries.size()
              << " entries\n";
    return 0;
}

struct MergeArgs {
    std::string a, b, out;
};

int run_merge(const MergeArgs& args) {
    const StopwordList a = load_list(args.a, ListTag::MERGED);
    const StopwordList b = load_list(args.b, ListTag::MERGED);
    save_list(merge_lists(a, b), args.out);
    return 0;
}

struct GridArgs {
    std::string config, out;
};

int run_grid_cmd(const GridArgs& args) {
    const GridConfig config = load_grid_config(args.config);
    const GridResult result = run_grid(config);
    if (args.out.empty()) {
        write_report_csv(result, std::cout);
    } else {
        auto out = open_output(args.out);
        write_report_csv(result, out);
    }
    for (const CellFailure& f : result.failures)
        std::cerr << "cell failed: " << f.cell << ": " << f.message << "\n";
    return result.ok() ? 0 : 2;
}

struct ReportArgs {
    std::string in;
};

int run_report(const ReportArgs& args) {
    std::ifstream in(args.in);
    if (!in) throw std::runtime_error("cannot open " + args.in);
    const auto rows = read_report_csv(in);
    std::cout << render_report_table(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Egyptian-dialect stopword generation and evaluation toolkit"};
    app.require_subcommand(1);

    CleanArgs clean_args;
    auto* clean = app.add_subcommand(
        "clean", "Filter a raw corpus and emit a labeled two-class corpus");
    clean->add_option("--in", clean_args.in, "raw corpus (JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    clean->add_option("--out", clean_args.out, "cleaned corpus path")->required();
    clean->add_option("--filter-report", clean_args.filter_report,
                      "per-stage CSV (default: stdout)");
    clean->add_option("--source", clean_args.source,
                      "declared source: reviews|facebook|twitter");
    clean->add_option("--arabic-threshold", clean_args.arabic_threshold,
                      "minimum Arabic letter share (default 0.5)");
    clean->add_flag("--keep-neutral", clean_args.keep_neutral,
                    "retain neutral records");

    FreqArgs freq_args;
    auto* freq = app.add_subcommand("freq", "Build a word-frequency CSV from corpora");
    freq->add_option("inputs", freq_args.inputs, "corpus files (JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    freq->add_option("--out", freq_args.out, "frequency CSV (default: stdout)");
    freq->add_option("--abbrev", freq_args.abbrev, "abbreviation map (TSV)")
        ->check(CLI::ExistingFile);

    CandidatesArgs cand_args;
    auto* candidates = app.add_subcommand(
        "candidates", "Extract top-frequency candidates and auto-validate them");
    candidates->add_option("--freq", cand_args.freq, "frequency CSV")
        ->required()
        ->check(CLI::ExistingFile);
    candidates->add_option("--msa", cand_args.msa, "MSA stopword list")
        ->required()
        ->check(CLI::ExistingFile);
    candidates->add_option("--english", cand_args.english, "English stopword list")
        ->required()
        ->check(CLI::ExistingFile);
    candidates->add_option("--lexicon", cand_args.lexicon, "ED-to-MSA lexicon (TSV)")
        ->required()
        ->check(CLI::ExistingFile);
    candidates->add_option("--out", cand_args.out, "candidate state file (TSV)")
        ->required();
    candidates->add_option("--top", cand_args.top, "candidate count (default 200)");

    ReviewArgs review_args;
    auto* review = app.add_subcommand(
        "review", "Resolve pending candidates and write the accepted base list");
    review->add_option("--candidates", review_args.candidates,
                       "candidate state file, rewritten in place")
        ->required()
        ->check(CLI::ExistingFile);
    review->add_option("--out", review_args.out, "accepted base list")->required();
    review->add_option("--log", review_args.log, "decision log (TSV)")
        ->check(CLI::ExistingFile);
    review->add_option("--append-log", review_args.append_log,
                       "append interactive decisions here");
    review->add_flag("--interactive", review_args.interactive,
                     "prompt for unresolved candidates");

    ExpandArgs expand_args;
    auto* expand = app.add_subcommand(
        "expand", "Expand a base list with prefixes, suffixes and letter variants");
    expand->add_option("--in", expand_args.in, "base list")
        ->required()
        ->check(CLI::ExistingFile);
    expand->add_option("--out", expand_args.out, "expanded list")->required();
    expand->add_option("--name", expand_args.name, "list name");

    MergeArgs merge_args;
    auto* merge = app.add_subcommand("merge", "Union two stopword lists");
    merge->add_option("a", merge_args.a, "first list")
        ->required()
        ->check(CLI::ExistingFile);
    merge->add_option("b", merge_args.b, "second list")
        ->required()
        ->check(CLI::ExistingFile);
    merge->add_option("--out", merge_args.out, "merged list")->required();

    GridArgs grid_args;
    auto* grid = app.add_subcommand(
        "grid", "Run the corpus x stoplist x classifier x features grid");
    grid->add_option("--config", grid_args.config, "grid config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    grid->add_option("--out", grid_args.out, "report CSV (default: stdout)");

    ReportArgs report_args;
    auto* report =
        app.add_subcommand("report", "Render a report CSV as an aligned table");
    report->add_option("in", report_args.in, "report CSV")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (clean->parsed()) return run_clean(clean_args);
        if (freq->parsed()) return run_freq(freq_args);
        if (candidates->parsed()) return run_candidates(cand_args);
        if (review->parsed()) return run_review(review_args);
        if (expand->parsed()) return run_expand(expand_args);
        if (merge->parsed()) return run_merge(merge_args);
        if (grid->parsed()) return run_grid_cmd(grid_args);
        if (report->parsed()) return run_report(report_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
