// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failed criteria. Runs against the bundled fixtures and the built CLI.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "edstop/classify.hpp"
#include "edstop/corpus.hpp"
#include "edstop/eval.hpp"
#include "edstop/features.hpp"
#include "edstop/stoplist.hpp"
#include "edstop/textnorm.hpp"
#include "edstop/unicode.hpp"

using namespace edstop;

namespace {

using Problems = std::vector<std::string>;

void expect(Problems& problems, bool ok, const std::string& message) {
    if (!ok) problems.push_back(message);
}

std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(EDSTOP_FIXTURE_DIR) / name;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

int run_criterion(int number, const std::string& label,
                  const std::function<void(Problems&)>& body) {
    Problems problems;
    try {
        body(problems);
    } catch (const std::exception& e) {
        problems.push_back(std::string("unexpected exception: ") + e.what());
    }
    if (problems.empty()) {
        std::cout << "PASS criterion " << number << ": " << label << "\n";
        return 0;
    }
    std::cout << "FAIL criterion " << number << ": " << label << "\n";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 8);
    for (std::size_t i = 0; i < shown; ++i)
        std::cout << "    - " << problems[i] << "\n";
    if (problems.size() > shown)
        std::cout << "    (" << problems.size() - shown << " more)\n";
    return 1;
}

// ---- criterion 1: cleaning cascade on the hand-labeled fixture ----

void criterion_cleaning(Problems& problems) {
    const auto start = std::chrono::steady_clock::now();
    auto records = load_corpus(fixture("facebook_30.jsonl"));
    expect(problems, records.size() == 30,
           "fixture should hold 30 records, got " + std::to_string(records.size()));

    const CleanCorpus cleaned = clean_corpus(records, Source::facebook);

    const std::vector<FilterStage> want = {{"url_only", 30, 26},
                                           {"media_only", 26, 23},
                                           {"mention_only", 23, 20},
                                           {"non_arabic", 20, 15},
                                           {"drop_neutral", 15, 11}};
    const auto& stages = cleaned.filter_report.stages;
    expect(problems, stages.size() == want.size(),
           "expected " + std::to_string(want.size()) + " filter stages, got " +
               std::to_string(stages.size()));
    for (std::size_t i = 0; i < want.size() && i < stages.size(); ++i) {
        if (stages[i].name != want[i].name ||
            stages[i].count_before != want[i].count_before ||
            stages[i].count_after != want[i].count_after)
            problems.push_back("stage " + want[i].name + ": expected " +
                               std::to_string(want[i].count_before) + "->" +
                               std::to_string(want[i].count_after) + ", got " +
                               stages[i].name + " " +
                               std::to_string(stages[i].count_before) + "->" +
                               std::to_string(stages[i].count_after));
    }

    const std::vector<std::string> survivors = {"f01", "f04", "f05", "f08", "f13",
                                                "f17", "f21", "f25", "f26", "f29",
                                                "f30"};
    std::vector<std::string> got_ids;
    std::size_t positives = 0;
    for (const RawRecord& r : cleaned.records) {
        got_ids.push_back(r.id);
        if (r.label == Label::positive) ++positives;
    }
    expect(problems, got_ids == survivors, "surviving record ids differ");
    expect(problems, positives == 7,
           "expected 7 positive survivors, got " + std::to_string(positives));

    // Running the cascade again must change nothing.
    const CleanCorpus again = clean_corpus(cleaned.records, Source::facebook);
    expect(problems, again.records == cleaned.records,
           "cleaning is not idempotent: records changed on the second pass");
    for (const FilterStage& s : again.filter_report.stages)
        expect(problems, s.count_before == s.count_after,
               "second pass dropped records at stage " + s.name);

    const double elapsed = seconds_since(start);
    expect(problems, elapsed < 1.0,
           "took " + std::to_string(elapsed) + "s, limit 1s");
}

// ---- criterion 2: NB equals a rational joint-probability oracle ----

void criterion_nb_oracle(Problems& problems) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::string> feature_names = {"f0", "f1", "f2"};
    std::size_t datasets = 0;

    for (std::size_t n : {std::size_t{8}, std::size_t{9}}) {
        std::vector<std::set<std::string>> patterns(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t f = 0; f < 3; ++f)
                if ((i % 8) & (1u << f)) patterns[i].insert(feature_names[f]);

        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            std::vector<Example> data(n);
            std::array<std::uint64_t, 2> label_n = {0, 0};  // [neg, pos]
            std::array<std::array<std::uint64_t, 2>, 3> present_n{};
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t l = (mask >> i) & 1;
                data[i].features = patterns[i];
                data[i].label = l ? "pos" : "neg";
                ++label_n[l];
                for (std::size_t f = 0; f < 3; ++f)
                    if ((i % 8) & (1u << f)) ++present_n[f][l];
            }

            const NBModel model = nb_train(data, 1.0);
            ++datasets;

            for (unsigned query = 0; query < 8 && problems.size() < 32; ++query) {
                std::set<std::string> features;
                for (std::size_t f = 0; f < 3; ++f)
                    if (query & (1u << f)) features.insert(feature_names[f]);
                const Classification got = nb_classify(model, features);

                // Exact joint probability per label as num/den over integers.
                std::array<std::int64_t, 2> num{}, den{};
                std::array<long double, 2> ref{};
                for (std::size_t l = 0; l < 2; ++l) {
                    const std::int64_t nl = static_cast<std::int64_t>(label_n[l]);
                    num[l] = nl;
                    den[l] = static_cast<std::int64_t>(n);
                    ref[l] = std::log(static_cast<long double>(nl)) -
                             std::log(static_cast<long double>(n));
                    for (std::size_t f = 0; f < 3; ++f) {
                        const std::int64_t present =
                            static_cast<std::int64_t>(present_n[f][l]);
                        const std::int64_t t =
                            (query & (1u << f)) ? present + 1 : nl - present + 1;
                        num[l] *= t;
                        den[l] *= nl + 2;
                        ref[l] += std::log(static_cast<long double>(t)) -
                                  std::log(static_cast<long double>(nl + 2));
                    }
                }

                const std::array<std::string, 2> names = {"neg", "pos"};
                for (std::size_t l = 0; l < 2; ++l) {
                    const double got_score = got.log_scores.at(names[l]);
                    if (std::abs(got_score - static_cast<double>(ref[l])) > 1e-9)
                        problems.push_back(
                            "n=" + std::to_string(n) + " mask=" + std::to_string(mask) +
                            " query=" + std::to_string(query) + " label=" + names[l] +
                            ": score " + std::to_string(got_score) + " vs oracle " +
                            std::to_string(static_cast<double>(ref[l])));
                }

                const std::int64_t lhs = num[0] * den[1];  // neg joint cross term
                const std::int64_t rhs = num[1] * den[0];  // pos joint cross term
                std::string expected;
                if (lhs > rhs) expected = "neg";
                else if (rhs > lhs) expected = "pos";
                if (!expected.empty()) {
                    if (got.label != expected)
                        problems.push_back("n=" + std::to_string(n) + " mask=" +
                                           std::to_string(mask) + " query=" +
                                           std::to_string(query) + ": argmax " +
                                           got.label + ", oracle " + expected);
                } else if (got.log_scores.at("neg") == got.log_scores.at("pos")) {
                    // On an exact tie the smaller label must win.
                    if (got.label != "neg")
                        problems.push_back("tie broken toward " + got.label +
                                           " instead of neg (mask " +
                                           std::to_string(mask) + ")");
                }
            }
            if (problems.size() >= 32) break;
        }
        if (problems.size() >= 32) break;
    }

    expect(problems, datasets >= 500,
           "only " + std::to_string(datasets) + " datasets exercised, need >= 500");
    const double elapsed = seconds_since(start);
    expect(problems, elapsed < 30.0,
           "took " + std::to_string(elapsed) + "s, limit 30s");
}

// ---- criterion 3: decision-tree cutoff contract ----

void dt_walk(const DTNode* node, const std::vector<const Example*>& reached,
             std::size_t depth, const DTConfig& config, Problems& problems) {
    if (!node) {
        problems.push_back("missing child node");
        return;
    }
    if (node->is_leaf) {
        expect(problems, !node->label.empty(), "leaf without a label");
        return;
    }
    expect(problems, depth < config.depth_cutoff,
           "split at depth " + std::to_string(depth) + " despite cutoff " +
               std::to_string(config.depth_cutoff));
    expect(problems, reached.size() > config.support_cutoff,
           "split with support " + std::to_string(reached.size()) +
               " despite cutoff " + std::to_string(config.support_cutoff));
    std::map<std::string, std::uint64_t> counts;
    for (const Example* e : reached) ++counts[e->label];
    std::vector<std::uint64_t> values;
    for (const auto& [label, c] : counts) values.push_back(c);
    expect(problems, entropy(values) > config.entropy_cutoff,
           "split on a node with entropy at or below the cutoff");

    std::vector<const Example*> present, absent;
    for (const Example* e : reached)
        (e->features.count(node->feature) ? present : absent).push_back(e);
    expect(problems, !present.empty() && !absent.empty(),
           "degenerate split on feature " + node->feature);
    dt_walk(node->present.get(), present, depth + 1, config, problems);
    dt_walk(node->absent.get(), absent, depth + 1, config, problems);
}

void criterion_dt_contract(Problems& problems) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240817);
    std::bernoulli_distribution coin(0.5);
    const DTConfig defaults;
    std::size_t datasets = 0;

    for (int trial = 0; trial < 220 && problems.size() < 32; ++trial) {
        const std::size_t n = 40 + rng() % 160;
        const std::size_t feature_count = 4 + rng() % 4;
        std::vector<Example> data(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < feature_count; ++f)
                if (coin(rng)) data[i].features.insert("f" + std::to_string(f));
            data[i].label = coin(rng) ? "pos" : "neg";
        }
        data[0].label = "pos";
        data[1].label = "neg";

        const DTModel model = dt_train(data, defaults);
        std::vector<const Example*> ptrs;
        for (const Example& e : data) ptrs.push_back(&e);
        dt_walk(model.root.get(), ptrs, 0, defaults, problems);
        ++datasets;
    }
    expect(problems, datasets >= 200,
           "only " + std::to_string(datasets) + " datasets exercised, need >= 200");

    // With the cutoffs disabled, data labeled by a decision list (first
    // present feature decides) must be fitted perfectly.
    const std::vector<std::string> features = {"f0", "f1", "f2", "f3", "f4", "f5"};
    for (int trial = 0; trial < 30 && problems.size() < 32; ++trial) {
        std::vector<std::string> order = features;
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[rng() % (i + 1)]);
        const std::size_t rule_count = 1 + rng() % 4;
        std::vector<std::pair<std::string, std::string>> rules;
        for (std::size_t r = 0; r < rule_count; ++r)
            rules.emplace_back(order[r], coin(rng) ? "pos" : "neg");
        const std::string fallback = coin(rng) ? "pos" : "neg";

        std::vector<Example> data(100);
        for (Example& e : data) {
            for (const std::string& f : features)
                if (coin(rng)) e.features.insert(f);
            e.label = fallback;
            for (const auto& [feature, label] : rules) {
                if (e.features.count(feature)) {
                    e.label = label;
                    break;
                }
            }
        }

        DTConfig open;
        open.entropy_cutoff = 0.0;
        open.depth_cutoff = 256;
        open.support_cutoff = 0;
        const DTModel model = dt_train(data, open);
        std::size_t wrong = 0;
        for (const Example& e : data)
            if (dt_classify(model, e.features) != e.label) ++wrong;
        expect(problems, wrong == 0,
               "trial " + std::to_string(trial) + ": " + std::to_string(wrong) +
                   " of 100 training examples misclassified");
    }

    const double elapsed = seconds_since(start);
    expect(problems, elapsed < 30.0,
           "took " + std::to_string(elapsed) + "s, limit 30s");
}

// ---- criterion 4: metric identities ----

void criterion_metrics(Problems& problems) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(1e-6, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p = unit(rng);
        if (std::abs(f_measure(p, p) - p) > 1e-12) {
            problems.push_back("f_measure(p,p) != p at p=" + std::to_string(p));
            break;
        }
    }

    ConfusionMatrix cm;
    for (int i = 0; i < 3; ++i) cm.add("positive", "positive");
    for (int i = 0; i < 2; ++i) cm.add("positive", "negative");
    cm.add("negative", "positive");
    for (int i = 0; i < 2; ++i) cm.add("negative", "negative");

    expect(problems, accuracy(cm) == 0.625, "accuracy of the 8-example matrix");
    const auto [p, r] = precision_recall(cm, "positive");
    expect(problems, p == 0.75, "positive precision should be 0.75");
    expect(problems, r == 0.6, "positive recall should be 0.6");
    const double f = f_measure(p, r);
    expect(problems, std::abs(f - 2.0 * p * r / (p + r)) == 0.0,
           "F must equal 2pr/(p+r)");
    expect(problems, std::abs(f - 2.0 / 3.0) < 1e-12, "F of (0.75, 0.6)");

    const std::vector<std::uint64_t> counts = {3, 1};
    expect(problems, std::abs(entropy(counts) - 0.8113) < 1e-4,
           "entropy([3,1]) should be 0.8113 within 1e-4");
}

// ---- criterion 5: expansion counts and determinism ----

std::size_t variant_group_product(const std::string& word, const ExpansionRules& rules) {
    std::size_t product = 1;
    for (char32_t cp : uni::decode_utf8(word))
        for (const std::u32string& g : rules.variant_groups)
            if (g.find(cp) != std::u32string::npos) product *= g.size();
    return product;
}

void criterion_expansion(Problems& problems) {
    const ExpansionRules rules = ExpansionRules::defaults();

    const auto plain = expand_word("مش", rules);
    expect(problems, plain.size() == 12,
           "expand_word on a plain word: expected 12 forms, got " +
               std::to_string(plain.size()));
    expect(problems, plain.count("مش") && plain.count("المش") && plain.count("والمش"),
           "expand_word misses expected prefixed forms");

    const auto marked = expand_word("بتاع", rules);
    expect(problems, marked.size() == 19,
           "expand_word on a possession marker: expected 19 forms, got " +
               std::to_string(marked.size()));
    for (const std::string& suffix : rules.pronoun_suffixes)
        expect(problems, marked.count("بتاع" + suffix) == 1,
               "missing pronoun-suffixed form for suffix " + suffix);

    for (const std::string word : {"مبني", "انا", "ديه", "مش", "بتاعة", "هي"}) {
        const std::size_t got = generate_variants(word, rules).size();
        const std::size_t want = variant_group_product(word, rules);
        expect(problems, got == want,
               "variants of " + word + ": got " + std::to_string(got) +
                   ", expected " + std::to_string(want));
    }

    const std::set<std::string> base = {"بس", "انا", "بتاع"};
    std::mt19937_64 rng(std::random_device{}());
    const auto dir = std::filesystem::temp_directory_path() /
                     ("edstop-expand-" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    save_list(expand_list(base, rules), dir / "a.txt");
    save_list(expand_list(base, rules), dir / "b.txt");
    auto slurp = [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string first = slurp(dir / "a.txt");
    expect(problems, !first.empty() && first == slurp(dir / "b.txt"),
           "expanded list export is not byte identical across runs");
}

// ---- criterion 6: validity cascade worked examples ----

void criterion_validity(Problems& problems) {
    const StopwordList msa = load_list(fixture("msa_small.txt"), ListTag::MSA);
    const auto english = load_wordlist(fixture("english_small.txt"));
    const Lexicon lexicon = load_lexicon(fixture("lexicon_small.tsv"));

    auto check = [&](const std::string& word, CandidateReason want,
                     const std::string& want_name) {
        CandidateWord c;
        c.surface = word;
        c.frequency = 1;
        c = auto_validate(std::move(c), msa, english, lexicon);
        if (c.status != CandidateStatus::accepted || c.reason != want)
            problems.push_back(word + ": expected accepted/" + want_name + ", got " +
                               to_string(c.status) + "/" + to_string(c.reason));
    };
    check("من", CandidateReason::in_msa_list, "in_msa_list");
    check("بس", CandidateReason::msa_via_lexicon, "msa_via_lexicon");
    check("لازم", CandidateReason::english_via_lexicon, "english_via_lexicon");
}

// ---- criteria 7 and 8: the CLI pipeline on the synthetic corpus ----

struct Pipeline {
    std::filesystem::path dir;
    std::filesystem::path base_list;
    std::filesystem::path ed_list;
    std::filesystem::path config;
    std::vector<std::string> errors;
};

std::string shell_quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128;
}

const Pipeline& pipeline() {
    static const Pipeline instance = [] {
        Pipeline p;
        std::mt19937_64 rng(std::random_device{}());
        p.dir = std::filesystem::temp_directory_path() /
                ("edstop-accept-" + std::to_string(rng()));
        std::filesystem::create_directories(p.dir);
        p.base_list = p.dir / "base.txt";
        p.ed_list = p.dir / "ed.txt";
        p.config = p.dir / "grid.json";
        const std::string cli = EDSTOP_CLI_PATH;

        auto step = [&](const std::string& name, const std::string& args) {
            if (!p.errors.empty()) return;
            const auto log = p.dir / (name + ".log");
            const std::string command =
                shell_quote(cli) + " " + args + " > " + shell_quote(log) + " 2>&1";
            const int code = run_command(command);
            if (code != 0)
                p.errors.push_back(name + " exited with " + std::to_string(code) +
                                   " (log: " + log.string() + ")");
        };

        step("freq", "freq " + shell_quote(fixture("synthetic_200.jsonl")) + " --out " +
                         shell_quote(p.dir / "freq.csv"));
        step("candidates",
             "candidates --freq " + shell_quote(p.dir / "freq.csv") + " --msa " +
                 shell_quote(fixture("msa_small.txt")) + " --english " +
                 shell_quote(fixture("english_small.txt")) + " --lexicon " +
                 shell_quote(fixture("lexicon_small.tsv")) + " --out " +
                 shell_quote(p.dir / "cands.tsv"));
        step("review", "review --candidates " + shell_quote(p.dir / "cands.tsv") +
                           " --out " + shell_quote(p.base_list) + " --log " +
                           shell_quote(fixture("decisions_small.tsv")));
        step("expand",
             "expand --in " + shell_quote(p.base_list) + " --out " + shell_quote(p.ed_list));

        if (p.errors.empty()) {
            std::ofstream config(p.config);
            config << "{\n"
                   << "  \"seed\": 20240817,\n"
                   << "  \"corpora\": [{\"name\": \"synthetic\", \"path\": \""
                   << fixture("synthetic_200.jsonl").string() << "\"}],\n"
                   << "  \"lists\": {\"msa\": \"" << fixture("msa_small.txt").string()
                   << "\", \"ed\": \"" << p.ed_list.string() << "\"}\n"
                   << "}\n";
            if (!config) p.errors.push_back("cannot write " + p.config.string());
        }
        return p;
    }();
    return instance;
}

int run_grid_to(const std::filesystem::path& out) {
    const Pipeline& p = pipeline();
    const auto log = p.dir / "grid.log";
    return run_command(shell_quote(std::string(EDSTOP_CLI_PATH)) + " grid --config " +
                       shell_quote(p.config) + " --out " + shell_quote(out) + " > " +
                       shell_quote(log) + " 2>&1");
}

void criterion_pipeline(Problems& problems) {
    const Pipeline& p = pipeline();
    for (const std::string& e : p.errors) problems.push_back(e);
    if (!p.errors.empty()) return;

    // The generated base list must be exactly the planted stopwords: every
    // content word rejected, every planted word accepted.
    const StopwordList base = load_list(p.base_list, ListTag::ED);
    const std::set<std::string> planted = {"بس",  "لازم", "ده",   "دي",    "مش",
                                           "انا", "كده",  "يعني", "برضه", "علشان"};
    expect(problems, base.entries == planted,
           "base list holds " + std::to_string(base.entries.size()) +
               " words, expected the 10 planted stopwords");

    const auto start = std::chrono::steady_clock::now();
    const int code = run_grid_to(p.dir / "report.csv");
    const double elapsed = seconds_since(start);
    expect(problems, code == 0, "grid exited with " + std::to_string(code));
    expect(problems, elapsed < 10.0,
           "grid took " + std::to_string(elapsed) + "s, limit 10s");
    if (code != 0) return;

    std::ifstream in(p.dir / "report.csv");
    const auto rows = read_report_csv(in);
    expect(problems, rows.size() == 16,
           "expected 16 report rows, got " + std::to_string(rows.size()));

    std::optional<double> none_accuracy, ed_accuracy;
    for (const ReportRow& row : rows) {
        if (row.classifier != Classifier::NB || row.features != FeatureKind::unigram)
            continue;
        if (row.stoplist == Stoplist::NONE) none_accuracy = row.accuracy;
        if (row.stoplist == Stoplist::ED) ed_accuracy = row.accuracy;
    }
    expect(problems, none_accuracy.has_value() && ed_accuracy.has_value(),
           "NB+unigram rows for NONE and ED missing from the report");
    if (none_accuracy && ed_accuracy)
        expect(problems, *ed_accuracy >= *none_accuracy,
               "ED list did not help: accuracy " + std::to_string(*ed_accuracy) +
                   " vs baseline " + std::to_string(*none_accuracy));
}

void criterion_determinism(Problems& problems) {
    const Pipeline& p = pipeline();
    for (const std::string& e : p.errors) problems.push_back(e);
    if (!p.errors.empty()) return;

    const auto first = p.dir / "run1.csv";
    const auto second = p.dir / "run2.csv";
    expect(problems, run_grid_to(first) == 0, "first grid run failed");
    expect(problems, run_grid_to(second) == 0, "second grid run failed");

    auto slurp = [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    expect(problems, !a.empty(), "first report is empty");
    expect(problems, a == b, "reports differ between identical grid runs");
}

}  // namespace

int main() {
    int failures = 0;
    failures += run_criterion(1, "cleaning cascade matches the hand-counted fixture",
                              criterion_cleaning);
    failures += run_criterion(2, "naive bayes matches the joint-probability oracle",
                              criterion_nb_oracle);
    failures += run_criterion(3, "decision tree honors its refinement cutoffs",
                              criterion_dt_contract);
    failures += run_criterion(4, "metric identities and worked values hold",
                              criterion_metrics);
    failures += run_criterion(5, "expansion counts are exact and deterministic",
                              criterion_expansion);
    failures += run_criterion(6, "validity cascade resolves the worked examples",
                              criterion_validity);
    failures += run_criterion(7, "pipeline-generated list beats the no-list baseline",
                              criterion_pipeline);
    failures += run_criterion(8, "repeated grid runs are byte-identical",
                              criterion_determinism);
    if (failures > 0)
        std::cout << failures << " of 8 criteria failed\n";
    else
        std::cout << "all 8 criteria passed\n";
    return failures;
}
