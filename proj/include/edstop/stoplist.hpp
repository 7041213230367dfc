#ifndef EDSTOP_STOPLIST_HPP
#define EDSTOP_STOPLIST_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edstop/textnorm.hpp"

// Egyptian-dialect stopword list generation: candidate extraction from the
// frequency table, the validity cascade against MSA/English references,
// decision-log driven review, and prefix/suffix/letter-variant expansion.

namespace edstop {

enum class ListTag { MSA, ED, MERGED };

std::string to_string(ListTag tag);
std::optional<ListTag> parse_list_tag(std::string_view s);

struct StopwordList {
    std::string name;
    ListTag tag = ListTag::ED;
    std::set<std::string> entries;

    bool contains(const std::string& word) const { return entries.count(word) > 0; }
};

// One word per line, '#' comments, no BOM. Entries are diacritic-stripped
// on load; duplicates and normalization changes warn on stderr.
StopwordList load_list(const std::filesystem::path& path, ListTag tag,
                       std::string name = {});
void save_list(const StopwordList& list, const std::filesystem::path& path);

// Plain word-set loader for the English reference list (same file format).
std::set<std::string> load_wordlist(const std::filesystem::path& path);

StopwordList merge_lists(const StopwordList& a, const StopwordList& b);

enum class CandidateStatus { pending, accepted, rejected };
enum class CandidateReason {
    pending,
    in_msa_list,
    msa_via_lexicon,
    english_via_lexicon,
    manual_accept,
    manual_reject,
    content_word,
};

std::string to_string(CandidateStatus s);
std::string to_string(CandidateReason r);

struct CandidateWord {
    std::string surface;
    std::uint64_t frequency = 0;
    CandidateStatus status = CandidateStatus::pending;
    CandidateReason reason = CandidateReason::pending;
};

struct LexiconEntry {
    std::string ed_word;
    std::vector<std::string> msa_equivalents;
    std::vector<std::string> english_glosses;
};

// ed_word -> entry; file format `ed_word<TAB>msa1;msa2<TAB>gloss1;gloss2`.
using Lexicon = std::map<std::string, LexiconEntry>;

Lexicon load_lexicon(const std::filesystem::path& path);

// Top-k most frequent words wrapped as pending candidates, in top_k order.
std::vector<CandidateWord> extract_candidates(const FrequencyTable& table,
                                              std::size_t k = 200);

// Decision cascade: MSA membership, then MSA equivalent via the lexicon,
// then English gloss via the lexicon; otherwise left pending.
CandidateWord auto_validate(CandidateWord candidate, const StopwordList& msa,
                            const std::set<std::string>& english_list,
                            const Lexicon& lexicon);

enum class DecisionAction { accept, reject };

struct Decision {
    std::string word;
    DecisionAction action = DecisionAction::accept;
    std::string note;
};

// Append-only log, `word<TAB>accept|reject<TAB>note` per line.
std::vector<Decision> load_decision_log(const std::filesystem::path& path);
void append_decision(const std::filesystem::path& path, const Decision& d);

struct ReviewOptions {
    bool interactive = false;
    std::istream* input = nullptr;    // prompts read here when interactive
    std::ostream* prompt = nullptr;
    std::optional<std::filesystem::path> append_log;  // interactive answers go here
};

// Resolves pending candidates from the decision log (and interactively if
// asked); any still-pending candidate is rejected as a content word with a
// warning. Returns the base list of accepted words.
std::set<std::string> review_candidates(std::vector<CandidateWord>& candidates,
                                        const std::vector<Decision>& log,
                                        const ReviewOptions& options = {});

// Candidate review state file: `word<TAB>frequency<TAB>status<TAB>reason`.
void save_candidates(const std::vector<CandidateWord>& candidates, std::ostream& out);
std::vector<CandidateWord> load_candidates(const std::filesystem::path& path);

struct ExpansionRules {
    std::vector<std::string> prefixes;
    std::vector<std::string> compound_prefixes;
    std::vector<std::string> pronoun_suffixes;
    std::set<std::string> possession_markers;
    std::vector<std::u32string> variant_groups;

    static ExpansionRules defaults();
};

// Bare word, every (compound-)prefixed form, and for possession markers
// every pronoun-suffixed form of the bare word.
std::set<std::string> expand_word(const std::string& word, const ExpansionRules& rules);

// Cartesian product over every position holding a letter from a variant
// group; includes the original.
std::set<std::string> generate_variants(const std::string& word,
                                        const ExpansionRules& rules);

// Variant-folds each base word first, then expands every variant.
StopwordList expand_list(const std::set<std::string>& base, const ExpansionRules& rules,
                         std::string name = "ed-generated");

}  // namespace edstop

#endif
