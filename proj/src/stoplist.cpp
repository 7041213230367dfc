#include "edstop/stoplist.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "edstop/unicode.hpp"

namespace edstop {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

constexpr std::string_view kBom = "\xEF\xBB\xBF";

}  // namespace

std::string to_string(ListTag tag) {
    switch (tag) {
        case ListTag::MSA: return "MSA";
        case ListTag::ED: return "ED";
        case ListTag::MERGED: return "MERGED";
    }
    return "?";
}

std::optional<ListTag> parse_list_tag(std::string_view s) {
    if (s == "MSA") return ListTag::MSA;
    if (s == "ED") return ListTag::ED;
    if (s == "MERGED") return ListTag::MERGED;
    return std::nullopt;
}

std::set<std::string> load_wordlist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list: " + path.string());
    std::set<std::string> words;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (first && line.starts_with(kBom)) line.erase(0, kBom.size());
        first = false;
        try {
            uni::decode_utf8(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
        const std::string word = trim(line);
        if (word.empty() || word[0] == '#') continue;
        const std::string normalized = strip_diacritics(word);
        if (normalized != word)
            std::cerr << "warning: " << path.string() << ":" << lineno
                      << ": entry normalized by diacritic stripping\n";
        if (normalized.empty()) continue;
        if (!words.insert(normalized).second)
            std::cerr << "warning: " << path.string() << ":" << lineno
                      << ": duplicate entry '" << normalized << "'\n";
    }
    return words;
}

StopwordList load_list(const std::filesystem::path& path, ListTag tag, std::string name) {
    StopwordList list;
    list.name = name.empty() ? path.stem().string() : std::move(name);
    list.tag = tag;
    list.entries = load_wordlist(path);
    return list;
}

void save_list(const StopwordList& list, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write list: " + path.string());
    for (const std::string& word : list.entries) out << word << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

StopwordList merge_lists(const StopwordList& a, const StopwordList& b) {
    StopwordList merged;
    merged.name = a.name + "+" + b.name;
    merged.tag = ListTag::MERGED;
    merged.entries = a.entries;
    merged.entries.insert(b.entries.begin(), b.entries.end());
    return merged;
}

std::string to_string(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::pending: return "pending";
        case CandidateStatus::accepted: return "accepted";
        case CandidateStatus::rejected: return "rejected";
    }
    return "?";
}

std::string to_string(CandidateReason r) {
    switch (r) {
        case CandidateReason::pending: return "pending";
        case CandidateReason::in_msa_list: return "in_msa_list";
        case CandidateReason::msa_via_lexicon: return "msa_via_lexicon";
        case CandidateReason::english_via_lexicon: return "english_via_lexicon";
        case CandidateReason::manual_accept: return "manual_accept";
        case CandidateReason::manual_reject: return "manual_reject";
        case CandidateReason::content_word: return "content_word";
    }
    return "?";
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path.string());
    Lexicon lexicon;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            uni::decode_utf8(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.empty() || trim(cols[0]).empty())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": missing ed_word");
        LexiconEntry entry;
        entry.ed_word = strip_diacritics(trim(cols[0]));
        if (cols.size() > 1)
            for (const std::string& w : split_on(trim(cols[1]), ';'))
                entry.msa_equivalents.push_back(strip_diacritics(w));
        if (cols.size() > 2)
            for (const std::string& w : split_on(trim(cols[2]), ';'))
                entry.english_glosses.push_back(w);
        if (entry.msa_equivalents.empty() && entry.english_glosses.empty())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": entry '" + entry.ed_word +
                                     "' has no MSA equivalent and no gloss");
        lexicon[entry.ed_word] = std::move(entry);
    }
    return lexicon;
}

std::vector<CandidateWord> extract_candidates(const FrequencyTable& table, std::size_t k) {
    if (table.counts.empty())
        throw std::runtime_error("extract_candidates: empty frequency table");
    std::vector<CandidateWord> candidates;
    for (const std::string& word : top_k(table, k)) {
        CandidateWord c;
        c.surface = word;
        c.frequency = table.counts.at(word);
        candidates.push_back(std::move(c));
    }
    return candidates;
}

CandidateWord auto_validate(CandidateWord candidate, const StopwordList& msa,
                            const std::set<std::string>& english_list,
                            const Lexicon& lexicon) {
    if (msa.contains(candidate.surface)) {
        candidate.status = CandidateStatus::accepted;
        candidate.reason = CandidateReason::in_msa_list;
        return candidate;
    }
    const auto it = lexicon.find(candidate.surface);
    if (it != lexicon.end()) {
        for (const std::string& msa_word : it->second.msa_equivalents) {
            if (msa.contains(msa_word)) {
                candidate.status = CandidateStatus::accepted;
                candidate.reason = CandidateReason::msa_via_lexicon;
                return candidate;
            }
        }
        for (const std::string& gloss : it->second.english_glosses) {
            if (english_list.count(gloss)) {
                candidate.status = CandidateStatus::accepted;
                candidate.reason = CandidateReason::english_via_lexicon;
                return candidate;
            }
        }
    }
    candidate.status = CandidateStatus::pending;
    candidate.reason = CandidateReason::pending;
    return candidate;
}

std::vector<Decision> load_decision_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open decision log: " + path.string());
    std::vector<Decision> log;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.size() < 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected word<TAB>accept|reject");
        Decision d;
        d.word = strip_diacritics(trim(cols[0]));
        const std::string action = trim(cols[1]);
        if (action == "accept")
            d.action = DecisionAction::accept;
        else if (action == "reject")
            d.action = DecisionAction::reject;
        else
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown action '" + action + "'");
        if (cols.size() > 2) d.note = cols[2];
        log.push_back(std::move(d));
    }
    return log;
}

void append_decision(const std::filesystem::path& path, const Decision& d) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to decision log: " + path.string());
    out << d.word << '\t'
        << (d.action == DecisionAction::accept ? "accept" : "reject") << '\t' << d.note
        << '\n';
}

std::set<std::string> review_candidates(std::vector<CandidateWord>& candidates,
                                        const std::vector<Decision>& log,
                                        const ReviewOptions& options) {
    std::map<std::string, CandidateWord*> pending;
    for (CandidateWord& c : candidates)
        if (c.status == CandidateStatus::pending) pending[c.surface] = &c;

    for (const Decision& d : log) {
        const auto it = pending.find(d.word);
        if (it == pending.end()) {
            const bool known = std::any_of(
                candidates.begin(), candidates.end(),
                [&](const CandidateWord& c) { return c.surface == d.word; });
            if (!known)
                std::cerr << "warning: decision log entry for unknown word '" << d.word
                          << "' ignored\n";
            continue;
        }
        CandidateWord* c = it->second;
        if (d.action == DecisionAction::accept) {
            c->status = CandidateStatus::accepted;
            c->reason = CandidateReason::manual_accept;
        } else {
            c->status = CandidateStatus::rejected;
            c->reason = CandidateReason::manual_reject;
        }
        pending.erase(it);
    }

    if (options.interactive && !pending.empty()) {
        std::istream& in = options.input ? *options.input : std::cin;
        std::ostream& out = options.prompt ? *options.prompt : std::cout;
        for (CandidateWord& c : candidates) {
            if (c.status != CandidateStatus::pending) continue;
            out << c.surface << " (frequency " << c.frequency << ") [a]ccept/[r]eject? "
                << std::flush;
            std::string answer;
            if (!std::getline(in, answer)) break;
            const std::string a = trim(answer);
            Decision d;
            d.word = c.surface;
            d.note = "interactive";
            if (a == "a" || a == "accept") {
                c.status = CandidateStatus::accepted;
                c.reason = CandidateReason::manual_accept;
                d.action = DecisionAction::accept;
            } else {
                c.status = CandidateStatus::rejected;
                c.reason = CandidateReason::manual_reject;
                d.action = DecisionAction::reject;
            }
            if (options.append_log) append_decision(*options.append_log, d);
            pending.erase(c.surface);
        }
    }

    std::size_t defaulted = 0;
    for (CandidateWord& c : candidates) {
        if (c.status != CandidateStatus::pending) continue;
        c.status = CandidateStatus::rejected;
        c.reason = CandidateReason::content_word;
        ++defaulted;
    }
    if (defaulted > 0)
        std::cerr << "warning: " << defaulted
                  << " unresolved candidate(s) rejected as content words\n";

    std::set<std::string> base;
    for (const CandidateWord& c : candidates)
        if (c.status == CandidateStatus::accepted) base.insert(c.surface);
    return base;
}

void save_candidates(const std::vector<CandidateWord>& candidates, std::ostream& out) {
    for (const CandidateWord& c : candidates)
        out << c.surface << '\t' << c.frequency << '\t' << to_string(c.status) << '\t'
            << to_string(c.reason) << '\n';
}

std::vector<CandidateWord> load_candidates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open candidate file: " + path.string());
    std::vector<CandidateWord> candidates;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.size() != 4)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected word<TAB>frequency<TAB>status<TAB>reason");
        CandidateWord c;
        c.surface = cols[0];
        c.frequency = std::stoull(cols[1]);
        if (cols[2] == "pending")
            c.status = CandidateStatus::pending;
        else if (cols[2] == "accepted")
            c.status = CandidateStatus::accepted;
        else if (cols[2] == "rejected")
            c.status = CandidateStatus::rejected;
        else
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown status '" + cols[2] + "'");
        bool reason_ok = false;
        for (CandidateReason r :
             {CandidateReason::pending, CandidateReason::in_msa_list,
              CandidateReason::msa_via_lexicon, CandidateReason::english_via_lexicon,
              CandidateReason::manual_accept, CandidateReason::manual_reject,
              CandidateReason::content_word}) {
            if (to_string(r) == cols[3]) {
                c.reason = r;
                reason_ok = true;
                break;
            }
        }
        if (!reason_ok)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown reason '" + cols[3] + "'");
        candidates.push_back(std::move(c));
    }
    return candidates;
}

ExpansionRules ExpansionRules::defaults() {
    ExpansionRules rules;
    rules.prefixes = {"و", "ف", "ب", "ك", "ل", "ال"};
    rules.compound_prefixes = {"وال", "فال", "بال", "كال", "لل"};
    rules.pronoun_suffixes = {"ي", "ك", "ه", "ها", "نا", "كم", "هم"};
    rules.possession_markers = {"بتاع", "بتاعة", "بتوع"};
    // yeh/alef-maksura, teh-marbuta/heh, hamza alefs/bare alef
    rules.variant_groups = {U"يى", U"ةه", U"أإآا"};
    return rules;
}

std::set<std::string> expand_word(const std::string& word, const ExpansionRules& rules) {
    if (word.empty()) throw std::runtime_error("expand_word: empty word");
    std::set<std::string> forms;
    forms.insert(word);
    for (const std::string& p : rules.prefixes) forms.insert(p + word);
    for (const std::string& p : rules.compound_prefixes) forms.insert(p + word);
    if (rules.possession_markers.count(word))
        for (const std::string& s : rules.pronoun_suffixes) forms.insert(word + s);
    return forms;
}

std::set<std::string> generate_variants(const std::string& word,
                                        const ExpansionRules& rules) {
    const std::u32string cps = uni::decode_utf8(word);
    std::set<std::string> out;
    std::u32string current = cps;

    // Depth-first over variant positions; non-variant letters are fixed.
    auto walk = [&](auto&& self, std::size_t pos) -> void {
        if (pos == cps.size()) {
            out.insert(uni::encode_utf8(current));
            return;
        }
        const std::u32string* group = nullptr;
        for (const std::u32string& g : rules.variant_groups) {
            if (g.find(cps[pos]) != std::u32string::npos) {
                group = &g;
                break;
            }
        }
        if (!group) {
            self(self, pos + 1);
            return;
        }
        for (char32_t member : *group) {
            current[pos] = member;
            self(self, pos + 1);
        }
        current[pos] = cps[pos];
    };
    walk(walk, 0);
    return out;
}

StopwordList expand_list(const std::set<std::string>& base, const ExpansionRules& rules,
                         std::string name) {
    if (base.empty()) throw std::runtime_error("expand_list: empty base list");
    StopwordList list;
    list.name = std::move(name);
    list.tag = ListTag::ED;
    for (const std::string& word : base)
        for (const std::string& variant : generate_variants(word, rules))
            for (const std::string& form : expand_word(variant, rules))
                list.entries.insert(form);
    return list;
}

}  // namespace edstop
