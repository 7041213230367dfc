#include "edstop/textnorm.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "edstop/csv.hpp"
#include "edstop/unicode.hpp"

namespace edstop {

namespace {

bool keeps_in_word(char32_t cp) {
    return uni::is_letter(cp) || uni::is_digit(cp);
}

std::u32string remove_marks(std::u32string_view word) {
    std::u32string out;
    out.reserve(word.size());
    for (char32_t cp : word) {
        if (uni::is_arabic_diacritic(cp) || uni::is_tatweel(cp)) continue;
        out.push_back(cp);
    }
    return out;
}

std::u32string trim_edges(std::u32string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && !keeps_in_word(token[b])) ++b;
    while (e > b && !keeps_in_word(token[e - 1])) --e;
    return std::u32string(token.substr(b, e - b));
}

}  // namespace

void FrequencyTable::add_token(const std::string& token) {
    ++counts[token];
    ++total_tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::u32string cps = uni::decode_utf8(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && uni::is_space(cps[i])) ++i;
        std::size_t start = i;
        while (i < cps.size() && !uni::is_space(cps[i])) ++i;
        if (i == start) continue;
        std::u32string tok = trim_edges(remove_marks(
            std::u32string_view(cps).substr(start, i - start)));
        if (!tok.empty()) tokens.push_back(uni::encode_utf8(tok));
    }
    return tokens;
}

std::string strip_diacritics(std::string_view word) {
    std::u32string out;
    for (char32_t cp : uni::decode_utf8(word)) {
        if (uni::is_arabic_diacritic(cp)) continue;
        out.push_back(cp);
    }
    return uni::encode_utf8(out);
}

std::string fold_variants(std::string_view word) {
    std::u32string out = uni::decode_utf8(word);
    for (char32_t& cp : out) {
        switch (cp) {
            case 0x0649: cp = 0x064A; break;              // alef maksura -> yeh
            case 0x0629: cp = 0x0647; break;              // teh marbuta -> heh
            case 0x0622: case 0x0623: case 0x0625:
                cp = 0x0627; break;                       // hamza alefs -> alef
            default: break;
        }
    }
    return uni::encode_utf8(out);
}

void add_text(FrequencyTable& table, std::string_view text) {
    for (const std::string& tok : tokenize(text)) table.add_token(tok);
}

FrequencyTable build_frequency_table(std::span<const std::string> texts) {
    FrequencyTable table;
    for (const std::string& text : texts) add_text(table, text);
    return table;
}

FrequencyTable merge(const FrequencyTable& a, const FrequencyTable& b) {
    FrequencyTable out = a;
    for (const auto& [word, count] : b.counts) out.counts[word] += count;
    out.total_tokens += b.total_tokens;
    return out;
}

std::vector<std::string> top_k(const FrequencyTable& table, std::size_t k) {
    std::vector<std::pair<std::string, std::uint64_t>> entries(
        table.counts.begin(), table.counts.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    if (entries.size() > k) entries.resize(k);
    std::vector<std::string> words;
    words.reserve(entries.size());
    for (auto& [word, count] : entries) words.push_back(std::move(word));
    return words;
}

void write_frequency_csv(const FrequencyTable& table, std::ostream& out) {
    out << "word,count\n";
    for (const std::string& word : top_k(table, table.counts.size())) {
        out << csv_field(word) << ',' << table.counts.at(word) << '\n';
    }
}

FrequencyTable read_frequency_csv(std::istream& in) {
    FrequencyTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "word,count") continue;
        const std::vector<std::string> fields = csv_split(line);
        if (fields.size() != 2)
            throw std::runtime_error("frequency CSV line " + std::to_string(lineno) +
                                     ": expected word,count");
        std::uint64_t count = 0;
        try {
            count = std::stoull(fields[1]);
        } catch (const std::exception&) {
            throw std::runtime_error("frequency CSV line " + std::to_string(lineno) +
                                     ": bad count '" + fields[1] + "'");
        }
        table.counts[fields[0]] += count;
        table.total_tokens += count;
    }
    return table;
}

AbbrevMap load_abbrev_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open abbreviation map: " + path.string());
    AbbrevMap map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected surface<TAB>replacement");
        uni::decode_utf8(line);  // reject non-UTF-8 input
        map[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return map;
}

std::string apply_abbrev_map(std::string_view text, const AbbrevMap& map) {
    if (map.empty()) return std::string(text);
    const std::u32string cps = uni::decode_utf8(text);
    std::string out;
    std::size_t i = 0;
    while (i < cps.size()) {
        std::size_t start = i;
        while (i < cps.size() && uni::is_space(cps[i])) ++i;
        out += uni::encode_utf8(std::u32string_view(cps).substr(start, i - start));
        start = i;
        while (i < cps.size() && !uni::is_space(cps[i])) ++i;
        if (i == start) continue;
        const std::string word =
            uni::encode_utf8(std::u32string_view(cps).substr(start, i - start));
        const auto it = map.find(word);
        out += it != map.end() ? it->second : word;
    }
    return out;
}

}  // namespace edstop
