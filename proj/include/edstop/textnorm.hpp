#ifndef EDSTOP_TEXTNORM_HPP
#define EDSTOP_TEXTNORM_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Tokenization and normalization of Arabic OSN text, plus word-frequency
// tables over combined corpora.

namespace edstop {

/// Word-to-count table over one or more tokenized corpora.
struct FrequencyTable {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_tokens = 0;

    std::size_t unique_words() const { return counts.size(); }
    void add_token(const std::string& token);
};

// Splits on Unicode whitespace, removes diacritics and tatweel, strips
// punctuation/symbol codepoints from token edges. Standalone punctuation
// yields no token.
std::vector<std::string> tokenize(std::string_view text);

// Removes U+064B..U+0652 and U+0670; everything else preserved in order.
std::string strip_diacritics(std::string_view word);

// Canonical letter-form folding for folded-match mode.
// Folds alef-maksura to yeh, teh-marbuta to heh, hamza alefs to bare alef.
std::string fold_variants(std::string_view word);

FrequencyTable build_frequency_table(std::span<const std::string> texts);
void add_text(FrequencyTable& table, std::string_view text);
FrequencyTable merge(const FrequencyTable& a, const FrequencyTable& b);

// k highest-count words, descending by count, ties broken by codepoint
// order ascending. Returns everything when k exceeds the table size.
std::vector<std::string> top_k(const FrequencyTable& table, std::size_t k);

void write_frequency_csv(const FrequencyTable& table, std::ostream& out);
FrequencyTable read_frequency_csv(std::istream& in);

// Optional abbreviation/emoticon mapping, applied token-wise before
// tokenization. File format: `surface<TAB>replacement`, `#` comments.
using AbbrevMap = std::map<std::string, std::string>;

AbbrevMap load_abbrev_map(const std::filesystem::path& path);
std::string apply_abbrev_map(std::string_view text, const AbbrevMap& map);

}  // namespace edstop

#endif
