#ifndef EDSTOP_CORPUS_HPP
#define EDSTOP_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

// Loading of raw labeled records and the four-stage cleaning cascade
// (url-only, media-only, mention-only, non-arabic), followed by rating
// annotation and the neutral drop.

namespace edstop {

enum class Source { reviews, facebook, twitter };
enum class Label { positive, negative, neutral };

std::string to_string(Source s);
std::string to_string(Label l);
std::optional<Source> parse_source(std::string_view s);
std::optional<Label> parse_label(std::string_view s);

struct RawRecord {
    std::string id;
    Source source = Source::reviews;
    std::string text;
    std::uint32_t attachment_count = 0;
    std::optional<int> rating;       // 1..10, reviews only
    std::optional<Label> label;

    bool operator==(const RawRecord&) const = default;
};

struct FilterStage {
    std::string name;
    std::size_t count_before = 0;
    std::size_t count_after = 0;
};

struct FilterReport {
    std::vector<FilterStage> stages;
};

void write_filter_csv(const FilterReport& report, std::ostream& out);

struct CleanCorpus {
    std::vector<RawRecord> records;
    Source source_tag = Source::reviews;
    FilterReport filter_report;
};

// One record per JSON line; order preserved. Lines must carry a `source`
// field or `default_source` must be given. Malformed lines and duplicate
// ids are errors naming the line.
std::vector<RawRecord> load_corpus(const std::filesystem::path& path,
                                   std::optional<Source> default_source = std::nullopt);

void save_corpus(const std::vector<RawRecord>& records, std::ostream& out);

using FilterResult = std::pair<std::vector<RawRecord>, FilterStage>;

// Drops records that contain a whitespace-delimited token beginning with
// "http://", "https://" or "www." and no Arabic letter outside such
// tokens. URL-free records pass through untouched.
FilterResult filter_url_only(std::vector<RawRecord> records);

// Drops records with attachments and no letters of any script in the text.
FilterResult filter_media_only(std::vector<RawRecord> records);

// Drops records whose text is one or more tokens all beginning with "@".
FilterResult filter_mention_only(std::vector<RawRecord> records);

// Drops records with no letters at all, or with an Arabic-letter share
// below `threshold` (boundary inclusive: a record at the threshold stays).
FilterResult filter_non_arabic(std::vector<RawRecord> records, double threshold = 0.5);

// rating > 5 -> positive, < 5 -> negative, = 5 -> neutral. Existing labels
// win. Records with neither rating nor label make this an error listing
// their ids.
std::vector<RawRecord> annotate_from_rating(std::vector<RawRecord> records);

FilterResult drop_neutral(std::vector<RawRecord> records);

struct CleanOptions {
    double arabic_threshold = 0.5;
    bool keep_neutral = false;
};

// Full cascade in fixed order, then annotation and (by default) the
// neutral drop. Surviving record order is input order.
CleanCorpus clean_corpus(std::vector<RawRecord> records, Source source_tag,
                         const CleanOptions& options = {});

}  // namespace edstop

#endif
