#include "edstop/corpus.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "edstop/csv.hpp"
#include "edstop/unicode.hpp"

namespace edstop {

namespace {

using nlohmann::json;

bool has_url_prefix(std::string_view token) {
    return token.starts_with("http://") || token.starts_with("https://") ||
           token.starts_with("www.");
}

std::vector<std::u32string> whitespace_tokens(const std::u32string& cps) {
    std::vector<std::u32string> tokens;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && uni::is_space(cps[i])) ++i;
        std::size_t start = i;
        while (i < cps.size() && !uni::is_space(cps[i])) ++i;
        if (i > start) tokens.push_back(cps.substr(start, i - start));
    }
    return tokens;
}

bool contains_arabic_letter(const std::u32string& cps) {
    for (char32_t cp : cps)
        if (uni::is_arabic_letter(cp)) return true;
    return false;
}

bool contains_letter(const std::u32string& cps) {
    for (char32_t cp : cps)
        if (uni::is_letter(cp)) return true;
    return false;
}

FilterResult run_filter(std::vector<RawRecord> records, std::string name,
                        bool (*keep)(const RawRecord&, double), double arg) {
    FilterStage stage;
    stage.name = std::move(name);
    stage.count_before = records.size();
    std::vector<RawRecord> kept;
    kept.reserve(records.size());
    for (RawRecord& r : records)
        if (keep(r, arg)) kept.push_back(std::move(r));
    stage.count_after = kept.size();
    return {std::move(kept), std::move(stage)};
}

[[noreturn]] void line_error(const std::filesystem::path& path, std::size_t lineno,
                             const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

std::string to_string(Source s) {
    switch (s) {
        case Source::reviews: return "reviews";
        case Source::facebook: return "facebook";
        case Source::twitter: return "twitter";
    }
    return "?";
}

std::string to_string(Label l) {
    switch (l) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::neutral: return "neutral";
    }
    return "?";
}

std::optional<Source> parse_source(std::string_view s) {
    if (s == "reviews") return Source::reviews;
    if (s == "facebook") return Source::facebook;
    if (s == "twitter") return Source::twitter;
    return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
    if (s == "positive") return Label::positive;
    if (s == "negative") return Label::negative;
    if (s == "neutral") return Label::neutral;
    return std::nullopt;
}

void write_filter_csv(const FilterReport& report, std::ostream& out) {
    out << "stage,before,after\n";
    for (const FilterStage& s : report.stages)
        out << csv_field(s.name) << ',' << s.count_before << ',' << s.count_after << '\n';
}

std::vector<RawRecord> load_corpus(const std::filesystem::path& path,
                                   std::optional<Source> default_source) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

    std::vector<RawRecord> records;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            line_error(path, lineno, std::string("malformed record: ") + e.what());
        }
        if (!j.is_object()) line_error(path, lineno, "malformed record: not a JSON object");

        RawRecord r;
        if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
            line_error(path, lineno, "malformed record: missing or empty 'id'");
        r.id = j["id"].get<std::string>();

        if (j.contains("source")) {
            if (!j["source"].is_string())
                line_error(path, lineno, "malformed record: 'source' must be a string");
            const auto src = parse_source(j["source"].get<std::string>());
            if (!src)
                line_error(path, lineno, "malformed record: unknown source '" +
                                             j["source"].get<std::string>() + "'");
            if (default_source && *src != *default_source)
                line_error(path, lineno, "record source '" + to_string(*src) +
                                             "' does not match declared source '" +
                                             to_string(*default_source) + "'");
            r.source = *src;
        } else if (default_source) {
            r.source = *default_source;
        } else {
            line_error(path, lineno, "malformed record: missing 'source' and no default given");
        }

        if (!j.contains("text") || !j["text"].is_string())
            line_error(path, lineno, "malformed record: missing 'text'");
        r.text = j["text"].get<std::string>();

        if (j.contains("attachments")) {
            if (!j["attachments"].is_number_integer() || j["attachments"].get<long long>() < 0)
                line_error(path, lineno, "malformed record: 'attachments' must be a non-negative integer");
            r.attachment_count = static_cast<std::uint32_t>(j["attachments"].get<long long>());
        }

        if (j.contains("rating") && !j["rating"].is_null()) {
            if (!j["rating"].is_number_integer())
                line_error(path, lineno, "malformed record: 'rating' must be an integer");
            const long long rating = j["rating"].get<long long>();
            if (rating < 1 || rating > 10)
                line_error(path, lineno, "malformed record: rating " + std::to_string(rating) +
                                             " outside 1..10");
            r.rating = static_cast<int>(rating);
        }

        if (j.contains("label") && !j["label"].is_null()) {
            if (!j["label"].is_string())
                line_error(path, lineno, "malformed record: 'label' must be a string");
            const auto label = parse_label(j["label"].get<std::string>());
            if (!label)
                line_error(path, lineno, "malformed record: unknown label '" +
                                             j["label"].get<std::string>() + "'");
            r.label = *label;
        }

        if (!seen_ids.insert(r.id).second)
            line_error(path, lineno, "duplicate id '" + r.id + "'");
        if (r.rating && r.source != Source::reviews)
            std::cerr << "warning: " << path.string() << ":" << lineno << ": record '" << r.id
                      << "' carries a rating but source is " << to_string(r.source) << "\n";
        if (r.text.empty() && r.attachment_count == 0)
            std::cerr << "warning: " << path.string() << ":" << lineno << ": record '" << r.id
                      << "' has empty text and no attachments\n";

        records.push_back(std::move(r));
    }
    return records;
}

void save_corpus(const std::vector<RawRecord>& records, std::ostream& out) {
    for (const RawRecord& r : records) {
        json j;
        j["id"] = r.id;
        j["source"] = to_string(r.source);
        j["text"] = r.text;
        if (r.attachment_count > 0) j["attachments"] = r.attachment_count;
        if (r.rating) j["rating"] = *r.rating;
        if (r.label) j["label"] = to_string(*r.label);
        out << j.dump() << '\n';
    }
}

FilterResult filter_url_only(std::vector<RawRecord> records) {
    return run_filter(
        std::move(records), "url_only",
        [](const RawRecord& r, double) {
            // Only records that actually carry a URL token qualify; texts
            // without one fall through to the later stages.
            const std::u32string cps = uni::decode_utf8(r.text);
            bool has_url = false;
            bool arabic_outside_url = false;
            for (const std::u32string& tok : whitespace_tokens(cps)) {
                if (has_url_prefix(uni::encode_utf8(tok)))
                    has_url = true;
                else if (contains_arabic_letter(tok))
                    arabic_outside_url = true;
            }
            return !has_url || arabic_outside_url;
        },
        0.0);
}

FilterResult filter_media_only(std::vector<RawRecord> records) {
    return run_filter(
        std::move(records), "media_only",
        [](const RawRecord& r, double) {
            if (r.attachment_count == 0) return true;
            return contains_letter(uni::decode_utf8(r.text));
        },
        0.0);
}

FilterResult filter_mention_only(std::vector<RawRecord> records) {
    return run_filter(
        std::move(records), "mention_only",
        [](const RawRecord& r, double) {
            const auto tokens = whitespace_tokens(uni::decode_utf8(r.text));
            if (tokens.empty()) return true;
            for (const std::u32string& tok : tokens)
                if (tok[0] != U'@') return true;
            return false;
        },
        0.0);
}

FilterResult filter_non_arabic(std::vector<RawRecord> records, double threshold) {
    return run_filter(
        std::move(records), "non_arabic",
        [](const RawRecord& r, double threshold) {
            std::size_t arabic = 0;
            std::size_t letters = 0;
            for (char32_t cp : uni::decode_utf8(r.text)) {
                if (!uni::is_letter(cp)) continue;
                ++letters;
                if (uni::is_arabic_letter(cp)) ++arabic;
            }
            if (letters == 0) return false;
            return static_cast<double>(arabic) / static_cast<double>(letters) >= threshold;
        },
        threshold);
}

std::vector<RawRecord> annotate_from_rating(std::vector<RawRecord> records) {
    std::vector<std::string> unlabeled;
    for (RawRecord& r : records) {
        if (r.label) continue;
        if (!r.rating) {
            unlabeled.push_back(r.id);
            continue;
        }
        if (*r.rating > 5)
            r.label = Label::positive;
        else if (*r.rating < 5)
            r.label = Label::negative;
        else
            r.label = Label::neutral;
    }
    if (!unlabeled.empty()) {
        std::string msg = "records without rating or label:";
        for (const std::string& id : unlabeled) msg += " " + id;
        throw std::runtime_error(msg);
    }
    return records;
}

FilterResult drop_neutral(std::vector<RawRecord> records) {
    for (const RawRecord& r : records)
        if (!r.label)
            throw std::runtime_error("drop_neutral: record '" + r.id + "' has no label");
    auto result = run_filter(
        std::move(records), "drop_neutral",
        [](const RawRecord& r, double) { return *r.label != Label::neutral; }, 0.0);
    if (result.first.empty() && result.second.count_before > 0)
        std::cerr << "warning: corpus is empty after dropping neutral records\n";
    return result;
}

CleanCorpus clean_corpus(std::vector<RawRecord> records, Source source_tag,
                         const CleanOptions& options) {
    CleanCorpus corpus;
    corpus.source_tag = source_tag;

    auto [after_url, url_stage] = filter_url_only(std::move(records));
    corpus.filter_report.stages.push_back(std::move(url_stage));
    auto [after_media, media_stage] = filter_media_only(std::move(after_url));
    corpus.filter_report.stages.push_back(std::move(media_stage));
    auto [after_mention, mention_stage] = filter_mention_only(std::move(after_media));
    corpus.filter_report.stages.push_back(std::move(mention_stage));
    auto [after_arabic, arabic_stage] =
        filter_non_arabic(std::move(after_mention), options.arabic_threshold);
    corpus.filter_report.stages.push_back(std::move(arabic_stage));

    auto annotated = annotate_from_rating(std::move(after_arabic));
    if (options.keep_neutral) {
        corpus.records = std::move(annotated);
    } else {
        auto [kept, neutral_stage] = drop_neutral(std::move(annotated));
        corpus.filter_report.stages.push_back(std::move(neutral_stage));
        corpus.records = std::move(kept);
    }
    return corpus;
}

}  // namespace edstop
