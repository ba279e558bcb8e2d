#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opspam/corpus.hpp"

namespace opspam {

enum class CorpusFormat { jsonl, csv, auto_detect };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
    std::string u = lower_ascii(trim(s));
    if (u == "jsonl") return CorpusFormat::jsonl;
    if (u == "csv") return CorpusFormat::csv;
    if (u == "auto") return CorpusFormat::auto_detect;
    return std::nullopt;
}

struct LoadOptions {
    bool strict = true;  // strict: any diagnostic aborts; lenient: skip bad rows
};

// ---------------------------------------------------------------------------
// CSV (RFC 4180): quoted fields may contain commas, quotes ("" escape) and
// line breaks. Records remember the 1-based line they started on.
// ---------------------------------------------------------------------------

struct CsvRecord {
    std::vector<std::string> fields;
    size_t line = 0;
};

inline std::vector<CsvRecord> parse_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    CsvRecord cur;
    std::string field;
    bool in_quotes = false, any = false;
    size_t line = 1, record_line = 1;

    auto end_field = [&] {
        cur.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        cur.line = record_line;
        records.push_back(std::move(cur));
        cur = {};
        any = false;
        record_line = line;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\n') ++line;
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': in_quotes = true; any = true; break;
            case ',': end_field(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !cur.fields.empty()) end_record();
                record_line = line;
                break;
            default: field.push_back(c); any = true; break;
        }
    }
    if (in_quotes) throw ValidationError("csv: unterminated quoted field starting near line " +
                                         std::to_string(record_line));
    if (any || !field.empty() || !cur.fields.empty()) end_record();
    return records;
}

inline std::string csv_escape(std::string_view s) {
    bool needs = s.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// ---------------------------------------------------------------------------
// Field extraction helpers shared by the JSONL and CSV readers.
// ---------------------------------------------------------------------------

namespace detail {

// Pulls typed values out of one record; every miss becomes a RowIssue and
// poisons the record (ok() goes false) instead of throwing.
struct FieldReader {
    const char* file;
    size_t line;
    std::vector<RowIssue>* issues;
    bool good = true;

    void fail(const std::string& field, const std::string& msg) {
        issues->push_back({file, line, "", field, msg});
        good = false;
    }

    bool str(const nlohmann::json& j, const char* key, std::string& out) {
        auto it = j.find(key);
        if (it == j.end()) return fail(key, "missing required field"), false;
        if (!it->is_string()) return fail(key, "expected a string"), false;
        out = it->get<std::string>();
        return true;
    }

    bool integer(const nlohmann::json& j, const char* key, long& out) {
        auto it = j.find(key);
        if (it == j.end()) return fail(key, "missing required field"), false;
        if (it->is_number_integer() || it->is_number_unsigned()) {
            out = it->get<long>();
            return true;
        }
        if (it->is_string()) {  // tolerate quoted integers from converted dumps
            try {
                size_t pos = 0;
                long v = std::stol(it->get<std::string>(), &pos);
                if (pos == it->get<std::string>().size()) {
                    out = v;
                    return true;
                }
            } catch (...) {
            }
        }
        return fail(key, "expected an integer"), false;
    }

    bool number(const nlohmann::json& j, const char* key, double& out) {
        auto it = j.find(key);
        if (it == j.end()) return fail(key, "missing required field"), false;
        if (it->is_number()) {
            out = it->get<double>();
            return true;
        }
        if (it->is_string()) {
            try {
                size_t pos = 0;
                double v = std::stod(it->get<std::string>(), &pos);
                if (pos == it->get<std::string>().size()) {
                    out = v;
                    return true;
                }
            } catch (...) {
            }
        }
        return fail(key, "expected a number"), false;
    }

    bool review_date(const nlohmann::json& j, const char* key, Date& out) {
        std::string s;
        if (!str(j, key, s)) return false;
        try {
            out = clean_review_date(s).date;
            return true;
        } catch (const ValidationError& e) {
            return fail(key, e.what()), false;
        }
    }

    bool plain_date(const nlohmann::json& j, const char* key, Date& out) {
        std::string s;
        if (!str(j, key, s)) return false;
        auto d = parse_date(s);
        if (!d) return fail(key, "unparseable date: \"" + s + "\""), false;
        out = *d;
        return true;
    }
};

inline bool read_review(const nlohmann::json& j, const char* file, size_t line,
                        std::vector<RowIssue>& issues, Review& out) {
    FieldReader f{file, line, &issues};
    f.str(j, "review_id", out.review_id);
    f.str(j, "reviewer_id", out.reviewer_id);
    f.str(j, "business_id", out.business_id);
    f.review_date(j, "date", out.date);
    f.str(j, "content", out.content);
    f.integer(j, "useful_count", out.useful_count);
    f.integer(j, "cool_count", out.cool_count);
    f.integer(j, "funny_count", out.funny_count);
    long rating = 0;
    if (f.integer(j, "rating", rating)) out.rating = static_cast<int>(rating);
    std::string flag;
    if (f.str(j, "flag", flag)) {
        auto fl = parse_flag(flag);
        if (!fl) f.fail("flag", "expected one of Y, N, YR, NR");
        else out.flag = *fl;
    }
    return f.good;
}

inline bool read_reviewer(const nlohmann::json& j, const char* file, size_t line,
                          std::vector<RowIssue>& issues, Reviewer& out) {
    FieldReader f{file, line, &issues};
    f.str(j, "reviewer_id", out.reviewer_id);
    f.str(j, "name", out.name);
    f.str(j, "location", out.location);
    f.plain_date(j, "join_date", out.join_date);
    f.integer(j, "friend_count", out.friend_count);
    f.integer(j, "review_count", out.review_count);
    f.integer(j, "useful_count", out.useful_count);
    f.integer(j, "cool_count", out.cool_count);
    f.integer(j, "funny_count", out.funny_count);
    f.integer(j, "tip_count", out.tip_count);
    return f.good;
}

inline bool read_business(const nlohmann::json& j, const char* file, size_t line,
                          std::vector<RowIssue>& issues, Business& out) {
    FieldReader f{file, line, &issues};
    f.str(j, "business_id", out.business_id);
    std::string kind;
    if (f.str(j, "kind", kind)) {
        auto k = parse_business_kind(kind);
        if (!k) f.fail("kind", "expected 'restaurant' or 'hotel'");
        else out.kind = *k;
    }
    f.str(j, "name", out.name);
    f.str(j, "location", out.location);
    f.integer(j, "review_count", out.review_count);
    f.number(j, "site_rating", out.site_rating);
    return f.good;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

template <class Entity, class ReadFn>
void load_jsonl_file(const std::filesystem::path& path, const char* file, ReadFn read,
                     std::vector<Entity>& out, std::vector<RowIssue>& issues) {
    std::string text = slurp(path);
    size_t line = 0, start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view row(text.data() + start,
                             (end == std::string::npos ? text.size() : end) - start);
        ++line;
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        if (trim(row).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(row, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            issues.push_back({file, line, "", "", "invalid JSON object"});
            continue;
        }
        Entity e;
        if (read(j, file, line, issues, e)) out.push_back(std::move(e));
    }
}

template <class Entity, class ReadFn>
void load_csv_file(const std::filesystem::path& path, const char* file,
                   const std::vector<std::string>& required, ReadFn read,
                   std::vector<Entity>& out, std::vector<RowIssue>& issues) {
    std::vector<CsvRecord> records = parse_csv(slurp(path));
    if (records.empty()) {
        issues.push_back({file, 1, "", "", "empty csv file (missing header)"});
        return;
    }
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < records[0].fields.size(); ++i)
        col[std::string(trim(records[0].fields[i]))] = i;
    for (const std::string& name : required) {
        if (!col.count(name)) {
            issues.push_back({file, records[0].line, "", name, "missing required column"});
            return;
        }
    }
    for (size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        // Re-use the JSON readers by packing the row into an object. Numeric
        // cells stay strings; FieldReader accepts numeric strings.
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [name, ix] : col)
            if (ix < rec.fields.size()) j[name] = rec.fields[ix];
        Entity e;
        if (read(j, file, rec.line, issues, e)) out.push_back(std::move(e));
    }
}

}  // namespace detail

inline CorpusFormat detect_corpus_format(const std::string& dir) {
    namespace fs = std::filesystem;
    if (fs::exists(fs::path(dir) / "reviews.jsonl")) return CorpusFormat::jsonl;
    if (fs::exists(fs::path(dir) / "reviews.csv")) return CorpusFormat::csv;
    throw Error("no corpus found in " + dir + " (expected reviews.jsonl or reviews.csv)");
}

// Loads reviews/reviewers/businesses from `dir`. In strict mode any diagnostic
// (parse error, bad field, dangling reference) raises ValidationError; in
// lenient mode offending rows are skipped and reported.
inline ReviewCorpus load_corpus(const std::string& dir, CorpusFormat format = CorpusFormat::auto_detect,
                                const LoadOptions& opt = {}, LoadReport* out_report = nullptr) {
    namespace fs = std::filesystem;
    if (format == CorpusFormat::auto_detect) format = detect_corpus_format(dir);

    LoadReport report;
    std::vector<Review> reviews;
    std::vector<Reviewer> reviewers;
    std::vector<Business> businesses;

    if (format == CorpusFormat::jsonl) {
        detail::load_jsonl_file(fs::path(dir) / "reviews.jsonl", "reviews.jsonl",
                                detail::read_review, reviews, report.issues);
        detail::load_jsonl_file(fs::path(dir) / "reviewers.jsonl", "reviewers.jsonl",
                                detail::read_reviewer, reviewers, report.issues);
        detail::load_jsonl_file(fs::path(dir) / "businesses.jsonl", "businesses.jsonl",
                                detail::read_business, businesses, report.issues);
    } else {
        detail::load_csv_file(fs::path(dir) / "reviews.csv", "reviews.csv",
                              {"review_id", "reviewer_id", "business_id", "date", "content",
                               "useful_count", "cool_count", "funny_count", "rating", "flag"},
                              detail::read_review, reviews, report.issues);
        detail::load_csv_file(fs::path(dir) / "reviewers.csv", "reviewers.csv",
                              {"reviewer_id", "name", "location", "join_date", "friend_count",
                               "review_count", "useful_count", "cool_count", "funny_count",
                               "tip_count"},
                              detail::read_reviewer, reviewers, report.issues);
        detail::load_csv_file(fs::path(dir) / "businesses.csv", "businesses.csv",
                              {"business_id", "kind", "name", "location", "review_count",
                               "site_rating"},
                              detail::read_business, businesses, report.issues);
    }

    ReviewCorpus corpus = ReviewCorpus::build(std::move(reviews), std::move(reviewers),
                                              std::move(businesses), &report);
    if (out_report) *out_report = report;
    if (opt.strict && !report.ok()) {
        std::ostringstream os;
        os << "corpus validation failed with " << report.issues.size() << " issue(s):\n";
        size_t shown = 0;
        for (const RowIssue& i : report.issues) {
            if (shown++ == 20) {
                os << "  ...\n";
                break;
            }
            os << "  " << i.to_text() << "\n";
        }
        throw ValidationError(os.str());
    }
    return corpus;
}

namespace detail {

inline std::string num(double v) { return nlohmann::json(v).dump(); }  // shortest round-trip

}  // namespace detail

inline void write_corpus(const ReviewCorpus& corpus, const std::string& dir,
                         CorpusFormat format = CorpusFormat::jsonl) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    if (format == CorpusFormat::auto_detect) format = CorpusFormat::jsonl;

    if (format == CorpusFormat::jsonl) {
        std::ofstream rf(fs::path(dir) / "reviews.jsonl");
        for (const Review& r : corpus.reviews()) {
            nlohmann::ordered_json j{{"review_id", r.review_id},
                                     {"reviewer_id", r.reviewer_id},
                                     {"business_id", r.business_id},
                                     {"date", format_date(r.date)},
                                     {"content", r.content},
                                     {"useful_count", r.useful_count},
                                     {"cool_count", r.cool_count},
                                     {"funny_count", r.funny_count},
                                     {"rating", r.rating},
                                     {"flag", std::string(flag_name(r.flag))}};
            rf << j.dump() << "\n";
        }
        std::ofstream uf(fs::path(dir) / "reviewers.jsonl");
        for (const Reviewer& r : corpus.reviewers()) {
            nlohmann::ordered_json j{{"reviewer_id", r.reviewer_id},
                                     {"name", r.name},
                                     {"location", r.location},
                                     {"join_date", format_date(r.join_date)},
                                     {"friend_count", r.friend_count},
                                     {"review_count", r.review_count},
                                     {"useful_count", r.useful_count},
                                     {"cool_count", r.cool_count},
                                     {"funny_count", r.funny_count},
                                     {"tip_count", r.tip_count}};
            uf << j.dump() << "\n";
        }
        std::ofstream bf(fs::path(dir) / "businesses.jsonl");
        for (const Business& b : corpus.businesses()) {
            nlohmann::ordered_json j{{"business_id", b.business_id},
                                     {"kind", std::string(business_kind_name(b.kind))},
                                     {"name", b.name},
                                     {"location", b.location},
                                     {"review_count", b.review_count},
                                     {"site_rating", b.site_rating}};
            bf << j.dump() << "\n";
        }
        return;
    }

    std::ofstream rf(fs::path(dir) / "reviews.csv");
    rf << "review_id,reviewer_id,business_id,date,content,useful_count,cool_count,funny_count,"
          "rating,flag\r\n";
    for (const Review& r : corpus.reviews()) {
        rf << csv_escape(r.review_id) << ',' << csv_escape(r.reviewer_id) << ','
           << csv_escape(r.business_id) << ',' << format_date(r.date) << ','
           << csv_escape(r.content) << ',' << r.useful_count << ',' << r.cool_count << ','
           << r.funny_count << ',' << r.rating << ',' << flag_name(r.flag) << "\r\n";
    }
    std::ofstream uf(fs::path(dir) / "reviewers.csv");
    uf << "reviewer_id,name,location,join_date,friend_count,review_count,useful_count,cool_count,"
          "funny_count,tip_count\r\n";
    for (const Reviewer& r : corpus.reviewers()) {
        uf << csv_escape(r.reviewer_id) << ',' << csv_escape(r.name) << ','
           << csv_escape(r.location) << ',' << format_date(r.join_date) << ',' << r.friend_count
           << ',' << r.review_count << ',' << r.useful_count << ',' << r.cool_count << ','
           << r.funny_count << ',' << r.tip_count << "\r\n";
    }
    std::ofstream bf(fs::path(dir) / "businesses.csv");
    bf << "business_id,kind,name,location,review_count,site_rating\r\n";
    for (const Business& b : corpus.businesses()) {
        bf << csv_escape(b.business_id) << ',' << business_kind_name(b.kind) << ','
           << csv_escape(b.name) << ',' << csv_escape(b.location) << ',' << b.review_count << ','
           << detail::num(b.site_rating) << "\r\n";
    }
}

}  // namespace opspam
