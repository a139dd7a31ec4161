#include "phishscope/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

#include "phishscope/text.hpp"

namespace phishscope {

std::string_view to_string(DatasetErrorKind kind) {
    switch (kind) {
        case DatasetErrorKind::FileUnreadable: return "FileUnreadable";
        case DatasetErrorKind::HeaderMismatch: return "HeaderMismatch";
        case DatasetErrorKind::NetworkFailure: return "NetworkFailure";
        case DatasetErrorKind::NonCsvPayload: return "NonCsvPayload";
    }
    return "Unknown";
}

DatasetError::DatasetError(DatasetErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

DatasetError DatasetError::header_mismatch(std::vector<std::string> missing) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    DatasetError err(DatasetErrorKind::HeaderMismatch, "missing columns: " + list);
    err.missing_ = std::move(missing);
    return err;
}

std::string_view to_string(RowError e) {
    switch (e) {
        case RowError::WrongFieldCount: return "WrongFieldCount";
        case RowError::MalformedQuoting: return "MalformedQuoting";
        case RowError::BadPhishId: return "BadPhishId";
        case RowError::DuplicatePhishId: return "DuplicatePhishId";
        case RowError::EmptyUrl: return "EmptyUrl";
        case RowError::DuplicateUrl: return "DuplicateUrl";
        case RowError::BadTimestamp: return "BadTimestamp";
        case RowError::BadVerificationTime: return "BadVerificationTime";
        case RowError::BadBoolean: return "BadBoolean";
    }
    return "Unknown";
}

namespace {

bool read_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (!is_ascii_digit(c)) return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

std::optional<bool> parse_bool(std::string_view text) {
    text = trim(text);
    if (iequals(text, "yes") || iequals(text, "true") || text == "1") return true;
    if (iequals(text, "no") || iequals(text, "false") || text == "0") return false;
    return std::nullopt;
}

std::string normalize_header_name(std::string_view name) {
    if (name.starts_with("\xEF\xBB\xBF")) name.remove_prefix(3);
    return ascii_lower(trim(name));
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    text = trim(text);
    // YYYY-MM-DDThh:mm:ss is 19 bytes, the shortest zone is "Z".
    if (text.size() < 20) return std::nullopt;
    Timestamp ts;
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    if (!read_int(text.substr(0, 4), ts.year) || !read_int(text.substr(5, 2), ts.month) ||
        !read_int(text.substr(8, 2), ts.day) || !read_int(text.substr(11, 2), ts.hour) ||
        !read_int(text.substr(14, 2), ts.minute) || !read_int(text.substr(17, 2), ts.second)) {
        return std::nullopt;
    }
    if (ts.month < 1 || ts.month > 12 || ts.day < 1 || ts.day > days_in_month(ts.year, ts.month) ||
        ts.hour > 23 || ts.minute > 59 || ts.second > 60) {
        return std::nullopt;
    }

    std::string_view rest = text.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && is_ascii_digit(rest[i])) ++i;
        if (i == 1) return std::nullopt;
        rest.remove_prefix(i);
    }
    if (rest == "Z" || rest == "z") {
        ts.offset_minutes = 0;
        return ts;
    }
    if (rest.size() != 6 && rest.size() != 5) return std::nullopt;
    if (rest[0] != '+' && rest[0] != '-') return std::nullopt;
    const int sign = rest[0] == '-' ? -1 : 1;
    int oh = 0;
    int om = 0;
    if (rest.size() == 6) {
        if (rest[3] != ':' || !read_int(rest.substr(1, 2), oh) || !read_int(rest.substr(4, 2), om)) return std::nullopt;
    } else if (!read_int(rest.substr(1, 2), oh) || !read_int(rest.substr(3, 2), om)) {
        return std::nullopt;
    }
    if (oh > 23 || om > 59) return std::nullopt;
    ts.offset_minutes = sign * (oh * 60 + om);
    return ts;
}

std::string format_timestamp(const Timestamp& ts) {
    char buf[40];
    const int off = ts.offset_minutes < 0 ? -ts.offset_minutes : ts.offset_minutes;
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", ts.year, ts.month, ts.day, ts.hour,
                  ts.minute, ts.second, ts.offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
    return buf;
}

bool sanitize_utf8(std::string& text) {
    // Fast path: pure ASCII.
    if (std::all_of(text.begin(), text.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
        return false;
    }
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(text.size());
    bool replaced = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    auto cont = [&](std::size_t k) { return k < n && (byte(k) & 0xC0) == 0x80; };
    while (i < n) {
        const unsigned char b = byte(i);
        std::size_t len = 0;
        if (b < 0x80) {
            len = 1;
        } else if (b >= 0xC2 && b <= 0xDF) {
            len = cont(i + 1) ? 2 : 0;
        } else if (b >= 0xE0 && b <= 0xEF) {
            const unsigned char lo = b == 0xE0 ? 0xA0 : 0x80;
            const unsigned char hi = b == 0xED ? 0x9F : 0xBF;
            len = (i + 1 < n && byte(i + 1) >= lo && byte(i + 1) <= hi && cont(i + 2)) ? 3 : 0;
        } else if (b >= 0xF0 && b <= 0xF4) {
            const unsigned char lo = b == 0xF0 ? 0x90 : 0x80;
            const unsigned char hi = b == 0xF4 ? 0x8F : 0xBF;
            len = (i + 1 < n && byte(i + 1) >= lo && byte(i + 1) <= hi && cont(i + 2) && cont(i + 3)) ? 4 : 0;
        }
        if (len == 0) {
            out += kReplacement;
            replaced = true;
            ++i;
        } else {
            out.append(text, i, len);
            i += len;
        }
    }
    text = std::move(out);
    return replaced;
}

bool FeedReader::SeenIds::insert(std::int64_t id) {
    constexpr std::int64_t kDenseLimit = std::int64_t{1} << 28;
    if (id >= 0 && id < kDenseLimit) {
        const auto idx = static_cast<std::size_t>(id);
        if (idx >= dense_.size()) dense_.resize(std::max(idx + 1, dense_.size() * 2));
        if (dense_[idx]) return false;
        dense_[idx] = true;
        return true;
    }
    return sparse_.insert(id).second;
}

FeedReader::FeedReader(const std::filesystem::path& path, LoadOptions options)
    : owned_(std::make_unique<std::ifstream>(path, std::ios::binary)), csv_(*owned_), options_(options) {
    if (!*owned_ || std::filesystem::is_directory(path)) {
        throw DatasetError(DatasetErrorKind::FileUnreadable, "cannot open " + path.string());
    }
    read_header();
}

FeedReader::FeedReader(std::istream& in, LoadOptions options) : csv_(in), options_(options) {
    if (!in) throw DatasetError(DatasetErrorKind::FileUnreadable, "input stream is not readable");
    read_header();
}

void FeedReader::read_header() {
    std::vector<std::string> header;
    if (!csv_.next(header)) {
        std::vector<std::string> all(kFeedColumns.begin(), kFeedColumns.end());
        throw DatasetError::header_mismatch(std::move(all));
    }
    header_width_ = header.size();
    std::vector<std::string> missing;
    for (std::size_t c = 0; c < kFeedColumns.size(); ++c) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (normalize_header_name(header[i]) == kFeedColumns[c]) {
                column_index_[c] = i;
                found = true;
                break;
            }
        }
        if (!found) missing.emplace_back(kFeedColumns[c]);
    }
    if (!missing.empty()) throw DatasetError::header_mismatch(std::move(missing));
}

void FeedReader::skip(RowError error) {
    ++stats_.rows_skipped;
    ++stats_.parse_failures_by_kind[std::string(to_string(error))];
}

std::optional<PhishRecord> FeedReader::convert(std::vector<std::string>& fields, RowError& error) {
    if (fields.size() != header_width_) {
        error = RowError::WrongFieldCount;
        return std::nullopt;
    }
    if (csv_.last_record_malformed()) {
        error = RowError::MalformedQuoting;
        return std::nullopt;
    }
    bool replaced = false;
    for (auto& f : fields) replaced = sanitize_utf8(f) || replaced;

    auto field = [&](std::size_t column) -> std::string& { return fields[column_index_[column]]; };

    PhishRecord r;
    const std::string_view id_text = trim(field(0));
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), r.phish_id);
    if (id_text.empty() || ec != std::errc{} || ptr != id_text.data() + id_text.size()) {
        error = RowError::BadPhishId;
        return std::nullopt;
    }
    r.url = std::string(trim(field(1)));
    if (r.url.empty()) {
        error = RowError::EmptyUrl;
        return std::nullopt;
    }
    auto submitted = parse_timestamp(field(3));
    if (!submitted) {
        error = RowError::BadTimestamp;
        return std::nullopt;
    }
    r.submission_time = *submitted;
    if (!trim(field(5)).empty()) {
        r.verification_time = parse_timestamp(field(5));
        if (!r.verification_time) {
            error = RowError::BadVerificationTime;
            return std::nullopt;
        }
    }
    const auto verified = parse_bool(field(4));
    const auto online = parse_bool(field(6));
    if (!verified || !online) {
        error = RowError::BadBoolean;
        return std::nullopt;
    }
    r.verified = *verified;
    r.online = *online;
    r.detail_url = std::move(field(2));
    r.target = std::string(trim(field(7)));

    if (!seen_ids_.insert(r.phish_id)) {
        error = RowError::DuplicatePhishId;
        return std::nullopt;
    }
    if (options_.dedupe_url && !seen_urls_.insert(std::hash<std::string>{}(r.url)).second) {
        error = RowError::DuplicateUrl;
        return std::nullopt;
    }
    if (replaced) ++stats_.rows_with_invalid_utf8;
    return r;
}

std::optional<PhishRecord> FeedReader::next() {
    while (csv_.next(fields_)) {
        // A lone trailing newline yields an empty record; it is not a row.
        if (fields_.size() == 1 && fields_[0].empty() && !csv_.last_record_malformed()) continue;
        ++stats_.rows_read;
        RowError error{};
        if (auto record = convert(fields_, error)) {
            ++stats_.records_ok;
            return record;
        }
        skip(error);
    }
    return std::nullopt;
}

std::unique_ptr<FeedReader> load_csv(const std::filesystem::path& path, LoadOptions options) {
    return std::make_unique<FeedReader>(path, options);
}

std::vector<PhishRecord> collect(RecordSource& source) {
    std::vector<PhishRecord> out;
    while (auto r = source.next()) out.push_back(*std::move(r));
    return out;
}

bool RecordFilter::matches(const PhishRecord& r) const {
    if (verified && r.verified != *verified) return false;
    if (online && r.online != *online) return false;
    if (year_min && year_of(r) < *year_min) return false;
    if (year_max && year_of(r) > *year_max) return false;
    if (has_target && target_hint_present(r) != *has_target) return false;
    return true;
}

bool RecordFilter::target_hint_present(const PhishRecord& r) {
    const auto t = trim(r.target);
    return !t.empty() && !iequals(t, "other");
}

std::optional<PhishRecord> FilteredSource::next() {
    while (auto r = upstream_.next()) {
        if (filter_.matches(*r)) return r;
    }
    return std::nullopt;
}

std::optional<PhishRecord> VectorSource::next() {
    if (pos_ >= records_.size()) return std::nullopt;
    return records_[pos_++];
}

void write_feed_csv(std::ostream& out, const std::vector<PhishRecord>& records) {
    out << "phish_id,url,phish_detail_url,submission_time,verified,verification_time,online,target\n";
    for (const auto& r : records) {
        out << r.phish_id << ',' << csv_escape(r.url) << ',' << csv_escape(r.detail_url) << ','
            << format_timestamp(r.submission_time) << ',' << (r.verified ? "yes" : "no") << ','
            << (r.verification_time ? format_timestamp(*r.verification_time) : "") << ','
            << (r.online ? "yes" : "no") << ',' << csv_escape(r.target) << '\n';
    }
}

bool is_feed_header(std::string_view line) {
    std::istringstream in{std::string(line)};
    CsvReader csv(in);
    std::vector<std::string> fields;
    if (!csv.next(fields)) return false;
    for (auto column : kFeedColumns) {
        const bool found = std::any_of(fields.begin(), fields.end(),
                                       [&](const std::string& f) { return normalize_header_name(f) == column; });
        if (!found) return false;
    }
    return true;
}

}  // namespace phishscope
