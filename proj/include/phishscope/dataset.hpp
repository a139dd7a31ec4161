#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "phishscope/csv.hpp"

namespace phishscope {

enum class DatasetErrorKind { FileUnreadable, HeaderMismatch, NetworkFailure, NonCsvPayload };

std::string_view to_string(DatasetErrorKind kind);

class DatasetError : public std::runtime_error {
public:
    DatasetError(DatasetErrorKind kind, const std::string& what);

    DatasetErrorKind kind() const noexcept { return kind_; }
    /// Set for HeaderMismatch.
    const std::vector<std::string>& missing_columns() const noexcept { return missing_; }

    static DatasetError header_mismatch(std::vector<std::string> missing);

private:
    DatasetErrorKind kind_;
    std::vector<std::string> missing_;
};

/// Wall-clock fields exactly as written plus the numeric zone offset.
struct Timestamp {
    int year = 0;
    int month = 0;
    int day = 0;
    int hour = 0;
    int minute = 0;
    int second = 0;
    int offset_minutes = 0;

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// ISO 8601 `YYYY-MM-DD[T ]hh:mm:ss[.frac](Z|±hh:mm|±hhmm)`. The zone is
/// mandatory; calendar fields are range checked.
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct PhishRecord {
    std::int64_t phish_id = 0;
    std::string url;
    std::string detail_url;
    Timestamp submission_time;
    bool verified = false;
    std::optional<Timestamp> verification_time;
    bool online = false;
    std::string target;

    friend bool operator==(const PhishRecord&, const PhishRecord&) = default;
};

/// Calendar year of submission in the timestamp's own offset.
inline int year_of(const PhishRecord& r) { return r.submission_time.year; }

inline constexpr std::array<std::string_view, 8> kFeedColumns = {
    "phish_id", "url",    "phish_detail_url", "submission_time",
    "verified", "verification_time", "online", "target",
};

enum class RowError {
    WrongFieldCount,
    MalformedQuoting,
    BadPhishId,
    DuplicatePhishId,
    EmptyUrl,
    DuplicateUrl,
    BadTimestamp,
    BadVerificationTime,
    BadBoolean,
};

std::string_view to_string(RowError e);

struct IngestStats {
    std::uint64_t rows_read = 0;
    std::uint64_t records_ok = 0;
    std::uint64_t rows_skipped = 0;
    std::map<std::string, std::uint64_t> parse_failures_by_kind;
    /// Rows in which invalid UTF-8 was replaced with U+FFFD. Such rows are
    /// still loaded.
    std::uint64_t rows_with_invalid_utf8 = 0;

    bool conserved() const noexcept { return rows_read == records_ok + rows_skipped; }

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Replaces every invalid UTF-8 sequence with U+FFFD. Returns true if
/// anything was replaced.
bool sanitize_utf8(std::string& text);

class RecordSource {
public:
    virtual ~RecordSource() = default;
    virtual std::optional<PhishRecord> next() = 0;
};

struct LoadOptions {
    bool dedupe_url = false;
};

/// Streams PhishRecords from a PhishTank CSV feed, one row at a time.
/// Malformed rows are skipped and tallied in `stats()`.
class FeedReader : public RecordSource {
public:
    /// Throws DatasetError (FileUnreadable, HeaderMismatch).
    explicit FeedReader(const std::filesystem::path& path, LoadOptions options = {});
    /// Reads from an already-open stream, which must outlive the reader.
    explicit FeedReader(std::istream& in, LoadOptions options = {});

    std::optional<PhishRecord> next() override;
    const IngestStats& stats() const noexcept { return stats_; }

private:
    class SeenIds {
    public:
        bool insert(std::int64_t id);

    private:
        std::vector<bool> dense_;
        std::unordered_set<std::int64_t> sparse_;
    };

    void read_header();
    std::optional<PhishRecord> convert(std::vector<std::string>& fields, RowError& error);
    void skip(RowError error);

    std::unique_ptr<std::ifstream> owned_;
    CsvReader csv_;
    LoadOptions options_;
    std::array<std::size_t, kFeedColumns.size()> column_index_{};
    std::size_t header_width_ = 0;
    IngestStats stats_;
    SeenIds seen_ids_;
    std::unordered_set<std::size_t> seen_urls_;
    std::vector<std::string> fields_;
};

/// Opens a feed and validates its header. Equivalent to constructing a FeedReader.
std::unique_ptr<FeedReader> load_csv(const std::filesystem::path& path, LoadOptions options = {});

/// Drains a source into memory. Convenience for tests and small feeds.
std::vector<PhishRecord> collect(RecordSource& source);

struct RecordFilter {
    std::optional<bool> verified;
    std::optional<bool> online;
    std::optional<int> year_min;
    std::optional<int> year_max;
    std::optional<bool> has_target;

    bool matches(const PhishRecord& r) const;
    /// Target is set and is not the feed's "Other" placeholder.
    static bool target_hint_present(const PhishRecord& r);
};

/// Lazily yields the upstream records that match `filter`, in order.
class FilteredSource : public RecordSource {
public:
    FilteredSource(RecordSource& upstream, RecordFilter filter) : upstream_(upstream), filter_(filter) {}
    std::optional<PhishRecord> next() override;

private:
    RecordSource& upstream_;
    RecordFilter filter_;
};

inline FilteredSource filter_records(RecordSource& upstream, RecordFilter filter) {
    return FilteredSource(upstream, filter);
}

/// Serves records from memory.
class VectorSource : public RecordSource {
public:
    explicit VectorSource(std::vector<PhishRecord> records) : records_(std::move(records)) {}
    std::optional<PhishRecord> next() override;

private:
    std::vector<PhishRecord> records_;
    std::size_t pos_ = 0;
};

/// Writes records in the feed's column order, with a header row.
void write_feed_csv(std::ostream& out, const std::vector<PhishRecord>& records);
std::string format_timestamp(const Timestamp& ts);

/// Checks that `line` is a CSV header containing every feed column.
bool is_feed_header(std::string_view line);

}  // namespace phishscope
