#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace phishscope {

/// Streaming RFC 4180 reader. Quoted fields may contain commas, doubled
/// quotes and line breaks; both LF and CRLF record endings are accepted.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// True when the last record had a quote in the wrong place or an
    /// unterminated quoted field. The record is still returned best-effort.
    bool last_record_malformed() const noexcept { return malformed_; }

    std::size_t records_read() const noexcept { return records_; }

private:
    std::istream& in_;
    bool malformed_ = false;
    std::size_t records_ = 0;
};

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(const std::string& field);

}  // namespace phishscope
