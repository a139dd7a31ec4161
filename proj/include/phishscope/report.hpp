#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phishscope/dataset.hpp"
#include "phishscope/detectors.hpp"
#include "phishscope/lexicon.hpp"

namespace phishscope {

struct AnalysisConfig {
    DetectorConfig detectors;
    std::vector<WordList> wordlists;
    std::size_t min_token_len = 5;

    void validate() const;
    std::string digest() const;
};

class ConfigMismatch : public std::runtime_error {
public:
    ConfigMismatch(const std::string& a, const std::string& b);
};

class EmptyAnalysis : public std::runtime_error {
public:
    EmptyAnalysis() : std::runtime_error("no usable records to analyse") {}
};

class UnsupportedFormat : public std::runtime_error {
public:
    explicit UnsupportedFormat(std::string_view format)
        : std::runtime_error("unsupported report format '" + std::string(format) + "'") {}
};

struct RunningStats {
    std::uint64_t count = 0;
    std::uint64_t sum = 0;
    std::uint64_t max = 0;

    void add(std::uint64_t v) {
        ++count;
        sum += v;
        if (v > max) max = v;
    }
    void merge(const RunningStats& o) {
        count += o.count;
        sum += o.sum;
        if (o.max > max) max = o.max;
    }
    friend bool operator==(const RunningStats&, const RunningStats&) = default;
};

/// Aggregation state for one corpus. Every field is a sum or a max, so
/// counters built over any partition of a corpus merge to the same value
/// as a single pass.
struct FeatureCounters {
    FeatureCounters() = default;
    explicit FeatureCounters(const AnalysisConfig& cfg);

    std::string config_digest;
    /// Word-list names and words, copied from the config, aligned with `per_word`.
    std::vector<WordList> wordlists;

    std::uint64_t total_urls = 0;
    std::uint64_t unparsed_urls = 0;
    std::array<std::uint64_t, 6> component_present{};
    std::array<std::uint64_t, 6> per_type{};
    std::uint64_t type2_metadata = 0;
    std::uint64_t type2_heuristic = 0;
    std::vector<std::vector<std::uint64_t>> per_word;
    /// year -> {https, other}
    std::map<int, std::array<std::uint64_t, 2>> per_year_scheme;
    std::map<int, std::uint64_t> per_year_idn;
    /// Characters before the registrable domain; hosts that are IPs or have
    /// no known public suffix are left out.
    RunningStats extra_length;
    RunningStats url_length;
    TokenTally tokens;
    std::uint64_t detector_diagnostics = 0;

    /// Throws ConfigMismatch when the digests differ.
    void merge(const FeatureCounters& other);

    friend bool operator==(const FeatureCounters&, const FeatureCounters&) = default;
};

/// Adds one record. `classification` is null when the URL did not parse;
/// such records still count toward totals, word presence and tokens.
void accumulate(FeatureCounters& counters, const PhishRecord& record, const UrlClassification* classification,
                const TokenSet& tokens);

FeatureCounters merge(FeatureCounters a, const FeatureCounters& b);

struct ReportTable {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const ReportTable&, const ReportTable&) = default;
};

struct LengthStats {
    std::uint64_t extra_count = 0;
    std::string extra_mean;
    std::uint64_t extra_max = 0;
    std::uint64_t url_count = 0;
    std::string url_mean;
    std::uint64_t url_max = 0;

    friend bool operator==(const LengthStats&, const LengthStats&) = default;
};

struct ReportMetadata {
    std::string input;
    std::string config_digest;
    std::string generated_at;

    friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

/// Rendered table set. Percentages are strings, truncated to each table's
/// printed precision: T1 one decimal, T2/types/T6 two, T3/T4/T5 three.
struct AnalysisReport {
    int schema_version = kReportSchemaVersion;
    std::optional<ReportMetadata> metadata;
    std::uint64_t total_urls = 0;
    std::uint64_t unparsed_urls = 0;
    std::vector<ReportTable> tables;
    LengthStats length_stats;

    const ReportTable* table(std::string_view id) const;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

struct FinalizeOptions {
    std::size_t top_n = 10;
};

/// Throws EmptyAnalysis when no URL was counted.
AnalysisReport finalize(const FeatureCounters& counters, const FinalizeOptions& options = {});

enum class ReportFormat { Json, Csv, Markdown };

ReportFormat parse_report_format(std::string_view text);
std::string render(const AnalysisReport& report, ReportFormat format);
AnalysisReport report_from_json(std::string_view json);

enum class TrendFeature { Https, Idn };

TrendFeature parse_trend_feature(std::string_view text);

/// Year-descending rows of (year, feature count, year total, percentage).
ReportTable trend_table(const FeatureCounters& counters, TrendFeature feature);

/// Renders one table on its own: CSV with a header row, a JSON object, or
/// a markdown table.
std::string render_table(const ReportTable& table, ReportFormat format);

/// Percentage precision used by each table id.
unsigned percent_decimals(std::string_view table_id);

}  // namespace phishscope
