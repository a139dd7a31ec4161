// phishscope: classify phishing URLs and reproduce feed-level statistics.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <thread>

#include "phishscope/dataset.hpp"
#include "phishscope/detectors.hpp"
#include "phishscope/fetch.hpp"
#include "phishscope/lexicon.hpp"
#include "phishscope/pipeline.hpp"
#include "phishscope/report.hpp"
#include "phishscope/url.hpp"

namespace ps = phishscope;

namespace {

enum Exit : int {
    kOk = 0,
    kParseError = 2,
    kUsage = 64,
    kDataError = 65,
    kNoInput = 66,
    kUnavailable = 69,
    kSoftware = 70,
};

struct Options {
    std::string format = "json";
    std::optional<std::size_t> type3_threshold;
    std::optional<std::size_t> edit_distance;
    std::string brands;
    std::string suffixes;
    std::vector<std::string> wordlists;
    std::size_t top = 10;
    std::size_t min_len = 5;
    std::string type2_mode = "both";
    bool dedupe_url = false;
    unsigned jobs = 1;
    bool no_meta = false;
    int verbose = 0;

    // record filter
    bool verified_only = false;
    std::optional<int> year_min;
    std::optional<int> year_max;

    std::string url;
    std::string target;
    std::string input;
    std::string feature;
    std::string endpoint;
    std::string output;
    int timeout = 60;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Builds and validates the analysis config before any input is read.
ps::AnalysisConfig build_config(const Options& o) {
    const auto data = ps::BundledData::locate();
    ps::AnalysisConfig cfg;
    try {
        const std::filesystem::path suffixes = o.suffixes.empty() ? data.public_suffixes() : std::filesystem::path(o.suffixes);
        cfg.detectors.suffixes = std::make_shared<const ps::PublicSuffixSnapshot>(ps::PublicSuffixSnapshot::load(suffixes));
        cfg.detectors.brand_list = ps::load_brand_list(o.brands.empty() ? data.brands() : std::filesystem::path(o.brands));
        if (o.wordlists.empty()) {
            for (const auto& p : data.wordlists()) cfg.wordlists.push_back(ps::load_wordlist(p));
        } else {
            for (const auto& p : o.wordlists) cfg.wordlists.push_back(ps::load_wordlist(p));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    if (o.type3_threshold) cfg.detectors.type3_length_threshold = *o.type3_threshold;
    if (o.edit_distance) cfg.detectors.type4_max_edit_distance = *o.edit_distance;
    const auto mode = ps::parse_type2_mode(o.type2_mode);
    if (!mode) throw UsageError("unknown --type2-mode '" + o.type2_mode + "'");
    cfg.detectors.type2_mode = *mode;
    cfg.min_token_len = o.min_len;
    if (o.top < 1) throw UsageError("--top must be at least 1");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

ps::ReportFormat report_format(const Options& o) {
    try {
        return ps::parse_report_format(o.format);
    } catch (const ps::UnsupportedFormat& e) {
        throw UsageError(e.what());
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_stats(const ps::IngestStats& s) {
    std::cerr << "rows read: " << s.rows_read << ", loaded: " << s.records_ok << ", skipped: " << s.rows_skipped;
    if (s.rows_with_invalid_utf8) std::cerr << ", rows with invalid UTF-8: " << s.rows_with_invalid_utf8;
    std::cerr << '\n';
    for (const auto& [kind, n] : s.parse_failures_by_kind) std::cerr << "  " << kind << ": " << n << '\n';
}

ps::RecordFilter record_filter(const Options& o) {
    ps::RecordFilter f;
    if (o.verified_only) f.verified = true;
    f.year_min = o.year_min;
    f.year_max = o.year_max;
    return f;
}

// Streams the input CSV through the detector pipeline.
ps::FeatureCounters run_analysis(const Options& o, const ps::AnalysisConfig& cfg) {
    ps::FeedReader reader(o.input, ps::LoadOptions{o.dedupe_url});
    ps::FilteredSource source(reader, record_filter(o));
    const auto start = std::chrono::steady_clock::now();
    auto counters = ps::analyze(source, cfg, std::max(1u, o.jobs));
    print_stats(reader.stats());
    if (o.verbose) {
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::cerr << "analysed " << counters.total_urls << " URLs in " << took.count() << " s with " << o.jobs
                  << " job(s)\nconfig: " << counters.config_digest << '\n';
        if (counters.detector_diagnostics) std::cerr << "detector diagnostics: " << counters.detector_diagnostics << '\n';
    }
    return counters;
}

int cmd_classify(const Options& o) {
    const auto cfg = build_config(o);
    ps::ParsedUrl url;
    try {
        url = ps::parse_url(o.url);
    } catch (const ps::UrlError& e) {
        std::cerr << "UrlParseError(" << ps::to_string(e.kind()) << ", offset " << e.offset() << "): " << e.what()
                  << '\n';
        return kParseError;
    }
    std::optional<std::string_view> hint;
    if (!o.target.empty()) hint = ps::target_hint_from(o.target);
    const auto result = ps::classify(url, cfg.detectors, hint);

    nlohmann::ordered_json out;
    out["url"] = o.url;
    out["host"] = result.url.host;
    if (result.split) out["registrable_domain"] = result.split->registrable;
    auto detections = nlohmann::ordered_json::array();
    for (const auto& d : result.detections) {
        nlohmann::ordered_json j;
        j["type"] = ps::to_string(d.type);
        j["evidence"] = d.evidence;
        auto inputs = nlohmann::ordered_json::object();
        for (const auto& [k, v] : d.score_inputs) inputs[k] = v;
        j["score_inputs"] = inputs;
        detections.push_back(std::move(j));
    }
    out["detections"] = detections;
    if (!result.diagnostics.empty()) out["diagnostics"] = result.diagnostics;
    std::cout << out.dump(2) << '\n';
    return kOk;
}

int cmd_analyze(const Options& o) {
    const auto format = report_format(o);
    const auto cfg = build_config(o);
    const auto counters = run_analysis(o, cfg);
    auto report = ps::finalize(counters, ps::FinalizeOptions{o.top});
    if (format == ps::ReportFormat::Json && !o.no_meta) {
        report.metadata = ps::ReportMetadata{o.input, counters.config_digest, utc_now()};
    }
    std::cout << ps::render(report, format);
    return kOk;
}

int cmd_lexicon(const Options& o) {
    if (o.top < 1 || o.min_len < 1) throw UsageError("--top and --min-len must be at least 1");
    ps::FeedReader reader(o.input, ps::LoadOptions{o.dedupe_url});
    ps::FilteredSource source(reader, record_filter(o));
    ps::TokenTally tally;
    std::uint64_t n = 0;
    while (auto r = source.next()) {
        tally.add(ps::extract_tokens(r->url, o.min_len));
        ++n;
    }
    print_stats(reader.stats());
    if (n == 0) throw ps::EmptyAnalysis();
    ps::write_lexicon_csv(std::cout, tally.top(o.top, n));
    return kOk;
}

int cmd_trend(const Options& o) {
    ps::TrendFeature feature;
    try {
        feature = ps::parse_trend_feature(o.feature);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto format = report_format(o);
    const auto cfg = build_config(o);
    const auto counters = run_analysis(o, cfg);
    if (counters.total_urls == 0) throw ps::EmptyAnalysis();
    std::cout << ps::render_table(ps::trend_table(counters, feature), format);
    return kOk;
}

int cmd_fetch(const Options& o) {
    std::string endpoint = o.endpoint;
    if (endpoint.empty()) {
        if (const char* env = std::getenv(ps::kFeedEndpointEnv); env && *env) endpoint = env;
    }
    if (endpoint.empty()) {
        throw UsageError(std::string("no feed endpoint: pass one or set ") + ps::kFeedEndpointEnv);
    }
    if (o.timeout < 1) throw UsageError("--timeout must be at least 1 second");
    const auto saved = ps::fetch_feed(endpoint, o.output, ps::FetchOptions{std::chrono::seconds(o.timeout)});
    if (o.verbose) std::cerr << "saved " << saved.string() << '\n';
    return kOk;
}

int exit_code(ps::DatasetErrorKind kind) {
    switch (kind) {
        case ps::DatasetErrorKind::FileUnreadable: return kNoInput;
        case ps::DatasetErrorKind::HeaderMismatch: return kDataError;
        case ps::DatasetErrorKind::NetworkFailure: return kUnavailable;
        case ps::DatasetErrorKind::NonCsvPayload: return kDataError;
    }
    return kSoftware;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Phishing URL obfuscation analysis"};
    app.set_version_flag("--version", "phishscope 1.0.0");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file mirroring the long flags");

    app.add_option("--format", o.format, "Output format: json, csv or markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown"}, CLI::ignore_case));
    app.add_option("--type3-threshold", o.type3_threshold, "Minimum extra hostname length for Type III");
    app.add_option("--edit-distance", o.edit_distance, "Maximum brand edit distance for Type IV");
    app.add_option("--brands", o.brands, "Brand list file");
    app.add_option("--suffixes", o.suffixes, "Public suffix list file");
    app.add_option("--wordlist", o.wordlists, "Word list file (repeatable; replaces the bundled lists)")
        ->allow_extra_args(false);
    app.add_option("--top", o.top, "Number of lexicon tokens to report");
    app.add_option("--min-len", o.min_len, "Minimum token length");
    app.add_option("--type2-mode", o.type2_mode, "Type II mode: metadata, heuristic or both");
    app.add_flag("--dedupe-url", o.dedupe_url, "Skip rows whose URL was already seen");
    app.add_option("--jobs", o.jobs, "Worker threads for analysis")->check(CLI::Range(1u, 1024u));
    app.add_flag("--no-meta", o.no_meta, "Leave the metadata header out of JSON reports");
    app.add_flag("--verified-only", o.verified_only, "Only analyse verified rows");
    app.add_option("--year-min", o.year_min, "Earliest submission year to include");
    app.add_option("--year-max", o.year_max, "Latest submission year to include");
    app.add_option("--timeout", o.timeout, "Fetch timeout in seconds");
    app.add_option("--feed-url", o.endpoint, "Feed endpoint for fetch");
    app.add_flag("-v,--verbose", o.verbose, "More diagnostics on standard error");

    auto* classify = app.add_subcommand("classify", "Classify one URL");
    classify->add_option("url", o.url, "URL to classify")->required();
    classify->add_option("--target", o.target, "Targeted brand, as in the feed's target column");

    auto* analyze = app.add_subcommand("analyze", "Full report over a feed CSV");
    analyze->add_option("csv", o.input, "Feed CSV")->required();

    auto* lexicon = app.add_subcommand("lexicon", "Ranked word tokens of a feed CSV");
    lexicon->add_option("csv", o.input, "Feed CSV")->required();

    auto* trend = app.add_subcommand("trend", "Per-year HTTPS or IDN usage");
    trend->add_option("csv", o.input, "Feed CSV")->required();
    trend->add_option("--feature", o.feature, "https or idn")->required();

    auto* fetch = app.add_subcommand("fetch", "Download a feed CSV");
    fetch->add_option("endpoint", o.endpoint, "Feed URL (defaults to $PHISHSCOPE_FEED_URL)");
    fetch->add_option("-o,--output", o.output, "Destination file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (classify->parsed()) return cmd_classify(o);
        if (analyze->parsed()) return cmd_analyze(o);
        if (lexicon->parsed()) return cmd_lexicon(o);
        if (trend->parsed()) return cmd_trend(o);
        if (fetch->parsed()) return cmd_fetch(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNoInput;
    } catch (const ps::DatasetError& e) {
        std::cerr << "error: " << ps::to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const ps::EmptyAnalysis& e) {
        std::cerr << "error: EmptyAnalysis: " << e.what() << '\n';
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSoftware;
    }
    return kUsage;
}
