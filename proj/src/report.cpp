#include "phishscope/report.hpp"

#include <json.hpp>
#include <sstream>

#include "phishscope/csv.hpp"
#include "phishscope/text.hpp"

namespace phishscope {

void AnalysisConfig::validate() const {
    detectors.validate();
    if (min_token_len < 1) throw std::invalid_argument("minimum token length must be at least 1");
    for (const auto& list : wordlists) list.validate();
}

std::string AnalysisConfig::digest() const {
    std::ostringstream out;
    out << detectors.digest() << ";min_len=" << min_token_len << ";lists=";
    for (const auto& list : wordlists) {
        out << list.name << '[';
        for (const auto& w : list.words) out << w << ' ';
        out << ']';
    }
    return out.str();
}

ConfigMismatch::ConfigMismatch(const std::string& a, const std::string& b)
    : std::runtime_error("cannot merge counters built with different configs: '" + a + "' vs '" + b + "'") {}

FeatureCounters::FeatureCounters(const AnalysisConfig& cfg) : config_digest(cfg.digest()), wordlists(cfg.wordlists) {
    per_word.reserve(wordlists.size());
    for (const auto& list : wordlists) per_word.emplace_back(list.words.size(), 0);
}

void FeatureCounters::merge(const FeatureCounters& other) {
    if (config_digest != other.config_digest) throw ConfigMismatch(config_digest, other.config_digest);
    total_urls += other.total_urls;
    unparsed_urls += other.unparsed_urls;
    for (std::size_t i = 0; i < component_present.size(); ++i) component_present[i] += other.component_present[i];
    for (std::size_t i = 0; i < per_type.size(); ++i) per_type[i] += other.per_type[i];
    type2_metadata += other.type2_metadata;
    type2_heuristic += other.type2_heuristic;
    for (std::size_t l = 0; l < per_word.size(); ++l) {
        for (std::size_t w = 0; w < per_word[l].size(); ++w) per_word[l][w] += other.per_word[l][w];
    }
    for (const auto& [year, counts] : other.per_year_scheme) {
        auto& mine = per_year_scheme[year];
        mine[0] += counts[0];
        mine[1] += counts[1];
    }
    for (const auto& [year, count] : other.per_year_idn) per_year_idn[year] += count;
    extra_length.merge(other.extra_length);
    url_length.merge(other.url_length);
    tokens.merge(other.tokens);
    detector_diagnostics += other.detector_diagnostics;
}

FeatureCounters merge(FeatureCounters a, const FeatureCounters& b) {
    a.merge(b);
    return a;
}

void accumulate(FeatureCounters& c, const PhishRecord& record, const UrlClassification* cls, const TokenSet& tokens) {
    ++c.total_urls;
    c.url_length.add(record.url.size());
    c.tokens.add(tokens);
    for (std::size_t l = 0; l < c.wordlists.size(); ++l) {
        const auto& words = c.wordlists[l].words;
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (contains_word(record.url, words[w])) ++c.per_word[l][w];
        }
    }

    const int year = year_of(record);
    const bool https = cls && cls->url.scheme == "https";
    ++c.per_year_scheme[year][https ? 0 : 1];
    // Make the year visible in the IDN table even when it has no IDN hosts.
    auto& idn_for_year = c.per_year_idn[year];

    if (!cls) {
        ++c.unparsed_urls;
        return;
    }
    for (std::size_t i = 0; i < std::size(kAllComponents); ++i) {
        if (component_present(cls->url, kAllComponents[i])) ++c.component_present[i];
    }
    for (const auto& d : cls->detections) {
        ++c.per_type[index_of(d.type)];
        if (d.type == ObfuscationType::II) {
            if (auto it = d.score_inputs.find(score_key::kMetadata); it != d.score_inputs.end() && it->second > 0) {
                ++c.type2_metadata;
            }
            if (auto it = d.score_inputs.find(score_key::kHeuristic); it != d.score_inputs.end() && it->second > 0) {
                ++c.type2_heuristic;
            }
        }
    }
    if (cls->has(ObfuscationType::VI)) ++idn_for_year;
    if (!cls->host.is_ip() && cls->split) c.extra_length.add(extra_hostname_length(*cls->split));
    c.detector_diagnostics += cls->diagnostics.size();
}

const ReportTable* AnalysisReport::table(std::string_view id) const {
    for (const auto& t : tables) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

unsigned percent_decimals(std::string_view table_id) {
    if (table_id == "T1") return 1;
    if (table_id == "T2" || table_id == "types" || table_id == "T6") return 2;
    return 3;
}

namespace {

std::string wordlist_table_id(const std::string& name) {
    if (name == "garera2007") return "T3";
    if (name == "le2011") return "T4";
    return "words-" + name;
}

std::string type_label(ObfuscationType t) { return "Type " + std::string(to_string(t)); }

}  // namespace

AnalysisReport finalize(const FeatureCounters& c, const FinalizeOptions& options) {
    if (c.total_urls == 0) throw EmptyAnalysis();
    if (options.top_n < 1) throw std::invalid_argument("top_n must be at least 1");
    const std::uint64_t n = c.total_urls;

    AnalysisReport report;
    report.total_urls = n;
    report.unparsed_urls = c.unparsed_urls;

    {
        ReportTable t{"T1", "URL components distribution", {"Component", "URLs", "Percentage"}, {}};
        for (std::size_t i = 0; i < std::size(kAllComponents); ++i) {
            const Ratio r{c.component_present[i], n};
            t.rows.push_back({std::string(to_string(kAllComponents[i])), std::to_string(r.count),
                              format_percent(r, 1)});
        }
        report.tables.push_back(std::move(t));
    }
    {
        ReportTable t{"T2",
                      "Type I and Type II prevalence",
                      {"Technique", "Garera et al. 2007 (reference)", "Metadata URLs", "Metadata %", "Heuristic URLs",
                       "Heuristic %"},
                      {}};
        const Ratio type1{c.per_type[index_of(ObfuscationType::I)], n};
        t.rows.push_back({"Type I", "63.6%", std::to_string(type1.count), format_percent(type1, 2),
                          std::to_string(type1.count), format_percent(type1, 2)});
        const Ratio meta{c.type2_metadata, n};
        const Ratio heur{c.type2_heuristic, n};
        t.rows.push_back({"Type II", "39.7%", std::to_string(meta.count), format_percent(meta, 2),
                          std::to_string(heur.count), format_percent(heur, 2)});
        report.tables.push_back(std::move(t));
    }
    {
        ReportTable t{"types", "Obfuscation type prevalence", {"Type", "URLs", "Percentage"}, {}};
        for (auto type : kAllTypes) {
            const Ratio r{c.per_type[index_of(type)], n};
            t.rows.push_back({type_label(type), std::to_string(r.count), format_percent(r, 2)});
        }
        report.tables.push_back(std::move(t));
    }
    for (std::size_t l = 0; l < c.wordlists.size(); ++l) {
        const auto& list = c.wordlists[l];
        ReportTable t{wordlist_table_id(list.name), "Suggestive word presence (" + list.name + ")",
                      {"Word", "URLs", "Percentage"}, {}};
        for (std::size_t w = 0; w < list.words.size(); ++w) {
            const Ratio r{c.per_word[l][w], n};
            t.rows.push_back({list.words[w], std::to_string(r.count), format_percent(r, 3)});
        }
        report.tables.push_back(std::move(t));
    }
    {
        ReportTable t{"T5", "Most frequent word tokens", {"Token", "URLs", "Percentage"}, {}};
        for (const auto& e : c.tokens.top(options.top_n, n)) {
            t.rows.push_back({e.token, std::to_string(e.ratio.count), format_percent(e.ratio, 3)});
        }
        report.tables.push_back(std::move(t));
    }
    {
        ReportTable t{"T6", "HTTPS usage per year", {"Year", "HTTPS URLs", "Year total", "Percentage"}, {}};
        for (auto it = c.per_year_scheme.rbegin(); it != c.per_year_scheme.rend(); ++it) {
            const Ratio r{it->second[0], it->second[0] + it->second[1]};
            t.rows.push_back({std::to_string(it->first), std::to_string(r.count), std::to_string(r.denominator),
                              format_percent(r, 2)});
        }
        report.tables.push_back(std::move(t));
    }
    {
        ReportTable t{"T7", "IDN usage per year", {"Year", "IDN URLs"}, {}};
        for (auto it = c.per_year_idn.rbegin(); it != c.per_year_idn.rend(); ++it) {
            t.rows.push_back({std::to_string(it->first), std::to_string(it->second)});
        }
        report.tables.push_back(std::move(t));
    }

    report.length_stats.extra_count = c.extra_length.count;
    report.length_stats.extra_mean = format_mean(c.extra_length.sum, c.extra_length.count, 2);
    report.length_stats.extra_max = c.extra_length.max;
    report.length_stats.url_count = c.url_length.count;
    report.length_stats.url_mean = format_mean(c.url_length.sum, c.url_length.count, 2);
    report.length_stats.url_max = c.url_length.max;
    return report;
}

ReportFormat parse_report_format(std::string_view text) {
    if (iequals(text, "json")) return ReportFormat::Json;
    if (iequals(text, "csv")) return ReportFormat::Csv;
    if (iequals(text, "markdown") || iequals(text, "md")) return ReportFormat::Markdown;
    throw UnsupportedFormat(text);
}

namespace {

using nlohmann::ordered_json;

ordered_json to_json(const AnalysisReport& r) {
    ordered_json j;
    j["schema_version"] = r.schema_version;
    if (r.metadata) {
        j["metadata"] = {{"input", r.metadata->input},
                         {"config_digest", r.metadata->config_digest},
                         {"generated_at", r.metadata->generated_at}};
    }
    j["total_urls"] = r.total_urls;
    j["unparsed_urls"] = r.unparsed_urls;
    auto tables = ordered_json::array();
    for (const auto& t : r.tables) {
        tables.push_back({{"id", t.id}, {"title", t.title}, {"columns", t.columns}, {"rows", t.rows}});
    }
    j["tables"] = std::move(tables);
    const auto& s = r.length_stats;
    j["length_stats"] = {{"extra_hostname_count", s.extra_count}, {"extra_hostname_mean", s.extra_mean},
                         {"extra_hostname_max", s.extra_max},     {"url_count", s.url_count},
                         {"url_mean", s.url_mean},                {"url_max", s.url_max}};
    return j;
}

std::string markdown_cell(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string render_markdown(const AnalysisReport& r) {
    std::ostringstream out;
    out << "# Phishing URL analysis\n\n";
    if (r.metadata) {
        out << "- Input: " << r.metadata->input << "\n- Config: `" << r.metadata->config_digest
            << "`\n- Generated: " << r.metadata->generated_at << "\n";
    }
    out << "- URLs analysed: " << r.total_urls << " (unparsed: " << r.unparsed_urls << ")\n";
    for (const auto& t : r.tables) {
        out << "\n## " << t.id << ": " << t.title << "\n\n|";
        for (const auto& c : t.columns) out << ' ' << markdown_cell(c) << " |";
        out << "\n|";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i == 0 ? " --- |" : " ---: |");
        out << '\n';
        for (const auto& row : t.rows) {
            out << '|';
            for (const auto& cell : row) out << ' ' << markdown_cell(cell) << " |";
            out << '\n';
        }
    }
    const auto& s = r.length_stats;
    out << "\n## Length statistics\n\n"
        << "| Measure | URLs | Mean | Max |\n| --- | ---: | ---: | ---: |\n"
        << "| Extra hostname characters | " << s.extra_count << " | " << s.extra_mean << " | " << s.extra_max
        << " |\n"
        << "| URL length | " << s.url_count << " | " << s.url_mean << " | " << s.url_max << " |\n";
    return out.str();
}

// Long format keeps every row at four columns regardless of table shape.
std::string render_csv(const AnalysisReport& r) {
    std::ostringstream out;
    out << "table,row,column,value\n";
    auto emit = [&](const std::string& table, const std::string& row, const std::string& column,
                    const std::string& value) {
        out << csv_escape(table) << ',' << csv_escape(row) << ',' << csv_escape(column) << ',' << csv_escape(value)
            << '\n';
    };
    if (r.metadata) {
        emit("metadata", "input", "value", r.metadata->input);
        emit("metadata", "config_digest", "value", r.metadata->config_digest);
        emit("metadata", "generated_at", "value", r.metadata->generated_at);
    }
    emit("summary", "total_urls", "value", std::to_string(r.total_urls));
    emit("summary", "unparsed_urls", "value", std::to_string(r.unparsed_urls));
    for (const auto& t : r.tables) {
        for (const auto& row : t.rows) {
            for (std::size_t i = 1; i < row.size() && i < t.columns.size(); ++i) {
                emit(t.id, row[0], t.columns[i], row[i]);
            }
        }
    }
    const auto& s = r.length_stats;
    emit("length_stats", "extra_hostname", "count", std::to_string(s.extra_count));
    emit("length_stats", "extra_hostname", "mean", s.extra_mean);
    emit("length_stats", "extra_hostname", "max", std::to_string(s.extra_max));
    emit("length_stats", "url", "count", std::to_string(s.url_count));
    emit("length_stats", "url", "mean", s.url_mean);
    emit("length_stats", "url", "max", std::to_string(s.url_max));
    return out.str();
}

}  // namespace

std::string render(const AnalysisReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return to_json(report).dump(2) + "\n";
        case ReportFormat::Csv: return render_csv(report);
        case ReportFormat::Markdown: return render_markdown(report);
    }
    throw UnsupportedFormat("?");
}

TrendFeature parse_trend_feature(std::string_view text) {
    if (iequals(text, "https")) return TrendFeature::Https;
    if (iequals(text, "idn")) return TrendFeature::Idn;
    throw std::invalid_argument("unknown trend feature '" + std::string(text) + "' (expected https or idn)");
}

ReportTable trend_table(const FeatureCounters& c, TrendFeature feature) {
    const bool https = feature == TrendFeature::Https;
    ReportTable t{https ? "T6" : "T7", https ? "HTTPS usage per year" : "IDN usage per year",
                  {"Year", https ? "HTTPS URLs" : "IDN URLs", "Year total", "Percentage"}, {}};
    for (auto it = c.per_year_scheme.rbegin(); it != c.per_year_scheme.rend(); ++it) {
        const std::uint64_t year_total = it->second[0] + it->second[1];
        std::uint64_t count = it->second[0];
        if (!https) {
            const auto idn = c.per_year_idn.find(it->first);
            count = idn == c.per_year_idn.end() ? 0 : idn->second;
        }
        const Ratio r{count, year_total};
        t.rows.push_back({std::to_string(it->first), std::to_string(count), std::to_string(year_total),
                          format_percent(r, 2)});
    }
    return t;
}

std::string render_table(const ReportTable& t, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Json: {
            ordered_json j = {{"id", t.id}, {"title", t.title}, {"columns", t.columns}, {"rows", t.rows}};
            out << j.dump(2) << '\n';
            break;
        }
        case ReportFormat::Csv: {
            auto line = [&](const std::vector<std::string>& cells) {
                for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
                out << '\n';
            };
            line(t.columns);
            for (const auto& row : t.rows) line(row);
            break;
        }
        case ReportFormat::Markdown: {
            out << '|';
            for (const auto& c : t.columns) out << ' ' << markdown_cell(c) << " |";
            out << "\n|";
            for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i == 0 ? " --- |" : " ---: |");
            out << '\n';
            for (const auto& row : t.rows) {
                out << '|';
                for (const auto& cell : row) out << ' ' << markdown_cell(cell) << " |";
                out << '\n';
            }
            break;
        }
    }
    return out.str();
}

AnalysisReport report_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    AnalysisReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
        throw std::runtime_error("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    if (j.contains("metadata")) {
        const auto& m = j.at("metadata");
        r.metadata = ReportMetadata{m.at("input").get<std::string>(), m.at("config_digest").get<std::string>(),
                                    m.at("generated_at").get<std::string>()};
    }
    r.total_urls = j.at("total_urls").get<std::uint64_t>();
    r.unparsed_urls = j.at("unparsed_urls").get<std::uint64_t>();
    for (const auto& t : j.at("tables")) {
        r.tables.push_back(ReportTable{t.at("id").get<std::string>(), t.at("title").get<std::string>(),
                                       t.at("columns").get<std::vector<std::string>>(),
                                       t.at("rows").get<std::vector<std::vector<std::string>>>()});
    }
    const auto& s = j.at("length_stats");
    r.length_stats = LengthStats{s.at("extra_hostname_count").get<std::uint64_t>(),
                                 s.at("extra_hostname_mean").get<std::string>(),
                                 s.at("extra_hostname_max").get<std::uint64_t>(),
                                 s.at("url_count").get<std::uint64_t>(),
                                 s.at("url_mean").get<std::string>(),
                                 s.at("url_max").get<std::uint64_t>()};
    return r;
}

}  // namespace phishscope
