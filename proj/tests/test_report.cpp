#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "phishscope/csv.hpp"
#include "phishscope/pipeline.hpp"
#include "phishscope/report.hpp"
#include "support.hpp"

using namespace phishscope;
using testsupport::record;

namespace {

const AnalysisConfig& config() {
    static const AnalysisConfig cfg = default_analysis_config(testsupport::bundled());
    return cfg;
}

FeatureCounters count(const std::vector<PhishRecord>& records, const AnalysisConfig& cfg = config()) {
    FeatureCounters c(cfg);
    for (const auto& r : records) observe(c, cfg, r);
    return c;
}

std::vector<PhishRecord> mixed_corpus(std::mt19937& rng, std::size_t n) {
    static const std::vector<std::string> urls = {
        "http://67.210.122.222/apple/login",
        "https://recovery-confirm-paqe.cf/?facebook.com=chekpoint",
        "https://nz1webapps7mpp3manage-my-papl-account.felixkot.biz/signin",
        "http://www.g0og1e.com",
        "https://www.xn--pple-43d.com/",
        "http://secure.example.com/account/update;jsessionid=1?x=1#top",
        "not a url at all",
        "http://\xd0\xb0pple.com/login",
        "https://sites.google.com/site/admin-update",
        "http://0x43D27ADE/bonus",
    };
    static const std::vector<std::string> targets = {"Other", "PayPal", "Apple", "Facebook"};
    std::vector<PhishRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(record(static_cast<std::int64_t>(i + 1), urls[rng() % urls.size()] + (rng() % 2 ? "" : "/extra"),
                             2015 + static_cast<int>(rng() % 5), targets[rng() % targets.size()]));
    }
    return out;
}

}  // namespace

TEST(Accumulate, SingleRecordIncrements) {
    const auto c = count({record(1, "https://67.210.122.222/login", 2019)});
    EXPECT_EQ(c.total_urls, 1u);
    EXPECT_EQ(c.per_type[index_of(ObfuscationType::I)], 1u);
    EXPECT_EQ(c.per_type[index_of(ObfuscationType::V)], 1u);
    EXPECT_EQ(c.per_type[index_of(ObfuscationType::II)], 0u);
    EXPECT_EQ(c.per_year_scheme.at(2019)[0], 1u);
    EXPECT_EQ(c.per_year_scheme.at(2019)[1], 0u);
    EXPECT_EQ(c.extra_length.count, 0u);  // IP hosts have no registrable domain
    EXPECT_EQ(c.url_length.max, std::string("https://67.210.122.222/login").size());
}

TEST(Accumulate, NoDetections) {
    const auto c = count({record(1, "http://example.com/about", 2018)});
    EXPECT_EQ(c.per_type, (std::array<std::uint64_t, 6>{}));
    EXPECT_EQ(c.component_present[0], 1u);
    EXPECT_EQ(c.component_present[2], 1u);
    EXPECT_EQ(c.per_year_idn.at(2018), 0u);
}

TEST(Accumulate, UnparsedStillCounted) {
    const auto c = count({record(1, "login here", 2019)});
    EXPECT_EQ(c.total_urls, 1u);
    EXPECT_EQ(c.unparsed_urls, 1u);
    EXPECT_EQ(c.component_present, (std::array<std::uint64_t, 6>{}));
    EXPECT_EQ(c.per_year_scheme.at(2019)[1], 1u);
}

// Independent naive recount over a 10-record fixture.
TEST(Accumulate, MatchesBruteForce) {
    std::mt19937 rng(10);
    const auto records = mixed_corpus(rng, 10);
    const auto& cfg = config();
    const auto c = count(records);

    std::array<std::uint64_t, 6> types{}, comps{};
    std::uint64_t unparsed = 0, https = 0;
    std::vector<std::uint64_t> login(1, 0);
    for (const auto& r : records) {
        if (contains_word(r.url, "login")) ++login[0];
        ParsedUrl u;
        try {
            u = parse_url(r.url);
        } catch (const UrlError&) {
            ++unparsed;
            continue;
        }
        if (u.scheme == "https") ++https;
        for (std::size_t i = 0; i < 6; ++i) comps[i] += component_present(u, kAllComponents[i]);
        for (auto d : {detect_type1(u), detect_type2(u, cfg.detectors, target_hint_from(r.target)),
                       detect_type3(u, cfg.detectors), detect_type4(u, cfg.detectors), detect_type5(u), detect_type6(u)}) {
            if (d) ++types[index_of(d->type)];
        }
    }
    EXPECT_EQ(c.per_type, types);
    EXPECT_EQ(c.component_present, comps);
    EXPECT_EQ(c.unparsed_urls, unparsed);
    std::uint64_t https_total = 0;
    for (const auto& [year, v] : c.per_year_scheme) https_total += v[0];
    EXPECT_EQ(https_total, https);
    const auto& garera = c.wordlists[0];
    const auto idx = std::find(garera.words.begin(), garera.words.end(), "login") - garera.words.begin();
    EXPECT_EQ(c.per_word[0][idx], login[0]);
}

TEST(Merge, Laws) {
    std::mt19937 rng(20);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = count(mixed_corpus(rng, 30));
        const auto b = count(mixed_corpus(rng, 30));
        const auto c = count(mixed_corpus(rng, 30));
        const FeatureCounters empty(config());
        EXPECT_EQ(merge(a, empty), a);
        EXPECT_EQ(merge(empty, a), a);
        EXPECT_EQ(merge(a, b), merge(b, a));
        EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
    }
}

TEST(Merge, SplitCorpusEqualsWhole) {
    std::mt19937 rng(30);
    const auto corpus = mixed_corpus(rng, 100);
    const auto whole = count(corpus);
    for (std::size_t cut = 0; cut <= corpus.size(); cut += 7) {
        const std::vector<PhishRecord> left(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(cut));
        const std::vector<PhishRecord> right(corpus.begin() + static_cast<std::ptrdiff_t>(cut), corpus.end());
        EXPECT_EQ(merge(count(left), count(right)), whole);
    }
}

TEST(Merge, ConfigMismatch) {
    auto other = config();
    other.detectors.type3_length_threshold = 99;
    FeatureCounters a(config()), b(other);
    EXPECT_THROW(a.merge(b), ConfigMismatch);
}

TEST(Finalize, Empty) { EXPECT_THROW(finalize(FeatureCounters(config())), EmptyAnalysis); }

TEST(Finalize, SingleHttpUrl) {
    const auto report = finalize(count({record(1, "http://example.com/", 2017)}));
    const auto* t6 = report.table("T6");
    ASSERT_TRUE(t6);
    ASSERT_EQ(t6->rows.size(), 1u);
    EXPECT_EQ(t6->rows[0], (std::vector<std::string>{"2017", "0", "1", "0.00"}));
}

TEST(Finalize, TableSixRow) {
    std::vector<PhishRecord> corpus;
    for (int i = 0; i < 3930; ++i) corpus.push_back(record(i + 1, std::string(i < 1477 ? "https" : "http") + "://h.example.com/", 2019));
    const auto report = finalize(count(corpus));
    EXPECT_EQ(report.table("T6")->rows[0], (std::vector<std::string>{"2019", "1477", "3930", "37.58"}));
}

TEST(Finalize, TablesAndPrecision) {
    std::mt19937 rng(40);
    const auto report = finalize(count(mixed_corpus(rng, 50)), FinalizeOptions{5});
    for (const char* id : {"T1", "T2", "types", "T3", "T4", "words-phishtank2019", "T5", "T6", "T7"}) {
        EXPECT_TRUE(report.table(id)) << id;
    }
    EXPECT_EQ(report.table("T1")->rows.size(), 6u);
    EXPECT_EQ(report.table("T5")->rows.size(), 5u);
    EXPECT_EQ(report.table("T1")->rows[3][0], "Parameters");
    const auto& t2 = *report.table("T2");
    ASSERT_EQ(t2.rows.size(), 2u);
    EXPECT_EQ(t2.rows[0][0], "Type I");
    EXPECT_EQ(t2.rows[1][0], "Type II");
    EXPECT_EQ(t2.rows[0][1], "63.6%");
    EXPECT_EQ(t2.rows[1][1], "39.7%");
    // T6 and T7 are year-descending
    const auto& t7 = *report.table("T7");
    for (std::size_t i = 1; i < t7.rows.size(); ++i) EXPECT_GT(t7.rows[i - 1][0], t7.rows[i][0]);
    for (const auto& row : report.table("T3")->rows) {
        const auto& pct = row[2];
        EXPECT_EQ(pct.size() - pct.find('.') - 1, 3u) << pct;
        EXPECT_EQ(pct, testsupport::percent_oracle(std::stoull(row[1]), 50, 3));
    }
}

TEST(Render, JsonRoundTrip) {
    std::mt19937 rng(50);
    auto report = finalize(count(mixed_corpus(rng, 40)));
    EXPECT_EQ(report_from_json(render(report, ReportFormat::Json)), report);
    report.metadata = ReportMetadata{"feed.csv", "digest", "2019-05-05T00:00:00Z"};
    EXPECT_EQ(report_from_json(render(report, ReportFormat::Json)), report);
}

TEST(Render, CsvConstantColumns) {
    std::mt19937 rng(60);
    auto report = finalize(count(mixed_corpus(rng, 40)));
    report.metadata = ReportMetadata{"a,b \"c\".csv", "d", "t"};
    std::istringstream in(render(report, ReportFormat::Csv));
    CsvReader csv(in);
    std::vector<std::string> fields;
    std::size_t rows = 0;
    while (csv.next(fields)) {
        EXPECT_EQ(fields.size(), 4u);
        EXPECT_FALSE(csv.last_record_malformed());
        ++rows;
    }
    EXPECT_GT(rows, 50u);
}

TEST(Render, MarkdownTableTwo) {
    std::mt19937 rng(70);
    const auto md = render(finalize(count(mixed_corpus(rng, 20))), ReportFormat::Markdown);
    const auto at = md.find("## T2:");
    ASSERT_NE(at, std::string::npos);
    const auto section = md.substr(at, md.find("\n## ", at + 1) - at);
    EXPECT_NE(section.find("\n| Type I |"), std::string::npos);
    EXPECT_NE(section.find("\n| Type II |"), std::string::npos);
    EXPECT_EQ(std::count(section.begin(), section.end(), '\n'), 6);
}

TEST(Render, Deterministic) {
    std::mt19937 rng(80);
    const auto report = finalize(count(mixed_corpus(rng, 40)));
    for (auto f : {ReportFormat::Json, ReportFormat::Csv, ReportFormat::Markdown}) {
        EXPECT_EQ(render(report, f), render(report, f));
    }
    EXPECT_THROW(parse_report_format("xml"), UnsupportedFormat);
    EXPECT_EQ(parse_report_format("MarkDown"), ReportFormat::Markdown);
}

TEST(Trend, Tables) {
    std::vector<PhishRecord> corpus = {record(1, "https://xn--pple-43d.com/", 2019), record(2, "http://a.com/", 2019),
                                       record(3, "http://b.com/", 2016)};
    const auto c = count(corpus);
    const auto https = trend_table(c, TrendFeature::Https);
    EXPECT_EQ(https.rows, (std::vector<std::vector<std::string>>{{"2019", "1", "2", "50.00"}, {"2016", "0", "1", "0.00"}}));
    const auto idn = trend_table(c, TrendFeature::Idn);
    EXPECT_EQ(idn.rows[0], (std::vector<std::string>{"2019", "1", "2", "50.00"}));
    EXPECT_THROW(parse_trend_feature("ftp"), std::invalid_argument);
    EXPECT_EQ(render_table(https, ReportFormat::Csv), "Year,HTTPS URLs,Year total,Percentage\n2019,1,2,50.00\n2016,0,1,0.00\n");
}
