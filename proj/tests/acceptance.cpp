// One line per acceptance criterion; exit status is the number of failures.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "phishscope/host.hpp"
#include "phishscope/lexicon.hpp"
#include "phishscope/pipeline.hpp"
#include "phishscope/punycode.hpp"
#include "phishscope/report.hpp"
#include "punycode_ref.hpp"
#include "support.hpp"

using namespace phishscope;
using testsupport::record;
using Clock = std::chrono::steady_clock;

namespace {

// Thrown by `check` so a criterion stops at its first broken expectation.
struct Failed {
    std::string why;
};

void check(bool ok, const std::string& why) {
    if (!ok) throw Failed{why};
}

const AnalysisConfig& config() {
    static const AnalysisConfig cfg = default_analysis_config(testsupport::bundled());
    return cfg;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

long max_rss_kib() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

// Four-character label that never reaches the default token length.
std::string short_label(std::size_t i) {
    std::string s = "q";
    for (int k = 0; k < 3; ++k) {
        s += static_cast<char>('a' + i % 26);
        i /= 26;
    }
    return s;
}

// Goes through the file reader like `phishscope analyze` does, then through
// the JSON rendering so the checked values are the printed ones.
AnalysisReport analyze_feed(const std::vector<PhishRecord>& records, unsigned jobs = 2) {
    testsupport::TempDir dir;
    testsupport::write_feed(dir / "feed.csv", records);
    auto reader = load_csv(dir / "feed.csv");
    const auto counters = analyze(*reader, config(), jobs);
    check(reader->stats().records_ok == records.size(), "reader dropped rows");
    return report_from_json(render(finalize(counters), ReportFormat::Json));
}

const ReportTable& table(const AnalysisReport& r, const char* id) {
    const auto* t = r.table(id);
    check(t != nullptr, std::string("missing table ") + id);
    return *t;
}

using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

std::string show(const Rows& rows) {
    std::string s;
    for (const auto& row : rows) {
        s += "[";
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
        s += "]";
    }
    return s;
}

std::set<ObfuscationType> types(const UrlClassification& c) {
    std::set<ObfuscationType> out;
    for (const auto& d : c.detections) out.insert(d.type);
    return out;
}

std::string golden_urls() {
    using T = ObfuscationType;
    const auto start = Clock::now();
    const auto& cfg = config().detectors;
    auto run = [&](const char* url) { return classify(parse_url(url), cfg); };

    check(types(run("http://67.210.122.222/apple/login")) == std::set<T>{T::I}, "IP example");

    const auto t2 = run("https://recovery-confirm-paqe.cf/?facebook.com=chekpoint");
    check(types(t2) == std::set<T>{T::II, T::V}, "Type II example");
    check(t2.find(T::II)->score_inputs.at(std::string(score_key::kHeuristic)) == 1.0, "Type II not heuristic");

    check(types(run("https://nz1webapps7mpp3manage-my-papl-account.felixkot.biz/signin")) == std::set<T>{T::III, T::V},
          "long-subdomain example");

    const auto t4 = run("http://www.g0og1e.com");
    check(types(t4) == std::set<T>{T::IV}, "g0og1e example");
    check(t4.find(T::IV)->evidence == "google", "brand is " + t4.find(T::IV)->evidence);

    const auto t6 = run("https://www.xn--pple-43d.com/");
    check(types(t6) == std::set<T>{T::V, T::VI}, "xn--pple-43d example");
    check(t6.find(T::VI)->evidence.find("\xd0\xb0pple") != std::string::npos, "no U+0430 in " + t6.find(T::VI)->evidence);

    const double s = seconds_since(start);
    check(s < 1.0, "took " + std::to_string(s) + " s");
    return "5 URLs in " + std::to_string(static_cast<int>(s * 1000)) + " ms";
}

std::string table5_arithmetic() {
    std::vector<PhishRecord> corpus;
    for (std::size_t i = 0; i < 10078; ++i) {
        const char* path = i < 1328 ? "/login" : (i < 1328 + 508 ? "/account" : "/");
        corpus.push_back(record(static_cast<std::int64_t>(i + 1), "http://" + short_label(i) + ".co" + path));
    }
    const auto report = analyze_feed(corpus);
    const auto& t5 = table(report, "T5");
    const Rows expected = {{"login", "1328", "13.177"}, {"account", "508", "5.040"}};
    check(t5.rows == expected, "T5 rows " + show(t5.rows));
    return "login 13.177, account 5.040";
}

std::string table6_arithmetic() {
    const std::vector<std::array<int, 3>> years = {
        {2019, 1477, 3930}, {2018, 1543, 4068}, {2017, 182, 1249}, {2016, 16, 488}, {2015, 3, 233}};
    std::vector<PhishRecord> corpus;
    for (const auto& [year, https, total] : years) {
        for (int i = 0; i < total; ++i) {
            corpus.push_back(record(static_cast<std::int64_t>(corpus.size() + 1),
                                    std::string(i < https ? "https" : "http") + "://h.example.com/", year));
        }
    }
    const auto report = analyze_feed(corpus);
    const auto& t6 = table(report, "T6");
    const Rows expected = {{"2019", "1477", "3930", "37.58"},
                           {"2018", "1543", "4068", "37.93"},
                           {"2017", "182", "1249", "14.57"},
                           {"2016", "16", "488", "3.27"},
                           {"2015", "3", "233", "1.28"}};
    check(t6.rows == expected, "T6 rows " + show(t6.rows));
    return "37.58 / 37.93 / 14.57 / 3.27 / 1.28";
}

std::string table7_reproduction() {
    const std::vector<std::pair<int, int>> idn = {{2019, 12}, {2018, 8}, {2017, 1}, {2016, 1}, {2015, 0}};
    std::vector<PhishRecord> corpus;
    int made = 0;
    for (const auto& [year, count] : idn) {
        for (int i = 0; i < count; ++i, ++made) {
            const std::string host = made % 2 ? "www.xn--pple-43d.com" : "\xd0\xb0pple.com";
            corpus.push_back(record(static_cast<std::int64_t>(corpus.size() + 1), "http://" + host + "/", year));
        }
        for (int i = 0; i < 5; ++i) {
            corpus.push_back(record(static_cast<std::int64_t>(corpus.size() + 1), "http://plain.example.com/", year));
        }
    }
    check(made == 22, "fixture has " + std::to_string(made) + " IDN rows");
    const auto report = analyze_feed(corpus);
    const auto& t7 = table(report, "T7");
    const Rows expected = {{"2019", "12"}, {"2018", "8"}, {"2017", "1"}, {"2016", "1"}, {"2015", "0"}};
    check(t7.rows == expected, "T7 rows " + show(t7.rows));
    return "12, 8, 1, 1, 0";
}

std::string ip_forms() {
    std::mt19937 rng(1);
    std::uniform_int_distribution<std::uint32_t> dist;
    constexpr int kValues = 20000;
    int decimal_skipped = 0;
    for (int i = 0; i < kValues; ++i) {
        const std::uint32_t v = dist(rng);
        const std::string quad = std::to_string(v >> 24) + "." + std::to_string((v >> 16) & 255) + "." +
                                 std::to_string((v >> 8) & 255) + "." + std::to_string(v & 255);
        char hex[16];
        std::snprintf(hex, sizeof hex, i % 2 ? "0x%08X" : "0x%x", v);
        std::vector<std::string> forms = {quad, hex};
        // single small numbers read as names, see the README
        if (v >= 256) forms.push_back(std::to_string(v));
        else ++decimal_skipped;
        for (const auto& form : forms) {
            const auto d = detect_type1(parse_url("http://" + form + "/x"));
            check(d.has_value(), form + " not Type I");
            check(d->evidence == quad, form + " normalized to " + d->evidence);
            check(classify_host(form).normalized_ip == quad, form + " host normalization");
        }
    }
    return std::to_string(kValues) + " values, 3 renderings each" +
           (decimal_skipped ? " (" + std::to_string(decimal_skipped) + " below 256 without decimal form)" : "");
}

std::string punycode_conformance() {
    std::ifstream in(testsupport::fixture("rfc3492_vectors.txt"));
    std::string line;
    int vectors = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = line.find('\t', t1 + 1);
        std::u32string expected;
        std::istringstream cps(line.substr(t2 + 1));
        std::string hex;
        while (cps >> hex) expected += static_cast<char32_t>(std::stoul(hex, nullptr, 16));
        check(punycode_decode_raw(line.substr(t1 + 1, t2 - t1 - 1)) == expected, "vector " + line.substr(0, t1));
        ++vectors;
    }
    check(vectors == 19, "found " + std::to_string(vectors) + " vectors");

    std::mt19937 rng(2);
    const std::vector<std::pair<char32_t, char32_t>> ranges = {
        {'a', 'z'}, {'0', '9'}, {0xC0, 0x24F}, {0x370, 0x3FF}, {0x400, 0x4FF}, {0x4E00, 0x9FFF}, {0xAC00, 0xD7A3},
        {0x1F300, 0x1F5FF}};
    constexpr int kLabels = 5000;
    for (int i = 0; i < kLabels; ++i) {
        std::u32string label;
        const std::size_t len = 1 + rng() % 20;
        for (std::size_t k = 0; k < len; ++k) {
            const auto& [lo, hi] = ranges[rng() % ranges.size()];
            label += static_cast<char32_t>(lo + rng() % (hi - lo + 1));
        }
        const std::string encoded = enc::encode(label);
        check(punycode_decode_raw(encoded) == label, "round trip of " + encoded);
        check(decode_punycode("xn--" + encoded) == to_utf8(label), "label decode of xn--" + encoded);
    }
    return "19 vectors, " + std::to_string(kLabels) + " round trips";
}

std::vector<PhishRecord> random_corpus(std::mt19937& rng, std::size_t n) {
    static const std::vector<std::string> hosts = {
        "67.210.122.222", "0x43D27ADE", "www.g0og1e.com", "paypa1-secure.net", "www.xn--pple-43d.com",
        "nz1webapps7mpp3manage-my-papl-account.felixkot.biz", "example.co.uk", "\xd0\xb0pple.com", "[::1]",
        "recovery-confirm-paqe.cf"};
    static const std::vector<std::string> tails = {"/", "/login", "/?facebook.com=x", "/account/update;s=1?q#f",
                                                   "/signin/verify", ""};
    static const std::vector<std::string> targets = {"Other", "PayPal", "Apple", "Facebook"};
    std::vector<PhishRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string url = std::string(rng() % 3 ? "http" : "https") + "://" + hosts[rng() % hosts.size()] +
                          tails[rng() % tails.size()];
        if (rng() % 20 == 0) url = "not a url " + std::to_string(i);
        out.push_back(record(static_cast<std::int64_t>(i + 1), std::move(url), 2015 + static_cast<int>(rng() % 5),
                             targets[rng() % targets.size()]));
    }
    return out;
}

std::string aggregation_laws() {
    std::mt19937 rng(3);
    const auto& cfg = config();
    auto sequential = [&](const std::vector<PhishRecord>& records) {
        FeatureCounters c(cfg);
        for (const auto& r : records) observe(c, cfg, r);
        return c;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto corpus = random_corpus(rng, 50 + rng() % 300);
        const auto whole = sequential(corpus);

        // random partition into up to 8 parts, each counted on its own thread
        const std::size_t parts = 1 + rng() % 8;
        std::vector<std::vector<PhishRecord>> split(parts);
        for (const auto& r : corpus) split[rng() % parts].push_back(r);
        std::vector<FeatureCounters> partial(parts);
        std::vector<std::thread> threads;
        for (std::size_t p = 0; p < parts; ++p) {
            threads.emplace_back([&, p] { partial[p] = sequential(split[p]); });
        }
        for (auto& t : threads) t.join();
        std::shuffle(partial.begin(), partial.end(), rng);
        FeatureCounters merged(cfg);
        for (const auto& p : partial) merged = merge(std::move(merged), p);
        check(merged == whole, "partition merge differs in trial " + std::to_string(trial));

        VectorSource pooled(corpus);
        check(analyze(pooled, cfg, 1 + rng() % 6) == whole, "worker pool differs in trial " + std::to_string(trial));

        auto shuffled = corpus;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (auto f : {ReportFormat::Json, ReportFormat::Csv, ReportFormat::Markdown}) {
            check(render(finalize(sequential(shuffled)), f) == render(finalize(whole), f),
                  "permutation changes report in trial " + std::to_string(trial));
        }
    }
    return "100 partitions, 100 permutations";
}

std::string tokenizer_laws() {
    std::mt19937 rng(4);
    const std::string alphabet = "abcXYZ019/._-?=&#:%@~;login";
    std::size_t urls = 0;
    for (std::size_t min_len : {1u, 3u, 5u, 8u}) {
        for (int i = 0; i < 5000; ++i, ++urls) {
            std::string url;
            const std::size_t len = rng() % 80;
            for (std::size_t k = 0; k < len; ++k) url += alphabet[rng() % alphabet.size()];
            if (i % 7 == 0) url += "\xd0\xb0\xff";
            const auto tokens = extract_tokens(url, min_len);
            check(std::set<std::string>(tokens.begin(), tokens.end()).size() == tokens.size(), "duplicate token");
            for (const auto& t : tokens) {
                check(t.size() >= min_len, "short token " + t);
                check(std::all_of(t.begin(), t.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }),
                      "token not lowercase alphanumeric: " + t);
            }
        }
    }
    const std::vector<std::string> adversarial = {
        "http://h.co/login/login", "http://h.co/LOGIN/login?login=login#Login", "http://login.login.co/login/login",
        "http://h.co/login//login;login"};
    TokenTally tally;
    for (const auto& url : adversarial) {
        const auto tokens = extract_tokens(url);
        check(std::count(tokens.begin(), tokens.end(), "login") == 1, "login repeated for " + url);
        tally.add(tokens);
    }
    check(tally.counts().at("login") == adversarial.size(), "login counted more than once per URL");
    check(word_presence(adversarial, parse_wordlist("login\n", "w"))[0].ratio.count == adversarial.size(),
          "word presence counted more than once per URL");
    return std::to_string(urls) + " random URLs, " + std::to_string(adversarial.size()) + " repeat fixtures";
}

std::string robustness() {
    std::mt19937 rng(5);
    std::mt19937_64 bytes(5);
    constexpr int kInputs = 100000;
    int parsed = 0;
    for (int i = 0; i < kInputs; ++i) {
        std::string raw = testsupport::random_bytes(bytes, 64);
        if (i % 2) raw = (i % 4 == 1 ? "http://" : "https://[") + raw;
        try {
            parse_url(raw);
            ++parsed;
        } catch (const UrlError&) {
        }
    }

    // valid rows with byte-level damage, fed through the reader in 110 files
    const std::string header = [] {
        std::ostringstream s;
        write_feed_csv(s, {});
        return s.str();
    }();
    const std::string noise = ",\"\n\r\xff\xc3x0T:-";
    std::uint64_t rows = 0, ok = 0;
    for (int file = 0; file < 110; ++file) {
        std::ostringstream body;
        write_feed_csv(body, random_corpus(rng, 1000));
        std::string text = body.str().substr(header.size());
        const std::size_t edits = 1 + rng() % 400;
        for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
            const std::size_t at = rng() % text.size();
            switch (rng() % 3) {
                case 0: text[at] = noise[rng() % noise.size()]; break;
                case 1: text.insert(at, 1, noise[rng() % noise.size()]); break;
                default: text.erase(at, 1 + rng() % 12);
            }
        }
        std::istringstream in(header + text);
        FeedReader reader(in);
        while (auto r = reader.next()) check(!r->url.empty(), "empty URL loaded");
        check(reader.stats().conserved(), "conservation broken in file " + std::to_string(file));
        rows += reader.stats().rows_read;
        ok += reader.stats().records_ok;
    }
    check(rows >= 100000, "only " + std::to_string(rows) + " rows read");
    return std::to_string(kInputs) + " parser inputs (" + std::to_string(parsed) + " parsed), " +
           std::to_string(rows) + " fuzzed rows (" + std::to_string(ok) + " loaded)";
}

std::string throughput() {
    constexpr std::size_t kRows = 1000000;
    testsupport::TempDir dir;
    const auto path = dir / "big.csv";
    {
        std::ofstream out(path, std::ios::binary);
        std::mt19937 rng(6);
        const std::size_t chunk = 10000;
        for (std::size_t start = 0; start < kRows; start += chunk) {
            auto records = random_corpus(rng, chunk);
            for (std::size_t i = 0; i < records.size(); ++i) {
                records[i].phish_id = static_cast<std::int64_t>(start + i + 1);
                records[i].url += "/" + short_label(rng() % 5000);
            }
            std::ostringstream s;
            write_feed_csv(s, records);
            const std::string text = s.str();
            out << (start == 0 ? text : text.substr(text.find('\n') + 1));
        }
    }
    const long rss_before = max_rss_kib();
    const auto start = Clock::now();
    auto reader = load_csv(path);
    const auto counters = analyze(*reader, config(), 2);
    const auto report = render(finalize(counters), ReportFormat::Json);
    const double s = seconds_since(start);
    const long peak_mib = max_rss_kib() / 1024;
    const long growth_mib = peak_mib - rss_before / 1024;

    check(counters.total_urls == kRows, "analyzed " + std::to_string(counters.total_urls) + " rows");
    check(s < 300.0, "took " + std::to_string(s) + " s");
    check(peak_mib < 512, "peak RSS " + std::to_string(peak_mib) + " MiB");
    return std::to_string(kRows) + " rows in " + std::to_string(static_cast<int>(s)) + " s, peak RSS " + std::to_string(peak_mib) +
           " MiB (+" + std::to_string(growth_mib) + " during analysis), file " +
           std::to_string(std::filesystem::file_size(path) / (1024 * 1024)) + " MiB";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<std::string()>>> criteria = {
        {"golden URL suite", golden_urls},
        {"T5 token percentages", table5_arithmetic},
        {"T6 HTTPS percentages", table6_arithmetic},
        {"T7 IDN counts", table7_reproduction},
        {"IP form equivalence", ip_forms},
        {"punycode conformance", punycode_conformance},
        {"aggregation laws", aggregation_laws},
        {"tokenizer laws", tokenizer_laws},
        {"robustness fuzzing", robustness},
        {"million-row throughput", throughput},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, run] = criteria[i];
        std::string detail;
        bool ok = false;
        try {
            detail = run();
            ok = true;
        } catch (const Failed& f) {
            detail = f.why;
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        failures += !ok;
        std::printf("criterion %2zu %s: %s (%s)\n", i + 1, ok ? "PASS" : "FAIL", name, detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
