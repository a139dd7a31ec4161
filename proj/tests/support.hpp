#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phishscope/dataset.hpp"
#include "phishscope/pipeline.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(PHISHSCOPE_FIXTURES) / name; }

inline phishscope::BundledData bundled() { return phishscope::BundledData{PHISHSCOPE_DATA}; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Long division, digit by digit, truncating after `decimals` places.
inline std::string percent_oracle(std::uint64_t count, std::uint64_t total, unsigned decimals) {
    if (total == 0) count = 0, total = 1;
    std::uint64_t whole = count * 100 / total;
    std::uint64_t rem = count * 100 % total;
    std::string s = std::to_string(whole);
    if (decimals) s += '.';
    for (unsigned i = 0; i < decimals; ++i) {
        rem *= 10;
        s += static_cast<char>('0' + rem / total);
        rem %= total;
    }
    return s;
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("phishscope-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline phishscope::PhishRecord record(std::int64_t id, std::string url, int year = 2019, std::string target = "Other",
                                      bool verified = true, bool online = true) {
    phishscope::PhishRecord r;
    r.phish_id = id;
    r.url = std::move(url);
    r.detail_url = "http://www.phishtank.com/phish_detail.php?phish_id=" + std::to_string(id);
    r.submission_time = phishscope::Timestamp{year, 3, 14, 12, 0, 0, 0};
    r.verified = verified;
    if (verified) r.verification_time = phishscope::Timestamp{year, 3, 14, 13, 0, 0, 0};
    r.online = online;
    r.target = std::move(target);
    return r;
}

inline void write_feed(const std::filesystem::path& p, const std::vector<phishscope::PhishRecord>& records) {
    std::ofstream out(p, std::ios::binary);
    phishscope::write_feed_csv(out, records);
}

inline std::string random_bytes(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> byte(0, 255);
    std::string s(len(rng), '\0');
    for (auto& c : s) c = static_cast<char>(byte(rng));
    return s;
}

}  // namespace testsupport
