#include "phishscope/pipeline.hpp"

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <thread>

#ifndef PHISHSCOPE_DEFAULT_DATA_DIR
#define PHISHSCOPE_DEFAULT_DATA_DIR "data"
#endif

namespace phishscope {

void observe(FeatureCounters& counters, const AnalysisConfig& cfg, const PhishRecord& record) {
    const TokenSet tokens = extract_tokens(record.url, cfg.min_token_len);
    std::optional<ParsedUrl> url;
    try {
        url = parse_url(record.url);
    } catch (const UrlError&) {
        accumulate(counters, record, nullptr, tokens);
        return;
    }
    const auto classification = classify(*url, cfg.detectors, record.target);
    accumulate(counters, record, &classification, tokens);
}

namespace {

// Bounded hand-off of record batches from the reading thread to workers.
class BatchQueue {
public:
    explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(std::vector<PhishRecord> batch) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return queue_.size() < capacity_; });
        queue_.push_back(std::move(batch));
        not_empty_.notify_one();
    }

    bool pop(std::vector<PhishRecord>& batch) {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !queue_.empty() || closed_; });
        if (queue_.empty()) return false;
        batch = std::move(queue_.front());
        queue_.pop_front();
        not_full_.notify_one();
        return true;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<std::vector<PhishRecord>> queue_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
};

}  // namespace

FeatureCounters analyze(RecordSource& source, const AnalysisConfig& cfg, unsigned jobs) {
    FeatureCounters total(cfg);
    if (jobs <= 1) {
        while (auto record = source.next()) observe(total, cfg, *record);
        return total;
    }

    constexpr std::size_t kBatch = 2048;
    BatchQueue queue(static_cast<std::size_t>(jobs) * 2);
    std::vector<FeatureCounters> partials(jobs, FeatureCounters(cfg));
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            std::vector<PhishRecord> batch;
            while (queue.pop(batch)) {
                if (errors[w]) continue;
                try {
                    for (const auto& r : batch) observe(partials[w], cfg, r);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            }
        });
    }

    std::exception_ptr read_error;
    try {
        std::vector<PhishRecord> batch;
        batch.reserve(kBatch);
        while (auto record = source.next()) {
            batch.push_back(*std::move(record));
            if (batch.size() == kBatch) {
                queue.push(std::move(batch));
                batch = {};
                batch.reserve(kBatch);
            }
        }
        if (!batch.empty()) queue.push(std::move(batch));
    } catch (...) {
        read_error = std::current_exception();
    }
    queue.close();
    for (auto& t : workers) t.join();

    if (read_error) std::rethrow_exception(read_error);
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (const auto& p : partials) total.merge(p);
    return total;
}

BundledData BundledData::locate() {
    if (const char* env = std::getenv("PHISHSCOPE_DATA_DIR"); env && *env) return BundledData{env};
    return BundledData{PHISHSCOPE_DEFAULT_DATA_DIR};
}

std::vector<std::filesystem::path> BundledData::wordlists() const {
    return {dir / "wordlists" / "garera2007.txt", dir / "wordlists" / "le2011.txt",
            dir / "wordlists" / "phishtank2019.txt"};
}

AnalysisConfig default_analysis_config(const BundledData& data) {
    AnalysisConfig cfg;
    cfg.detectors.suffixes = std::make_shared<const PublicSuffixSnapshot>(PublicSuffixSnapshot::load(data.public_suffixes()));
    cfg.detectors.brand_list = load_brand_list(data.brands());
    for (const auto& path : data.wordlists()) cfg.wordlists.push_back(load_wordlist(path));
    return cfg;
}

}  // namespace phishscope
