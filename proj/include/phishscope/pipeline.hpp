#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "phishscope/dataset.hpp"
#include "phishscope/report.hpp"

namespace phishscope {

/// Parses, classifies and tokenises one record, then folds it into the
/// counters. The feed's target field is passed to Type II as the hint.
void observe(FeatureCounters& counters, const AnalysisConfig& cfg, const PhishRecord& record);

/// Drains `source` into fresh counters using `jobs` workers. Each worker
/// owns private counters that are merged at the end, so the result does not
/// depend on `jobs`.
FeatureCounters analyze(RecordSource& source, const AnalysisConfig& cfg, unsigned jobs = 1);

/// Locations of the data files shipped with the tool.
struct BundledData {
    std::filesystem::path dir;

    /// `PHISHSCOPE_DATA_DIR` if set, otherwise the directory baked in at
    /// build time.
    static BundledData locate();

    std::filesystem::path public_suffixes() const { return dir / "public_suffix_list.dat"; }
    std::filesystem::path brands() const { return dir / "brands.txt"; }
    std::vector<std::filesystem::path> wordlists() const;
};

/// Detector and word-list config loaded from the bundled data.
AnalysisConfig default_analysis_config(const BundledData& data = BundledData::locate());

}  // namespace phishscope
