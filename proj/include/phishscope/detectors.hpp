#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishscope/host.hpp"
#include "phishscope/public_suffix.hpp"
#include "phishscope/url.hpp"

namespace phishscope {

/// Obfuscation techniques. I–IV are the classic hostname tricks; V is the
/// https scheme used as a false trust signal; VI is an internationalised
/// (IDN) host.
enum class ObfuscationType { I = 0, II, III, IV, V, VI };

inline constexpr std::array<ObfuscationType, 6> kAllTypes = {
    ObfuscationType::I,  ObfuscationType::II, ObfuscationType::III,
    ObfuscationType::IV, ObfuscationType::V,  ObfuscationType::VI,
};

std::string_view to_string(ObfuscationType t);
std::optional<ObfuscationType> parse_obfuscation_type(std::string_view text);
constexpr std::size_t index_of(ObfuscationType t) { return static_cast<std::size_t>(t); }

// score_inputs keys. Each type only ever uses the keys listed beside it.
namespace score_key {
inline constexpr std::string_view kIpValue = "ip_value";            // I
inline constexpr std::string_view kMetadata = "metadata";           // II: 1 when the feed target fired
inline constexpr std::string_view kHeuristic = "heuristic";         // II: 1 when an embedded domain fired
inline constexpr std::string_view kExtraLength = "extra_length";    // III
inline constexpr std::string_view kEditDistance = "edit_distance";  // IV
inline constexpr std::string_view kIdnLabels = "idn_labels";        // VI
inline constexpr std::string_view kNonAsciiHost = "non_ascii";      // VI
}  // namespace score_key

struct Detection {
    ObfuscationType type = ObfuscationType::I;
    std::string evidence;
    std::map<std::string, double, std::less<>> score_inputs;

    friend bool operator==(const Detection&, const Detection&) = default;
};

enum class Type2Mode { Metadata, Heuristic, Both };

std::string_view to_string(Type2Mode mode);
std::optional<Type2Mode> parse_type2_mode(std::string_view text);

struct DetectorConfig {
    std::size_t type3_length_threshold = 15;
    std::string type3_delimiters = "-_=?%";
    std::size_t type4_max_edit_distance = 2;
    std::vector<std::string> brand_list;
    std::shared_ptr<const PublicSuffixSnapshot> suffixes;
    Type2Mode type2_mode = Type2Mode::Both;
    std::array<bool, 6> enabled = {true, true, true, true, true, true};

    /// Throws std::invalid_argument when an invariant does not hold.
    void validate() const;

    /// Stable text fingerprint of every setting that affects detection.
    std::string digest() const;
};

/// Reads a brand list: one lowercase brand per line, `#` comments.
std::vector<std::string> load_brand_list(const std::filesystem::path& path);
std::vector<std::string> parse_brand_list(std::string_view text);

struct UrlClassification {
    ParsedUrl url;
    HostKind host;
    std::optional<DomainSplit> split;
    std::vector<Detection> detections;  // ordered by type, at most one per type
    std::vector<std::string> diagnostics;

    bool has(ObfuscationType t) const;
    const Detection* find(ObfuscationType t) const;
};

std::optional<Detection> detect_type1(const ParsedUrl& url);
std::optional<Detection> detect_type2(const ParsedUrl& url, const DetectorConfig& cfg,
                                      std::optional<std::string_view> target_hint);
std::optional<Detection> detect_type3(const ParsedUrl& url, const DetectorConfig& cfg);
std::optional<Detection> detect_type4(const ParsedUrl& url, const DetectorConfig& cfg);
std::optional<Detection> detect_type5(const ParsedUrl& url);
std::optional<Detection> detect_type6(const ParsedUrl& url);

/// Runs every enabled detector. A detector that throws is reported in
/// `diagnostics` and counted as not firing.
UrlClassification classify(const ParsedUrl& url, const DetectorConfig& cfg,
                           std::optional<std::string_view> target_hint = std::nullopt);

/// Optimal-string-alignment distance: insert, delete, substitute and
/// transpose adjacent characters, each at cost 1.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

/// Undoes the fixed digit/symbol substitutions 0→o 1→l 3→e 5→s 9→g @→a.
std::string leet_normalize(std::string_view s);

/// The feed's target field with "Other" (and blanks) mapped to no hint.
std::optional<std::string_view> target_hint_from(std::string_view target);

}  // namespace phishscope
