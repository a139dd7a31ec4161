#include "phishscope/detectors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phishscope/punycode.hpp"
#include "phishscope/text.hpp"

namespace phishscope {

std::string_view to_string(ObfuscationType t) {
    switch (t) {
        case ObfuscationType::I: return "I";
        case ObfuscationType::II: return "II";
        case ObfuscationType::III: return "III";
        case ObfuscationType::IV: return "IV";
        case ObfuscationType::V: return "V";
        case ObfuscationType::VI: return "VI";
    }
    return "?";
}

std::optional<ObfuscationType> parse_obfuscation_type(std::string_view text) {
    for (auto t : kAllTypes) {
        if (iequals(text, to_string(t))) return t;
    }
    return std::nullopt;
}

std::string_view to_string(Type2Mode mode) {
    switch (mode) {
        case Type2Mode::Metadata: return "metadata";
        case Type2Mode::Heuristic: return "heuristic";
        case Type2Mode::Both: return "both";
    }
    return "?";
}

std::optional<Type2Mode> parse_type2_mode(std::string_view text) {
    for (auto m : {Type2Mode::Metadata, Type2Mode::Heuristic, Type2Mode::Both}) {
        if (iequals(text, to_string(m))) return m;
    }
    return std::nullopt;
}

void DetectorConfig::validate() const {
    if (type3_length_threshold < 1) {
        throw std::invalid_argument("type3 length threshold must be at least 1");
    }
    for (const auto& brand : brand_list) {
        if (brand.empty()) throw std::invalid_argument("empty brand in brand list");
        for (char c : brand) {
            if (static_cast<unsigned char>(c) >= 0x80 || ascii_lower(c) != c) {
                throw std::invalid_argument("brand '" + brand + "' is not lowercase ASCII");
            }
        }
    }
}

std::string DetectorConfig::digest() const {
    std::uint64_t brands = 14695981039346656037ull;
    for (const auto& b : brand_list) {
        for (char c : b) brands = (brands ^ static_cast<unsigned char>(c)) * 1099511628211ull;
        brands = (brands ^ '\n') * 1099511628211ull;
    }
    std::ostringstream out;
    out << "t3=" << type3_length_threshold << ";delims=" << type3_delimiters
        << ";t4=" << type4_max_edit_distance << ";brands=" << std::hex << brands
        << ";psl=" << (suffixes ? suffixes->fingerprint() : 0) << std::dec
        << ";t2=" << to_string(type2_mode) << ";enabled=";
    for (bool e : enabled) out << (e ? '1' : '0');
    return out.str();
}

std::vector<std::string> parse_brand_list(std::string_view text) {
    std::vector<std::string> brands;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto view = trim(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = trim(view.substr(0, hash));
        if (view.empty()) continue;
        std::string brand(view);
        if (std::find(brands.begin(), brands.end(), brand) == brands.end()) brands.push_back(std::move(brand));
    }
    return brands;
}

std::vector<std::string> load_brand_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read brand list " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_brand_list(buffer.str());
}

bool UrlClassification::has(ObfuscationType t) const { return find(t) != nullptr; }

const Detection* UrlClassification::find(ObfuscationType t) const {
    for (const auto& d : detections) {
        if (d.type == t) return &d;
    }
    return nullptr;
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::size_t> prev2(m + 1), prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
                cur[j] = std::min(cur[j], prev2[j - 2] + 1);
            }
        }
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[m];
}

std::string leet_normalize(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        switch (c) {
            case '0': c = 'o'; break;
            case '1': c = 'l'; break;
            case '3': c = 'e'; break;
            case '5': c = 's'; break;
            case '9': c = 'g'; break;
            case '@': c = 'a'; break;
            default: break;
        }
    }
    return out;
}

std::optional<std::string_view> target_hint_from(std::string_view target) {
    target = trim(target);
    if (target.empty() || iequals(target, "other")) return std::nullopt;
    return target;
}

namespace {

std::string strip_trailing_dot(std::string_view host) {
    if (!host.empty() && host.back() == '.') host.remove_suffix(1);
    return std::string(host);
}

std::optional<DomainSplit> split_of(const ParsedUrl& url, const DetectorConfig& cfg) {
    if (!cfg.suffixes) return std::nullopt;
    return try_split_domain(url.host, *cfg.suffixes);
}

// The unit an attacker registered: the registrable domain when the suffix
// list knows the TLD, otherwise the whole host.
std::string own_registrable(const ParsedUrl& url, const DetectorConfig& cfg) {
    if (auto split = split_of(url, cfg)) return split->registrable;
    return strip_trailing_dot(url.host);
}

bool is_domain_token_char(char c) { return is_ascii_alnum(c) || c == '-' || c == '.'; }

// Last labels that are far more often file extensions than TLDs in paths.
bool looks_like_file_extension(std::string_view label) {
    static constexpr std::string_view kExtensions[] = {
        "php", "html", "htm", "asp", "aspx", "jsp", "cgi", "pl", "py", "sh", "js", "css",
        "exe", "png", "jpg", "jpeg", "gif", "pdf", "txt", "xml", "json", "zip", "mov",
    };
    return std::find(std::begin(kExtensions), std::end(kExtensions), label) != std::end(kExtensions);
}

std::optional<std::string> find_embedded_domain(std::string_view text, const PublicSuffixSnapshot& suffixes,
                                                std::string_view own) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_domain_token_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_domain_token_char(text[j])) ++j;
        std::string_view token = text.substr(i, j - i);
        i = j;

        while (!token.empty() && (token.front() == '.' || token.front() == '-')) token.remove_prefix(1);
        while (!token.empty() && (token.back() == '.' || token.back() == '-')) token.remove_suffix(1);
        if (token.find('.') == std::string_view::npos || token.find("..") != std::string_view::npos) continue;

        const std::string lowered = ascii_lower(token);
        const std::string_view tld = std::string_view(lowered).substr(lowered.rfind('.') + 1);
        if (std::all_of(tld.begin(), tld.end(), is_ascii_digit) || looks_like_file_extension(tld)) continue;

        const auto split = try_split_domain(lowered, suffixes);
        if (!split || split->registrable == own) continue;
        return lowered;
    }
    return std::nullopt;
}

// First alphanumeric word of the feed's target, e.g. "PayPal Inc." -> "paypal".
std::string brand_token(std::string_view target) {
    std::string token;
    for (char c : target) {
        if (is_ascii_alnum(c)) {
            token.push_back(ascii_lower(c));
        } else if (!token.empty()) {
            break;
        }
    }
    return token;
}

}  // namespace

std::optional<Detection> detect_type1(const ParsedUrl& url) {
    const HostKind kind = classify_host(url.host);
    if (!kind.is_ipv4()) return std::nullopt;
    Detection d{ObfuscationType::I, *kind.normalized_ip, {}};
    d.score_inputs.emplace(score_key::kIpValue, static_cast<double>(*kind.ipv4_value));
    return d;
}

std::optional<Detection> detect_type2(const ParsedUrl& url, const DetectorConfig& cfg,
                                      std::optional<std::string_view> target_hint) {
    const std::string own = own_registrable(url, cfg);

    bool metadata = false;
    std::string metadata_evidence;
    if (cfg.type2_mode != Type2Mode::Heuristic && target_hint) {
        if (auto hint = target_hint_from(*target_hint)) {
            const std::string token = brand_token(*hint);
            std::string squashed;
            for (char c : own) {
                if (is_ascii_alnum(c)) squashed.push_back(c);
            }
            if (!token.empty() && squashed.find(token) == std::string::npos) {
                metadata = true;
                metadata_evidence = "target:" + std::string(*hint);
            }
        }
    }

    std::optional<std::string> embedded;
    if (cfg.type2_mode != Type2Mode::Metadata && cfg.suffixes) {
        for (const std::string* part : {&url.path, &url.params, &url.query}) {
            embedded = find_embedded_domain(*part, *cfg.suffixes, own);
            if (embedded) break;
        }
    }

    if (!metadata && !embedded) return std::nullopt;
    Detection d{ObfuscationType::II, embedded ? *embedded : metadata_evidence, {}};
    d.score_inputs.emplace(score_key::kMetadata, metadata ? 1.0 : 0.0);
    d.score_inputs.emplace(score_key::kHeuristic, embedded ? 1.0 : 0.0);
    return d;
}

std::optional<Detection> detect_type3(const ParsedUrl& url, const DetectorConfig& cfg) {
    if (classify_host(url.host).is_ip()) return std::nullopt;
    const auto split = split_of(url, cfg);
    if (!split || split->subdomain.empty()) return std::nullopt;

    const std::size_t extra = extra_hostname_length(*split);
    if (extra < cfg.type3_length_threshold) return std::nullopt;

    const std::string& sub = split->subdomain;
    bool separated = false;
    for (std::size_t i = 1; i + 1 < sub.size() && !separated; ++i) {
        separated = cfg.type3_delimiters.find(sub[i]) != std::string::npos && is_ascii_alnum(sub[i - 1]) &&
                    is_ascii_alnum(sub[i + 1]);
    }
    if (!separated) return std::nullopt;

    Detection d{ObfuscationType::III, sub, {}};
    d.score_inputs.emplace(score_key::kExtraLength, static_cast<double>(extra));
    return d;
}

std::optional<Detection> detect_type4(const ParsedUrl& url, const DetectorConfig& cfg) {
    if (cfg.brand_list.empty()) return std::nullopt;
    if (classify_host(url.host).kind != HostKindTag::RegisteredName) return std::nullopt;

    const std::string registrable = own_registrable(url, cfg);
    const std::string label = registrable.substr(0, registrable.find('.'));

    // The whole label plus its hyphen/underscore separated words.
    std::vector<std::string> candidates{label};
    std::string word;
    for (char c : label + "-") {
        if (c == '-' || c == '_') {
            if (!word.empty() && word != label) candidates.push_back(word);
            word.clear();
        } else {
            word.push_back(c);
        }
    }

    std::optional<std::size_t> best_distance;
    const std::string* best_brand = nullptr;
    for (const auto& brand : cfg.brand_list) {
        for (const auto& candidate : candidates) {
            if (candidate == brand) continue;
            const std::size_t dist = damerau_levenshtein(leet_normalize(candidate), brand);
            if (dist > cfg.type4_max_edit_distance) continue;
            if (!best_distance || dist < *best_distance) {
                best_distance = dist;
                best_brand = &brand;
            }
        }
    }
    if (!best_brand) return std::nullopt;
    Detection d{ObfuscationType::IV, *best_brand, {}};
    d.score_inputs.emplace(score_key::kEditDistance, static_cast<double>(*best_distance));
    return d;
}

std::optional<Detection> detect_type5(const ParsedUrl& url) {
    if (!iequals(url.scheme, "https")) return std::nullopt;
    return Detection{ObfuscationType::V, "scheme https", {}};
}

std::optional<Detection> detect_type6(const ParsedUrl& url) {
    std::size_t idn_labels = 0;
    std::size_t start = 0;
    while (true) {
        const auto dot = url.host.find('.', start);
        const std::string_view label =
            std::string_view(url.host).substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (istarts_with(label, "xn--") || has_non_ascii(label)) ++idn_labels;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (idn_labels == 0) return std::nullopt;

    Detection d{ObfuscationType::VI, decode_idn_host(url.host), {}};
    d.score_inputs.emplace(score_key::kIdnLabels, static_cast<double>(idn_labels));
    d.score_inputs.emplace(score_key::kNonAsciiHost, has_non_ascii(url.host) ? 1.0 : 0.0);
    return d;
}

UrlClassification classify(const ParsedUrl& url, const DetectorConfig& cfg,
                           std::optional<std::string_view> target_hint) {
    UrlClassification result;
    result.url = url;
    result.host = classify_host(url.host);
    if (!result.host.is_ip()) result.split = split_of(url, cfg);

    auto run = [&](ObfuscationType type, auto&& detector) {
        if (!cfg.enabled[index_of(type)]) return;
        try {
            if (auto d = detector()) result.detections.push_back(*std::move(d));
        } catch (const std::exception& e) {
            result.diagnostics.push_back("type " + std::string(to_string(type)) + ": " + e.what());
        }
    };
    run(ObfuscationType::I, [&] { return detect_type1(url); });
    run(ObfuscationType::II, [&] { return detect_type2(url, cfg, target_hint); });
    run(ObfuscationType::III, [&] { return detect_type3(url, cfg); });
    run(ObfuscationType::IV, [&] { return detect_type4(url, cfg); });
    run(ObfuscationType::V, [&] { return detect_type5(url); });
    run(ObfuscationType::VI, [&] { return detect_type6(url); });
    return result;
}

}  // namespace phishscope
