#include "phishscope/public_suffix.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "phishscope/punycode.hpp"
#include "phishscope/text.hpp"

namespace phishscope {

NoSuffixMatch::NoSuffixMatch(std::string_view host)
    : std::runtime_error("no public suffix matches host '" + std::string(host) + "'") {}

void PublicSuffixSnapshot::add_rule(std::string_view rule) {
    for (char c : rule) {
        fingerprint_ = (fingerprint_ ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    }
    fingerprint_ = (fingerprint_ ^ '\n') * 1099511628211ull;
    if (rule.starts_with("!")) {
        rules_[ascii_lower(rule.substr(1))].exception = true;
    } else if (rule.starts_with("*.")) {
        rules_[ascii_lower(rule.substr(2))].wildcard = true;
    } else {
        rules_[ascii_lower(rule)].normal = true;
    }
}

PublicSuffixSnapshot PublicSuffixSnapshot::parse(std::istream& in) {
    PublicSuffixSnapshot snapshot;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty() || view.starts_with("//")) continue;
        const auto ws = view.find_first_of(" \t");
        if (ws != std::string_view::npos) view = view.substr(0, ws);
        snapshot.add_rule(view);
    }
    return snapshot;
}

PublicSuffixSnapshot PublicSuffixSnapshot::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

PublicSuffixSnapshot PublicSuffixSnapshot::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read public suffix file " + path.string());
    return parse(in);
}

namespace {

std::vector<std::string_view> labels_of(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (true) {
        const auto dot = host.find('.', start);
        labels.push_back(host.substr(start, dot == std::string_view::npos ? host.npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return labels;
}

}  // namespace

std::optional<std::size_t> PublicSuffixSnapshot::suffix_label_count(std::string_view host) const {
    if (host.empty()) return std::nullopt;
    const auto labels = labels_of(host);
    for (auto label : labels) {
        if (label.empty()) return std::nullopt;
    }

    // Rules in the list are written in Unicode, hosts usually in punycode:
    // look each suffix up in both spellings.
    std::vector<std::string> decoded;
    decoded.reserve(labels.size());
    bool any_idn = false;
    for (auto label : labels) {
        if (istarts_with(label, "xn--")) {
            try {
                decoded.push_back(decode_punycode(label));
                any_idn = true;
                continue;
            } catch (const InvalidPunycode&) {
            }
        }
        decoded.emplace_back(label);
    }

    const RuleFlags none;
    auto lookup = [&](const std::string& key) -> const RuleFlags& {
        const auto it = rules_.find(key);
        return it == rules_.end() ? none : it->second;
    };

    const std::size_t n = labels.size();
    std::size_t match = 0;
    std::string raw_suffix;
    std::string decoded_suffix;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t idx = n - k;
        raw_suffix = k == 1 ? std::string(labels[idx]) : std::string(labels[idx]) + "." + raw_suffix;
        decoded_suffix = k == 1 ? decoded[idx] : decoded[idx] + "." + decoded_suffix;

        RuleFlags flags = lookup(raw_suffix);
        if (any_idn) {
            const RuleFlags& alt = lookup(decoded_suffix);
            flags.normal |= alt.normal;
            flags.wildcard |= alt.wildcard;
            flags.exception |= alt.exception;
        }
        if (flags.exception) return k - 1;
        if (flags.normal) match = k;
        if (flags.wildcard && k < n) match = k + 1;
    }
    if (match == 0) return std::nullopt;
    return match;
}

std::optional<DomainSplit> try_split_domain(std::string_view host_in, const PublicSuffixSnapshot& suffixes) {
    std::string host = ascii_lower(host_in);
    if (!host.empty() && host.back() == '.') host.pop_back();
    const auto count = suffixes.suffix_label_count(host);
    if (!count || *count == 0) return std::nullopt;

    // Walk `count` dots from the right to find the suffix, then one more
    // label for the registrable domain.
    std::size_t suffix_start = host.size();
    for (std::size_t i = 0; i < *count; ++i) {
        const auto dot = host.rfind('.', suffix_start == 0 ? 0 : suffix_start - 1);
        if (dot == std::string::npos || suffix_start == 0) return std::nullopt;
        suffix_start = dot;
    }
    // suffix_start points at the dot before the suffix.
    const std::size_t reg_dot = suffix_start == 0 ? std::string::npos : host.rfind('.', suffix_start - 1);
    DomainSplit split;
    split.public_suffix = host.substr(suffix_start + 1);
    if (reg_dot == std::string::npos) {
        split.registrable = host;
    } else {
        split.registrable = host.substr(reg_dot + 1);
        split.subdomain = host.substr(0, reg_dot);
    }
    return split;
}

DomainSplit split_domain(std::string_view host, const PublicSuffixSnapshot& suffixes) {
    if (auto split = try_split_domain(host, suffixes)) return *std::move(split);
    throw NoSuffixMatch(host);
}

std::size_t extra_hostname_length(const DomainSplit& split) {
    return split.subdomain.empty() ? 0 : split.subdomain.size() + 1;
}

}  // namespace phishscope
