#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace phishscope {

class NoSuffixMatch : public std::runtime_error {
public:
    explicit NoSuffixMatch(std::string_view host);
};

struct DomainSplit {
    std::string subdomain;
    std::string registrable;
    std::string public_suffix;

    friend bool operator==(const DomainSplit&, const DomainSplit&) = default;
};

/// Immutable set of public-suffix rules.
///
/// Reads the public-suffix-list text format: one rule per line, `//`
/// comments, `*.` wildcard rules and `!` exception rules. Only the first
/// whitespace-delimited token of a line is used. Unlike browsers there is
/// no implicit `*` rule: a host whose TLD is not listed has no match.
class PublicSuffixSnapshot {
public:
    PublicSuffixSnapshot() = default;

    static PublicSuffixSnapshot parse(std::istream& in);
    static PublicSuffixSnapshot parse(std::string_view text);
    static PublicSuffixSnapshot load(const std::filesystem::path& path);

    /// Number of labels of the public suffix of `host`, or nullopt when no
    /// rule matches. `host` must be lowercase without a trailing dot.
    std::optional<std::size_t> suffix_label_count(std::string_view host) const;

    std::size_t rule_count() const noexcept { return rules_.size(); }
    bool empty() const noexcept { return rules_.empty(); }
    /// FNV-1a over the rule text in file order; identifies the snapshot.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    // A label sequence may carry more than one rule type ("*.ck" and "ck").
    struct RuleFlags {
        bool normal = false;
        bool wildcard = false;
        bool exception = false;
    };
    void add_rule(std::string_view rule);

    std::unordered_map<std::string, RuleFlags> rules_;
    std::uint64_t fingerprint_ = 14695981039346656037ull;
};

/// Splits `host` into subdomain, registrable domain and public suffix using
/// the longest matching rule. Throws NoSuffixMatch when no rule applies or
/// when the host is itself a public suffix.
DomainSplit split_domain(std::string_view host, const PublicSuffixSnapshot& suffixes);

/// Non-throwing form of `split_domain`.
std::optional<DomainSplit> try_split_domain(std::string_view host, const PublicSuffixSnapshot& suffixes);

/// Characters standing left of the registrable domain, counting the joining dot.
std::size_t extra_hostname_length(const DomainSplit& split);

}  // namespace phishscope
