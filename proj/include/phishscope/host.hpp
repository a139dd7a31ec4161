#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace phishscope {

enum class HostKindTag {
    DottedQuadIp,
    HexIp,
    DecimalIp,
    OctalOrMixedIp,
    Ipv6,
    PunycodeIdn,
    UnicodeIdn,
    RegisteredName,
};

std::string_view to_string(HostKindTag tag);

/// Classification of a host string. `normalized_ip` is set for every IP
/// kind: the canonical dotted quad for IPv4 forms, the lowercased literal
/// without brackets for IPv6.
struct HostKind {
    HostKindTag kind = HostKindTag::RegisteredName;
    std::optional<std::string> normalized_ip;
    std::optional<std::uint32_t> ipv4_value;

    bool is_ipv4() const noexcept { return ipv4_value.has_value(); }
    bool is_ip() const noexcept { return is_ipv4() || kind == HostKindTag::Ipv6; }
    bool is_idn() const noexcept {
        return kind == HostKindTag::PunycodeIdn || kind == HostKindTag::UnicodeIdn;
    }
};

/// Classifies a host taken from a successful `parse_url`.
///
/// IPv4 text follows the inet_aton family of forms: one to four dot
/// separated numbers, each decimal, `0x` hex or leading-zero octal, with the
/// last number filling the remaining bytes. A lone decimal number is only
/// treated as an address when it is at least 256, so short numeric labels
/// stay registered names.
HostKind classify_host(std::string_view host);

std::string format_dotted_quad(std::uint32_t value);

}  // namespace phishscope
