#include "phishscope/host.hpp"

#include <vector>

#include "phishscope/text.hpp"

namespace phishscope {

std::string_view to_string(HostKindTag tag) {
    switch (tag) {
        case HostKindTag::DottedQuadIp: return "DottedQuadIp";
        case HostKindTag::HexIp: return "HexIp";
        case HostKindTag::DecimalIp: return "DecimalIp";
        case HostKindTag::OctalOrMixedIp: return "OctalOrMixedIp";
        case HostKindTag::Ipv6: return "Ipv6";
        case HostKindTag::PunycodeIdn: return "PunycodeIdn";
        case HostKindTag::UnicodeIdn: return "UnicodeIdn";
        case HostKindTag::RegisteredName: return "RegisteredName";
    }
    return "Unknown";
}

std::string format_dotted_quad(std::uint32_t value) {
    return std::to_string(value >> 24) + "." + std::to_string((value >> 16) & 0xff) + "." +
           std::to_string((value >> 8) & 0xff) + "." + std::to_string(value & 0xff);
}

namespace {

enum class Radix { Decimal, Hex, Octal };

struct NumberPart {
    std::uint64_t value = 0;
    Radix radix = Radix::Decimal;
};

// Parses one dot-separated IPv4 part. Values are clamped just above 2^32 so
// that long digit strings cannot overflow.
std::optional<NumberPart> parse_part(std::string_view text) {
    if (text.empty()) return std::nullopt;
    NumberPart part;
    unsigned base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        part.radix = Radix::Hex;
        base = 16;
        text.remove_prefix(2);
    } else if (text.size() > 1 && text[0] == '0') {
        part.radix = Radix::Octal;
        base = 8;
        text.remove_prefix(1);
    }
    constexpr std::uint64_t kCap = std::uint64_t{1} << 33;
    for (char c : text) {
        unsigned digit = 0;
        if (is_ascii_digit(c)) {
            digit = static_cast<unsigned>(c - '0');
        } else if (base == 16 && is_ascii_hex(c)) {
            digit = static_cast<unsigned>(ascii_lower(c) - 'a' + 10);
        } else {
            return std::nullopt;
        }
        if (digit >= base) return std::nullopt;
        part.value = part.value * base + digit;
        if (part.value > kCap) part.value = kCap;
    }
    return part;
}

std::vector<std::string_view> split_labels(std::string_view host) {
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

std::optional<HostKind> classify_ipv4(std::string_view host) {
    if (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty()) return std::nullopt;
    const auto labels = split_labels(host);
    if (labels.size() > 4) return std::nullopt;

    std::vector<NumberPart> parts;
    parts.reserve(labels.size());
    for (auto label : labels) {
        auto part = parse_part(label);
        if (!part) return std::nullopt;
        parts.push_back(*part);
    }

    std::uint64_t value = 0;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (parts[i].value > 255) return std::nullopt;
        value = (value << 8) | parts[i].value;
    }
    const unsigned tail_bytes = static_cast<unsigned>(5 - parts.size());
    const std::uint64_t tail_limit = (std::uint64_t{1} << (8 * tail_bytes)) - 1;
    if (parts.back().value > tail_limit) return std::nullopt;
    value = (value << (8 * tail_bytes)) | parts.back().value;

    HostKind kind;
    if (parts.size() == 1) {
        switch (parts[0].radix) {
            case Radix::Hex: kind.kind = HostKindTag::HexIp; break;
            case Radix::Octal: kind.kind = HostKindTag::OctalOrMixedIp; break;
            case Radix::Decimal:
                if (value < 256) return std::nullopt;
                kind.kind = HostKindTag::DecimalIp;
                break;
        }
    } else {
        bool all_decimal = parts.size() == 4;
        for (const auto& p : parts) all_decimal = all_decimal && p.radix == Radix::Decimal;
        kind.kind = all_decimal ? HostKindTag::DottedQuadIp : HostKindTag::OctalOrMixedIp;
    }
    kind.ipv4_value = static_cast<std::uint32_t>(value);
    kind.normalized_ip = format_dotted_quad(*kind.ipv4_value);
    return kind;
}

}  // namespace

HostKind classify_host(std::string_view host) {
    if (!host.empty() && host.front() == '[') {
        // No dotted quad exists for v6; keep the bracketless literal instead.
        std::string_view inner = host.substr(1);
        if (!inner.empty() && inner.back() == ']') inner.remove_suffix(1);
        return HostKind{HostKindTag::Ipv6, ascii_lower(inner), std::nullopt};
    }
    if (auto ip = classify_ipv4(host)) return *ip;

    for (auto label : split_labels(host)) {
        if (istarts_with(label, "xn--")) return HostKind{HostKindTag::PunycodeIdn, std::nullopt, std::nullopt};
    }
    if (has_non_ascii(host)) return HostKind{HostKindTag::UnicodeIdn, std::nullopt, std::nullopt};
    return HostKind{};
}

}  // namespace phishscope
