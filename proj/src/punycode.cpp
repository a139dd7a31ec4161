#include "phishscope/punycode.hpp"

#include <cstdint>
#include <limits>

#include "phishscope/text.hpp"

namespace phishscope {

namespace {

// Bootstring parameters for Punycode.
constexpr std::uint32_t kBase = 36;
constexpr std::uint32_t kTMin = 1;
constexpr std::uint32_t kTMax = 26;
constexpr std::uint32_t kSkew = 38;
constexpr std::uint32_t kDamp = 700;
constexpr std::uint32_t kInitialBias = 72;
constexpr std::uint32_t kInitialN = 0x80;
constexpr std::uint32_t kMaxInt = std::numeric_limits<std::uint32_t>::max();

std::uint32_t digit_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<std::uint32_t>(c - '0' + 26);
    if (c >= 'a' && c <= 'z') return static_cast<std::uint32_t>(c - 'a');
    if (c >= 'A' && c <= 'Z') return static_cast<std::uint32_t>(c - 'A');
    return kBase;
}

std::uint32_t adapt(std::uint32_t delta, std::uint32_t num_points, bool first_time) {
    delta = first_time ? delta / kDamp : delta / 2;
    delta += delta / num_points;
    std::uint32_t k = 0;
    while (delta > ((kBase - kTMin) * kTMax) / 2) {
        delta /= kBase - kTMin;
        k += kBase;
    }
    return k + (kBase - kTMin + 1) * delta / (delta + kSkew);
}

}  // namespace

std::u32string punycode_decode_raw(std::string_view encoded) {
    std::u32string output;

    const auto delim = encoded.rfind('-');
    std::size_t in = 0;
    if (delim != std::string_view::npos) {
        for (std::size_t j = 0; j < delim; ++j) {
            const auto c = static_cast<unsigned char>(encoded[j]);
            if (c >= 0x80) throw InvalidPunycode("non-basic code point before delimiter");
            output.push_back(c);
        }
        in = delim + 1;
    }

    std::uint32_t n = kInitialN;
    std::uint32_t i = 0;
    std::uint32_t bias = kInitialBias;

    while (in < encoded.size()) {
        const std::uint32_t old_i = i;
        std::uint32_t w = 1;
        for (std::uint32_t k = kBase;; k += kBase) {
            if (in >= encoded.size()) throw InvalidPunycode("truncated variable-length integer");
            const std::uint32_t digit = digit_value(encoded[in++]);
            if (digit >= kBase) throw InvalidPunycode("digit out of range");
            if (digit > (kMaxInt - i) / w) throw InvalidPunycode("overflow");
            i += digit * w;
            const std::uint32_t t = k <= bias ? kTMin : (k >= bias + kTMax ? kTMax : k - bias);
            if (digit < t) break;
            if (w > kMaxInt / (kBase - t)) throw InvalidPunycode("overflow");
            w *= kBase - t;
        }
        const auto len = static_cast<std::uint32_t>(output.size() + 1);
        bias = adapt(i - old_i, len, old_i == 0);
        if (i / len > kMaxInt - n) throw InvalidPunycode("overflow");
        n += i / len;
        i %= len;
        if (n > 0x10FFFF || (n >= 0xD800 && n <= 0xDFFF)) {
            throw InvalidPunycode("decoded value is not a Unicode scalar");
        }
        output.insert(output.begin() + i, static_cast<char32_t>(n));
        ++i;
    }
    return output;
}

std::string to_utf8(std::u32string_view code_points) {
    std::string out;
    out.reserve(code_points.size());
    for (char32_t cp : code_points) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::string decode_punycode(std::string_view label) {
    if (!istarts_with(label, "xn--")) throw InvalidPunycode("label lacks the xn-- prefix");
    return to_utf8(punycode_decode_raw(label.substr(4)));
}

std::string decode_idn_host(std::string_view host, bool* ok) {
    bool all_ok = true;
    std::string out;
    std::size_t start = 0;
    while (true) {
        const auto dot = host.find('.', start);
        const auto label = host.substr(start, dot == std::string_view::npos ? host.npos : dot - start);
        if (istarts_with(label, "xn--")) {
            try {
                out += decode_punycode(label);
            } catch (const InvalidPunycode&) {
                all_ok = false;
                out += label;
            }
        } else {
            out += label;
        }
        if (dot == std::string_view::npos) break;
        out += '.';
        start = dot + 1;
    }
    if (ok) *ok = all_ok;
    return out;
}

}  // namespace phishscope
