#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phishscope {

class InvalidPunycode : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes the Bootstring payload of a single label (no `xn--` prefix) into
/// Unicode code points.
std::u32string punycode_decode_raw(std::string_view encoded);

/// Decodes an `xn--` label (prefix matched case-insensitively) to UTF-8.
std::string decode_punycode(std::string_view label);

/// Decodes every `xn--` label of a dotted host. Labels that fail to decode
/// are kept as written; `ok` reports whether all of them decoded.
std::string decode_idn_host(std::string_view host, bool* ok = nullptr);

std::string to_utf8(std::u32string_view code_points);

}  // namespace phishscope
