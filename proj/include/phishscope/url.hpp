#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phishscope {

enum class UrlErrorKind {
    MissingScheme,
    EmptyHost,
    IllegalCharacterInAuthority,
};

std::string_view to_string(UrlErrorKind kind);

/// Typed parse failure. `offset()` is the byte index into the raw input
/// where parsing stopped.
class UrlError : public std::runtime_error {
public:
    UrlError(UrlErrorKind kind, std::size_t offset);

    UrlErrorKind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    UrlErrorKind kind_;
    std::size_t offset_;
};

/// The six generic components of a URL (scheme, netloc, path, params,
/// query, fragment) plus the pieces of the netloc.
///
/// Text is kept exactly as written except that scheme and host are ASCII
/// lowercased. Percent-escapes are never decoded. The `*_delimited` flags
/// record whether a delimiter was present even when the component after it
/// is empty, so `recompose()` reproduces an equivalent string.
struct ParsedUrl {
    std::string raw;
    std::string scheme;
    std::optional<std::string> userinfo;
    std::string host;
    std::optional<std::uint16_t> port;
    std::string path;
    std::string params;
    std::string query;
    std::string fragment;

    bool port_delimited = false;
    bool params_delimited = false;
    bool query_delimited = false;
    bool fragment_delimited = false;

    std::string recompose() const;

    /// Compares components and delimiter flags; `raw` is ignored.
    friend bool operator==(const ParsedUrl& a, const ParsedUrl& b);
};

ParsedUrl parse_url(std::string_view raw);

enum class Component { Scheme, Netloc, Path, Params, Query, Fragment };

inline constexpr Component kAllComponents[] = {
    Component::Scheme, Component::Netloc, Component::Path,
    Component::Params, Component::Query,  Component::Fragment,
};

std::string_view to_string(Component c);

/// A component counts as present iff its text is non-empty.
bool component_present(const ParsedUrl& url, Component c);

}  // namespace phishscope
