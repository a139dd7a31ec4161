#include "phishscope/url.hpp"

#include <algorithm>
#include <charconv>

#include "phishscope/text.hpp"

namespace phishscope {

std::string_view to_string(UrlErrorKind kind) {
    switch (kind) {
        case UrlErrorKind::MissingScheme: return "MissingScheme";
        case UrlErrorKind::EmptyHost: return "EmptyHost";
        case UrlErrorKind::IllegalCharacterInAuthority: return "IllegalCharacterInAuthority";
    }
    return "Unknown";
}

UrlError::UrlError(UrlErrorKind kind, std::size_t offset)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

namespace {

bool is_scheme_char(char c) {
    return is_ascii_alnum(c) || c == '+' || c == '-' || c == '.';
}

// Bytes that may not appear anywhere in an authority. Non-ASCII bytes are
// allowed so that raw IDN hosts survive parsing.
bool is_forbidden_in_authority(char ch) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x20 || c == 0x7f) return true;
    switch (c) {
        case ' ': case '"': case '<': case '>': case '\\':
        case '^': case '`': case '{': case '|': case '}':
            return true;
        default:
            return false;
    }
}

}  // namespace

ParsedUrl parse_url(std::string_view raw) {
    ParsedUrl url;
    url.raw = std::string(raw);

    std::size_t pos = 0;
    if (raw.empty() || !is_ascii_alpha(raw[0])) {
        throw UrlError(UrlErrorKind::MissingScheme, 0);
    }
    while (pos < raw.size() && is_scheme_char(raw[pos])) ++pos;
    if (pos >= raw.size() || raw[pos] != ':') {
        throw UrlError(UrlErrorKind::MissingScheme, pos);
    }
    url.scheme = ascii_lower(raw.substr(0, pos));
    ++pos;

    // Host must be non-empty, so an authority is mandatory.
    if (raw.substr(pos, 2) != "//") {
        throw UrlError(UrlErrorKind::EmptyHost, pos);
    }
    pos += 2;

    const std::size_t auth_begin = pos;
    const std::size_t auth_end = std::min(raw.find_first_of("/?#", auth_begin), raw.size());
    const std::string_view authority = raw.substr(auth_begin, auth_end - auth_begin);

    for (std::size_t i = 0; i < authority.size(); ++i) {
        if (is_forbidden_in_authority(authority[i])) {
            throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, auth_begin + i);
        }
    }

    std::size_t host_begin = 0;
    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
        url.userinfo = std::string(authority.substr(0, at));
        host_begin = at + 1;
    }
    std::string_view hostport = authority.substr(host_begin);
    const std::size_t hostport_offset = auth_begin + host_begin;

    std::size_t host_len = hostport.size();
    if (!hostport.empty() && hostport.front() == '[') {
        const auto close = hostport.find(']');
        if (close == std::string_view::npos) {
            throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, hostport_offset);
        }
        host_len = close + 1;
        if (host_len < hostport.size() && hostport[host_len] != ':') {
            throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, hostport_offset + host_len);
        }
    } else if (const auto colon = hostport.rfind(':'); colon != std::string_view::npos) {
        host_len = colon;
    }
    const std::string_view host = hostport.substr(0, host_len);
    for (std::size_t i = 0; i < host.size(); ++i) {
        const char c = host[i];
        if (c == '[' && i == 0) continue;
        if (c == ']' && i + 1 == host.size() && host.front() == '[') continue;
        if (c == '[' || c == ']') {
            throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, hostport_offset + i);
        }
    }
    if (host.empty()) {
        throw UrlError(UrlErrorKind::EmptyHost, hostport_offset);
    }
    url.host = ascii_lower(host);

    if (host_len < hostport.size()) {
        url.port_delimited = true;
        const std::string_view port_text = hostport.substr(host_len + 1);
        const std::size_t port_offset = hostport_offset + host_len + 1;
        for (std::size_t i = 0; i < port_text.size(); ++i) {
            if (!is_ascii_digit(port_text[i])) {
                throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, port_offset + i);
            }
        }
        if (!port_text.empty()) {
            unsigned value = 0;
            const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
            if (ec != std::errc{} || value > 65535) {
                throw UrlError(UrlErrorKind::IllegalCharacterInAuthority, port_offset);
            }
            url.port = static_cast<std::uint16_t>(value);
        }
    }

    pos = auth_end;
    const std::size_t path_end = std::min(raw.find_first_of("?#", pos), raw.size());
    std::string_view path = raw.substr(pos, path_end - pos);
    pos = path_end;

    const std::size_t last_slash = path.rfind('/');
    const std::size_t semi = path.find(';', last_slash == std::string_view::npos ? 0 : last_slash);
    if (semi != std::string_view::npos) {
        url.params_delimited = true;
        url.params = std::string(path.substr(semi + 1));
        path = path.substr(0, semi);
    }
    url.path = std::string(path);

    if (pos < raw.size() && raw[pos] == '?') {
        url.query_delimited = true;
        const std::size_t query_end = std::min(raw.find('#', pos), raw.size());
        url.query = std::string(raw.substr(pos + 1, query_end - pos - 1));
        pos = query_end;
    }
    if (pos < raw.size() && raw[pos] == '#') {
        url.fragment_delimited = true;
        url.fragment = std::string(raw.substr(pos + 1));
    }
    return url;
}

std::string ParsedUrl::recompose() const {
    std::string out = scheme + "://";
    if (userinfo) out += *userinfo + "@";
    out += host;
    if (port_delimited) {
        out += ':';
        if (port) out += std::to_string(*port);
    }
    out += path;
    if (params_delimited) out += ";" + params;
    if (query_delimited) out += "?" + query;
    if (fragment_delimited) out += "#" + fragment;
    return out;
}

bool operator==(const ParsedUrl& a, const ParsedUrl& b) {
    return a.scheme == b.scheme && a.userinfo == b.userinfo && a.host == b.host &&
           a.port == b.port && a.path == b.path && a.params == b.params &&
           a.query == b.query && a.fragment == b.fragment &&
           a.port_delimited == b.port_delimited && a.params_delimited == b.params_delimited &&
           a.query_delimited == b.query_delimited && a.fragment_delimited == b.fragment_delimited;
}

std::string_view to_string(Component c) {
    switch (c) {
        case Component::Scheme: return "Scheme";
        case Component::Netloc: return "Netloc";
        case Component::Path: return "Path";
        case Component::Params: return "Parameters";
        case Component::Query: return "Query";
        case Component::Fragment: return "Fragment";
    }
    return "Unknown";
}

bool component_present(const ParsedUrl& url, Component c) {
    switch (c) {
        case Component::Scheme: return !url.scheme.empty();
        case Component::Netloc: return !url.host.empty();
        case Component::Path: return !url.path.empty();
        case Component::Params: return !url.params.empty();
        case Component::Query: return !url.query.empty();
        case Component::Fragment: return !url.fragment.empty();
    }
    return false;
}

}  // namespace phishscope
