#include "phishscope/fetch.hpp"

#include <httplib.h>

#include <fstream>

#include "phishscope/dataset.hpp"
#include "phishscope/url.hpp"

namespace phishscope {

namespace {

std::string read_first_line(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace

std::filesystem::path fetch_feed(std::string_view endpoint, const std::filesystem::path& destination,
                                 const FetchOptions& options) {
    ParsedUrl url;
    try {
        url = parse_url(endpoint);
    } catch (const UrlError& e) {
        throw DatasetError(DatasetErrorKind::NetworkFailure, "bad endpoint: " + std::string(e.what()));
    }
    if (url.scheme != "http" && url.scheme != "https") {
        throw DatasetError(DatasetErrorKind::NetworkFailure, "unsupported scheme " + url.scheme);
    }

    std::string origin = url.scheme + "://" + url.host;
    if (url.port) origin += ":" + std::to_string(*url.port);
    std::string target = url.path.empty() ? "/" : url.path;
    if (url.params_delimited) target += ";" + url.params;
    if (url.query_delimited) target += "?" + url.query;

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);

    std::filesystem::path partial = destination;
    partial += ".part";
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DatasetError(DatasetErrorKind::FileUnreadable, "cannot write " + partial.string());
    }

    int status = 0;
    auto result = client.Get(
        target,
        [&](const httplib::Response& response) {
            status = response.status;
            return true;
        },
        [&](const char* data, std::size_t length) {
            if (status != 200) return true;
            out.write(data, static_cast<std::streamsize>(length));
            return static_cast<bool>(out);
        });
    out.close();

    auto fail = [&](DatasetErrorKind kind, const std::string& why) {
        std::error_code ignored;
        std::filesystem::remove(partial, ignored);
        return DatasetError(kind, why);
    };
    if (!result) throw fail(DatasetErrorKind::NetworkFailure, httplib::to_string(result.error()) + " (" + origin + ")");
    if (result->status != 200) {
        throw fail(DatasetErrorKind::NetworkFailure, "HTTP status " + std::to_string(result->status));
    }
    if (std::filesystem::file_size(partial) == 0) throw fail(DatasetErrorKind::NonCsvPayload, "empty response body");
    if (!is_feed_header(read_first_line(partial))) {
        throw fail(DatasetErrorKind::NonCsvPayload, "response does not start with a feed header");
    }
    std::filesystem::rename(partial, destination);
    return destination;
}

}  // namespace phishscope
