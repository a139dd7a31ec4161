#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

namespace phishscope {

/// Environment variable consulted for the feed endpoint when none is given.
inline constexpr const char* kFeedEndpointEnv = "PHISHSCOPE_FEED_URL";

struct FetchOptions {
    std::chrono::seconds timeout{60};
};

/// Downloads a feed to `destination`. The body is streamed to a temporary
/// sibling file and only moved into place once it is non-empty and starts
/// with a feed header. Throws DatasetError (NetworkFailure, NonCsvPayload).
std::filesystem::path fetch_feed(std::string_view endpoint, const std::filesystem::path& destination,
                                 const FetchOptions& options = {});

}  // namespace phishscope
