#pragma once

#include <cstdint>
#include <string>

namespace phishscope {

/// An exact count/denominator pair. Percentages are rendered from the
/// integers directly so no floating point rounding leaks into reports.
struct Ratio {
    std::uint64_t count = 0;
    std::uint64_t denominator = 0;

    double percent() const noexcept {
        return denominator == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(denominator);
    }

    friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// count/denominator*100 with `decimals` fractional digits, truncated
/// toward zero (13.17721… -> "13.177", 1.2875… -> "1.28"). A zero
/// denominator renders as zero.
std::string format_percent(const Ratio& r, unsigned decimals);

/// sum/count truncated to `decimals` fractional digits.
std::string format_mean(std::uint64_t sum, std::uint64_t count, unsigned decimals);

}  // namespace phishscope
