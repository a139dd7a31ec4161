#include "phishscope/ratio.hpp"

namespace phishscope {

namespace {

std::string format_fixed(unsigned __int128 numerator, std::uint64_t denominator, unsigned decimals) {
    unsigned __int128 scale = 1;
    for (unsigned i = 0; i < decimals; ++i) scale *= 10;
    const unsigned __int128 scaled = denominator == 0 ? 0 : numerator * scale / denominator;

    const auto whole = static_cast<std::uint64_t>(scaled / scale);
    auto frac = static_cast<std::uint64_t>(scaled % scale);
    std::string out = std::to_string(whole);
    if (decimals > 0) {
        std::string digits(decimals, '0');
        for (unsigned i = decimals; i-- > 0;) {
            digits[i] = static_cast<char>('0' + frac % 10);
            frac /= 10;
        }
        out += "." + digits;
    }
    return out;
}

}  // namespace

std::string format_percent(const Ratio& r, unsigned decimals) {
    return format_fixed(static_cast<unsigned __int128>(r.count) * 100, r.denominator, decimals);
}

std::string format_mean(std::uint64_t sum, std::uint64_t count, unsigned decimals) {
    return format_fixed(sum, count, decimals);
}

}  // namespace phishscope
