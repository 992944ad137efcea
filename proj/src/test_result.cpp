#include "purt/test_result.hpp"

namespace purt {

const char* to_string(Tail t) noexcept {
    return t == Tail::left ? "left" : "right";
}

std::array<bool, 3> decide(double statistic, const CriticalValues& cv, Tail tail) noexcept {
    std::array<bool, 3> reject{};
    for (std::size_t level = 0; level < 3; ++level) {
        reject[level] =
            tail == Tail::left ? statistic < cv.at(level) : statistic > cv.at(level);
    }
    return reject;
}

}  // namespace purt
