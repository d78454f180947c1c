#include "pythlab/region.hpp"

namespace pythlab {

std::pair<Int, Int> covering_int_range(double lo, double hi, double scale) noexcept {
    const double x = lo / scale;
    const double y = hi / scale;
    const double eps = 1e-9 * (1.0 + std::abs(x) + std::abs(y));
    return {static_cast<Int>(std::ceil(x - eps)), static_cast<Int>(std::floor(y + eps))};
}

}  // namespace pythlab
