#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "pythlab/field.hpp"

namespace pythlab {

/// Axis-aligned box in embedding space, in units of 4σ_i (so that the
/// quarter-coordinate a is the sum of the four images divided by 4).
struct EmbeddingRegion {
    std::array<double, 4> lo{};
    std::array<double, 4> hi{};
    std::optional<Int> fixed_a;
};

/// Integer range [first, last] covering x/scale for x in [lo, hi], widened
/// outward so rounding in the caller's double arithmetic never drops a point.
std::pair<Int, Int> covering_int_range(double lo, double hi, double scale) noexcept;

/// Calls fn(const Quad&) for every integer quadruple whose scaled embeddings
/// may fall in `region`. The visited set is a superset of the exact region
/// (bounds are widened outward); callers apply their exact filter. Visit
/// order is lexicographic in (a, b, c, d).
template <class Fn>
void for_each_quad_in_region(const Field& field, const EmbeddingRegion& region, Fn&& fn) {
    const auto& lo = region.lo;
    const auto& hi = region.hi;
    const double rm = field.sqrt_m();
    const double rs = field.sqrt_s();
    const double rt = field.sqrt_t();

    // W± = a ± b√m,  V± = c√s ± d√t;
    // 4σ0 = W+ + V+, 4σ1 = W+ − V+, 4σ2 = W− + V−, 4σ3 = W− − V−.
    const double wp_lo = (lo[0] + lo[1]) / 2, wp_hi = (hi[0] + hi[1]) / 2;
    const double wm_lo = (lo[2] + lo[3]) / 2, wm_hi = (hi[2] + hi[3]) / 2;
    if (wp_lo > wp_hi || wm_lo > wm_hi) return;

    auto [a_first, a_last] = covering_int_range((wp_lo + wm_lo) / 2, (wp_hi + wm_hi) / 2, 1.0);
    if (region.fixed_a) {
        if (*region.fixed_a < a_first || *region.fixed_a > a_last) return;
        a_first = a_last = *region.fixed_a;
    }
    for (Int a = a_first; a <= a_last; ++a) {
        const double da = static_cast<double>(a);
        const double wl = std::max(wp_lo, 2 * da - wm_hi);
        const double wh = std::min(wp_hi, 2 * da - wm_lo);
        if (wl > wh + 1e-9 * (1 + std::abs(wl))) continue;
        const auto [b_first, b_last] = covering_int_range(wl - da, wh - da, rm);
        for (Int b = b_first; b <= b_last; ++b) {
            const double wp = da + static_cast<double>(b) * rm;
            const double wm = da - static_cast<double>(b) * rm;
            const double vpl = std::max(lo[0] - wp, wp - hi[1]);
            const double vph = std::min(hi[0] - wp, wp - lo[1]);
            const double vml = std::max(lo[2] - wm, wm - hi[3]);
            const double vmh = std::min(hi[2] - wm, wm - lo[3]);
            const double slack = 1e-9 * (1 + std::abs(wp) + std::abs(wm));
            if (vpl > vph + slack || vml > vmh + slack) continue;
            const auto [c_first, c_last] = covering_int_range((vpl + vml) / 2, (vph + vmh) / 2, rs);
            for (Int c = c_first; c <= c_last; ++c) {
                const double cs = static_cast<double>(c) * rs;
                const double dl = std::max(vpl - cs, cs - vmh);
                const double dh = std::min(vph - cs, cs - vml);
                if (dl > dh + slack) continue;
                const auto [d_first, d_last] = covering_int_range(dl, dh, rt);
                for (Int d = d_first; d <= d_last; ++d) {
                    fn(Quad{a, b, c, d});
                }
            }
        }
    }
}

}  // namespace pythlab
