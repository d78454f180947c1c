#include "pythlab/witnesses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

namespace pythlab {

namespace {

constexpr Quad integer(Int n) { return {4 * n, 0, 0, 0}; }
// (a + b√m + c√s + d√t) / 2
constexpr Quad halves(Int a, Int b, Int c, Int d) { return {2 * a, 2 * b, 2 * c, 2 * d}; }

WitnessRecord assemble(const FieldPtr& field, std::initializer_list<Quad> roots, WitnessSource source) {
    WitnessRecord rec{field, Element::zero(field), {}, source, 6, std::nullopt, true};
    Quad sum;
    for (const Quad& x : roots) {
        if (!field->is_integral(x)) {
            throw std::logic_error("pythlab: witness root " + format_quad(x) + " is not integral in " +
                                   field->describe());
        }
        rec.roots.emplace_back(field, x);
        sum += field->square(x);
    }
    rec.element = Element(field, sum);
    return rec;
}

FieldPtr checked_field(Int m, Int s) {
    FieldPtr f = Field::make(m, s);
    if (f->m() != m || f->s() != s) {
        throw std::invalid_argument("s = " + std::to_string(s) + " does not give a field labelled K(" +
                                    std::to_string(m) + ", s): smallest two are " + std::to_string(f->m()) +
                                    ", " + std::to_string(f->s()));
    }
    return f;
}

void require(bool ok, Int m, Int s, const std::string& why) {
    if (!ok) {
        throw std::invalid_argument("invalid s = " + std::to_string(s) + " for m = " + std::to_string(m) + ": " +
                                    why);
    }
}

// Common shape 1² + 1² + 1² + u² + v² + (1 + v)².
WitnessRecord three_ones(const FieldPtr& f, Quad u, Quad v, WitnessSource source) {
    return assemble(f, {integer(1), integer(1), integer(1), u, v, v + integer(1)}, source);
}

bool contains(std::initializer_list<Int> values, Int s) {
    return std::find(values.begin(), values.end(), s) != values.end();
}

}  // namespace

std::string_view to_string(WitnessSource source) {
    switch (source) {
        case WitnessSource::Lemma32i: return "Lemma3.2(i)";
        case WitnessSource::Lemma32ii: return "Lemma3.2(ii)";
        case WitnessSource::Lemma32iii: return "Lemma3.2(iii)";
        case WitnessSource::Lemma32iv: return "Lemma3.2(iv)";
        case WitnessSource::Prop33: return "Prop3.3";
        case WitnessSource::Prop34: return "Prop3.4";
        case WitnessSource::Prop35: return "Prop3.5";
        case WitnessSource::Prop36: return "Prop3.6";
        case WitnessSource::Prop37: return "Prop3.7";
        case WitnessSource::Prop38: return "Prop3.8";
        case WitnessSource::Prop48: return "Prop4.8";
        case WitnessSource::Prop49: return "Prop4.9";
        case WitnessSource::Prop410: return "Prop4.10";
    }
    return "?";
}

std::string_view to_string(WitnessCaveat caveat) {
    switch (caveat) {
        case WitnessCaveat::KnownException: return "known_exception";
        case WitnessCaveat::NotExplicit: return "not_explicit";
    }
    return "?";
}

Int isqrt(Int n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative number");
    Int r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

Int odd_floor_sqrt(Int n) {
    if (n < 1) throw std::invalid_argument("odd_floor_sqrt requires n >= 1, got " + std::to_string(n));
    const Int r = isqrt(n);
    return r % 2 == 1 ? r : r - 1;
}

Int odd_ceil_sqrt(Int n) {
    if (n < 1) throw std::invalid_argument("odd_ceil_sqrt requires n >= 1, got " + std::to_string(n));
    const Int r = isqrt(n);
    const Int c = r * r == n ? r : r + 1;
    return c % 2 == 1 ? c : c + 1;
}

OddBounds odd_bounds(Int n) { return {n, odd_floor_sqrt(n), odd_ceil_sqrt(n)}; }

WitnessRecord witness_m7(Int s) {
    require(s > 7, 7, s, "need s > 7");
    require(is_square_free(s), 7, s, "not square-free");
    require(s % 7 != 0, 7, s, "divisible by 7");
    const FieldPtr f = checked_field(7, s);
    const Quad one_plus_root7{4, 4, 0, 0};
    switch (s % 4) {
        case 1:
            // (1 + √s)/2
            return three_ones(f, one_plus_root7, halves(1, 0, 1, 0), WitnessSource::Prop33);
        case 2:
            // (√s + √7s)/2
            return three_ones(f, one_plus_root7, halves(0, 0, 1, 1), WitnessSource::Prop34);
        default:
            if (s == 11) {
                return three_ones(f, Quad{8, 4, 0, 0}, halves(0, 1, 1, 0), WitnessSource::Lemma32i);
            }
            // (√7 + √s)/2
            return three_ones(f, one_plus_root7, halves(0, 1, 1, 0), WitnessSource::Prop35);
    }
}

WitnessRecord witness_m6(Int s) {
    require(s > 6, 6, s, "need s > 6");
    require(is_square_free(s), 6, s, "not square-free");
    require(s % 3 != 0, 6, s, "divisible by 3 (t would be smaller than s)");
    if (s == 14) {
        throw KnownExceptionError("K(6,14) is a known conjectured exception (Pythagoras number conjectured <= 5)");
    }
    const FieldPtr f = checked_field(6, s);
    const Quad one_plus_root6{4, 4, 0, 0};
    switch (s % 4) {
        case 1:
            return three_ones(f, one_plus_root6, halves(1, 0, 1, 0), WitnessSource::Prop36);
        case 2: {
            // gcd(6, s) = 2 and t = 3s/2; v = (√6 + √s)/2
            if (s == 10) return three_ones(f, Quad{8, 4, 0, 0}, halves(0, 1, 1, 0), WitnessSource::Lemma32ii);
            const WitnessSource src = s <= 110 ? WitnessSource::Lemma32iii : WitnessSource::Prop37;
            return three_ones(f, one_plus_root6, halves(0, 1, 1, 0), src);
        }
        default: {
            // t = 6s; v = (√6 + √6s)/2
            const WitnessSource src = (s == 7 || s == 11) ? WitnessSource::Lemma32iv : WitnessSource::Prop38;
            return three_ones(f, one_plus_root6, halves(0, 1, 0, 1), src);
        }
    }
}

WitnessRecord witness_m3(Int s) {
    require(s > 3, 3, s, "need s > 3");
    require(is_square_free(s), 3, s, "not square-free");
    require(s % 3 != 0, 3, s, "divisible by 3 (t would be smaller than s)");
    require(!contains({5, 7, 10, 11, 13, 14}, s), 3, s, "field excluded from the m = 3 families");
    const FieldPtr f = checked_field(3, s);
    const Int fl = odd_floor_sqrt(s);
    const Int ce = odd_ceil_sqrt(s);
    const Quad one = integer(1);
    const Quad root3{0, 4, 0, 0};
    const Quad one_plus_root3{4, 4, 0, 0};

    WitnessRecord rec = [&] {
        switch (s % 4) {
            case 1: {
                const Quad lo = halves(fl, 0, 1, 0);  // (fl + √s)/2
                const Quad hi = halves(ce, 0, 1, 0);  // (ce + √s)/2
                return assemble(f, {one, lo, lo, hi, f->mul(one_plus_root3, hi), one - f->mul(root3, lo)},
                                WitnessSource::Prop48);
            }
            case 2: {
                const Quad two_plus_root3{8, 4, 0, 0};
                return assemble(f,
                                {two_plus_root3, two_plus_root3, halves(fl - 5, -2, -1, -1), halves(fl - 3, 0, -1, -1),
                                 halves(fl - 9, -4, -1, -1), halves(fl + 1, 3 - fl, 2, 0)},
                                WitnessSource::Prop49);
            }
            default:
                return assemble(f,
                                {one, one, halves(fl - 5, 3, 1, 0), halves(fl - 7, 5, 1, 0), halves(fl - 5, 5, 1, 0),
                                 halves(22 - fl, fl - 12, -1, 1)},
                                WitnessSource::Prop410);
        }
    }();

    switch (rec.source) {
        case WitnessSource::Prop48: {
            if (s == 29) rec.caveat = WitnessCaveat::NotExplicit;
            auto between = [s](Int lo, Int hi) { return lo * lo < s && s < hi * hi; };
            rec.in_verified_range = (s >= 17 && s < 15000) || between(315, 317) || between(999, 1001) ||
                                    between(3161, 3165);
            break;
        }
        case WitnessSource::Prop49:
            if (contains({170, 178, 230, 238, 362, 442, 446, 454}, s)) {
                rec.caveat = WitnessCaveat::KnownException;
            } else if ((s >= 22 && s <= 46) || contains({62, 70, 74}, s)) {
                rec.caveat = WitnessCaveat::NotExplicit;
            }
            rec.in_verified_range = s >= 22 && s <= 506;
            break;
        default:
            if ((s >= 19 && s <= 91) || s == 119) rec.caveat = WitnessCaveat::NotExplicit;
            rec.in_verified_range = s >= 19 && s <= 511;
            break;
    }
    return rec;
}

WitnessRecord witness(Int m, Int s) {
    switch (m) {
        case 3: return witness_m3(s);
        case 6: return witness_m6(s);
        case 7: return witness_m7(s);
        default:
            throw std::invalid_argument("witness families exist for m in {3, 6, 7}, got m = " + std::to_string(m));
    }
}

}  // namespace pythlab
