#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace pythlab {

using Int = std::int64_t;
using Rational = boost::multiprecision::cpp_rational;

/// Quarter-coordinates: the number (a + b√m + c√s + d√t) / 4.
struct Quad {
    Int a = 0;
    Int b = 0;
    Int c = 0;
    Int d = 0;

    friend constexpr bool operator==(const Quad&, const Quad&) = default;
    friend constexpr auto operator<=>(const Quad&, const Quad&) = default;

    constexpr bool is_zero() const noexcept { return a == 0 && b == 0 && c == 0 && d == 0; }

    constexpr Quad operator-() const noexcept { return {-a, -b, -c, -d}; }
    constexpr Quad& operator+=(const Quad& o) noexcept {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    constexpr Quad& operator-=(const Quad& o) noexcept {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }
    friend constexpr Quad operator+(Quad x, const Quad& y) noexcept { return x += y; }
    friend constexpr Quad operator-(Quad x, const Quad& y) noexcept { return x -= y; }
    friend constexpr Quad operator*(Int k, const Quad& x) noexcept {
        return {k * x.a, k * x.b, k * x.c, k * x.d};
    }
};

struct QuadHash {
    std::size_t operator()(const Quad& q) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (Int v : {q.a, q.b, q.c, q.d}) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }
};

/// "a,b,c,d"
std::string format_quad(const Quad& q);
Quad parse_quad(std::string_view text);

/// Flips sign so that the first nonzero coordinate is positive.
constexpr Quad canonical_sign(const Quad& q) noexcept {
    for (Int v : {q.a, q.b, q.c, q.d}) {
        if (v > 0) return q;
        if (v < 0) return -q;
    }
    return q;
}

/// Integral-basis rows (Wilson's classification).
enum class BasisType { B1, B2, B3, B4a, B4b };

std::string_view to_string(BasisType t);

struct Interval {
    Rational lo;
    Rational hi;

    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool excludes_zero() const { return lo > 0 || hi < 0; }
};

/// Enclosures of the four real embeddings, indexed by `Field::embedding_index`.
struct EmbeddingBox {
    std::array<Interval, 4> images;
    unsigned precision = 0;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// A totally real biquadratic field Q(√m, √s) labelled so that 1 < m < s < t,
/// together with the integral basis of its ring of integers.
///
/// Elements are handled as `Quad`s over (1, √m, √s, √t). The relations
/// √m√s = g√t, √m√t = (m/g)√s and √s√t = (s/g)√m close the basis under
/// multiplication, with g = gcd(m, s) and t = ms/g².
///
/// Embeddings are indexed 0..3 as (ε1, ε2) = (+,+), (+,-), (-,+), (-,-);
/// embedding (ε1, ε2) sends √m ↦ ε1√m, √s ↦ ε2√s, √t ↦ ε1ε2√t.
class Field {
public:
    /// Throws std::invalid_argument naming the offending value when p or q is
    /// not square-free, not greater than 1, or p == q.
    static FieldPtr make(Int p, Int q);

    Int p() const noexcept { return p_; }
    Int q() const noexcept { return q_; }
    Int m() const noexcept { return m_; }
    Int s() const noexcept { return s_; }
    Int t() const noexcept { return t_; }
    Int g() const noexcept { return g_; }
    BasisType basis_type() const noexcept { return basis_type_; }
    const std::array<Quad, 4>& basis() const noexcept { return basis_; }

    /// Canonical descriptors compare equal regardless of the generating pair.
    bool same_field(const Field& other) const noexcept {
        return m_ == other.m_ && s_ == other.s_ && t_ == other.t_;
    }

    Quad one() const noexcept { return {4, 0, 0, 0}; }

    /// Throws std::domain_error when the product has no quarter-coordinate form
    /// (never the case for integral operands) or overflows 64 bits.
    Quad mul(const Quad& x, const Quad& y) const;
    Quad square(const Quad& x) const { return mul(x, x); }

    bool is_integral(const Quad& x) const noexcept;

    /// Coordinates of x over the integral basis; requires is_integral(x).
    std::array<Int, 4> basis_coordinates(const Quad& x) const;
    Quad from_basis_coordinates(const std::array<Int, 4>& n) const noexcept;

    /// Exact sign (-1, 0, +1) of embedding `index` of x.
    int embedding_sign(const Quad& x, int index) const;

    bool is_totally_positive(const Quad& x) const;
    bool is_totally_nonneg(const Quad& x) const { return x.is_zero() || is_totally_positive(x); }

    /// Floating-point images of the four embeddings, each scaled by 4
    /// (i.e. a ± b√m ± c√s ± d√t).
    std::array<double, 4> scaled_embeddings(const Quad& x) const noexcept;

    /// Rational enclosures of the embeddings; each interval has width at most
    /// 2^-precision · max(1, (|a| + |b|√m + |c|√s + |d|√t)/4).
    EmbeddingBox embedding_box(const Quad& x, unsigned precision) const;

    /// Sign decision by refining `embedding_box` until no interval contains 0.
    /// Slower than `embedding_sign`; kept as an independent route.
    std::array<int, 4> embedding_signs_by_refinement(const Quad& x) const;

    double sqrt_m() const noexcept { return rm_; }
    double sqrt_s() const noexcept { return rs_; }
    double sqrt_t() const noexcept { return rt_; }

    static constexpr int epsilon1(int index) noexcept { return index < 2 ? 1 : -1; }
    static constexpr int epsilon2(int index) noexcept { return index % 2 == 0 ? 1 : -1; }

    std::string describe() const;

private:
    Field() = default;

    Int p_ = 0, q_ = 0;
    Int m_ = 0, s_ = 0, t_ = 0, g_ = 1;
    Int s_over_g_ = 0, m_over_g_ = 0;
    BasisType basis_type_ = BasisType::B1;
    std::array<Quad, 4> basis_{};
    // Integrality: x integral iff x · adj(B) ≡ 0 (mod det B), rows of B = basis.
    std::array<std::array<Int, 4>, 4> adjugate_{};
    Int determinant_ = 1;
    double rm_ = 0, rs_ = 0, rt_ = 0;
};

bool is_square_free(Int n);
Int gcd(Int a, Int b);

}  // namespace pythlab
