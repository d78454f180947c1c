#include "pythlab/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace pythlab {

namespace {

__extension__ typedef __int128 Wide;
using Big = boost::multiprecision::cpp_int;

template <class I>
int sgn(const I& v) {
    return (v > 0) - (v < 0);
}

// Sign of u + v·√r for a non-square r > 1.
template <class I>
int sign_quadratic(const I& u, const I& v, const I& r) {
    const int su = sgn(u);
    const int sv = sgn(v);
    if (sv == 0) return su;
    if (su == 0 || su == sv) return sv;
    const I lhs = u * u;
    const I rhs = r * v * v;
    return lhs > rhs ? su : sv;
}

// Sign of P + Q·√s with P = u1 + v1√m and Q = u2 + v2√m.
template <class I>
int sign_biquadratic(const I& u1, const I& v1, const I& u2, const I& v2, const I& m, const I& s) {
    const int sp = sign_quadratic(u1, v1, m);
    const int sq = sign_quadratic(u2, v2, m);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // Compare P² with s·Q² inside Z[√m]; equality would put √s in Q(√m).
    const I d0 = (u1 * u1 + m * v1 * v1) - s * (u2 * u2 + m * v2 * v2);
    const I d1 = 2 * (u1 * v1 - s * u2 * v2);
    return sign_quadratic(d0, d1, m) > 0 ? sp : sq;
}

Int narrow(Wide v) {
    if (v > static_cast<Wide>(INT64_MAX) || v < static_cast<Wide>(INT64_MIN)) {
        throw std::overflow_error("pythlab: coordinate overflow in field multiplication");
    }
    return static_cast<Int>(v);
}

Int det3(const std::array<std::array<Int, 4>, 4>& a, int skip_row, int skip_col) {
    std::array<std::array<Wide, 3>, 3> m{};
    for (int i = 0, r = 0; i < 4; ++i) {
        if (i == skip_row) continue;
        for (int j = 0, c = 0; j < 4; ++j) {
            if (j == skip_col) continue;
            m[r][c++] = a[i][j];
        }
        ++r;
    }
    const Wide v = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return narrow(v);
}

Big isqrt_floor(const Big& n) { return boost::multiprecision::sqrt(n); }

// [lo, hi] with lo ≤ √r ≤ hi and hi - lo = 2^-bits.
Interval sqrt_enclosure(Int r, unsigned bits) {
    const Big scale = Big(1) << bits;
    const Big root = isqrt_floor(Big(r) * scale * scale);
    Rational lo(root, scale);
    Rational hi(root + 1, scale);
    return {lo, hi};
}

Interval scale_interval(const Interval& iv, Int k) {
    if (k >= 0) return {iv.lo * k, iv.hi * k};
    return {iv.hi * k, iv.lo * k};
}

}  // namespace

bool is_square_free(Int n) {
    if (n < 1) return false;
    for (Int d = 2; d <= n / d; ++d) {
        if (n % (d * d) == 0) return false;
    }
    return true;
}

Int gcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

std::string_view to_string(BasisType t) {
    switch (t) {
        case BasisType::B1: return "B1";
        case BasisType::B2: return "B2";
        case BasisType::B3: return "B3";
        case BasisType::B4a: return "B4a";
        case BasisType::B4b: return "B4b";
    }
    return "?";
}

std::string format_quad(const Quad& q) {
    std::ostringstream os;
    os << q.a << ',' << q.b << ',' << q.c << ',' << q.d;
    return os.str();
}

Quad parse_quad(std::string_view text) {
    std::array<Int, 4> v{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        if (first < last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v[i]);
        if (ec != std::errc{}) {
            throw std::invalid_argument("malformed element '" + std::string(text) +
                                        "': expected four integers a,b,c,d");
        }
        pos = static_cast<std::size_t>(ptr - text.data());
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (i < 3) {
            if (pos >= text.size() || text[pos] != ',') {
                throw std::invalid_argument("malformed element '" + std::string(text) +
                                            "': expected four integers a,b,c,d");
            }
            ++pos;
        }
    }
    if (pos != text.size()) {
        throw std::invalid_argument("malformed element '" + std::string(text) +
                                    "': trailing characters");
    }
    return {v[0], v[1], v[2], v[3]};
}

FieldPtr Field::make(Int p, Int q) {
    for (Int v : {p, q}) {
        if (v <= 1) {
            throw std::invalid_argument(std::to_string(v) + " is not greater than 1");
        }
        if (!is_square_free(v)) {
            throw std::invalid_argument(std::to_string(v) + " is not square-free");
        }
    }
    if (p == q) {
        throw std::invalid_argument("generators must be distinct (both are " + std::to_string(p) + ")");
    }

    const Int gpq = gcd(p, q);
    const Int r = (p / gpq) * (q / gpq);
    std::array<Int, 3> mst{p, q, r};
    std::sort(mst.begin(), mst.end());

    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = p;
    f->q_ = q;
    f->m_ = mst[0];
    f->s_ = mst[1];
    f->t_ = mst[2];
    f->g_ = gcd(f->m_, f->s_);
    f->m_over_g_ = f->m_ / f->g_;
    f->s_over_g_ = f->s_ / f->g_;
    if (f->m_over_g_ * f->s_over_g_ != f->t_) {
        throw std::logic_error("pythlab: inconsistent biquadratic triple");
    }
    f->rm_ = std::sqrt(static_cast<double>(f->m_));
    f->rs_ = std::sqrt(static_cast<double>(f->s_));
    f->rt_ = std::sqrt(static_cast<double>(f->t_));

    // Try each row of the basis table against each role assignment (p, q, r)
    // of (m, s, t); the first match is kept so the result depends on the
    // field only.
    auto slot = [&](Int v) { return v == f->m_ ? 1 : v == f->s_ ? 2 : 3; };
    auto unit = [](int sl, Int k) {
        Quad x;
        (sl == 1 ? x.b : sl == 2 ? x.c : x.d) = k;
        return x;
    };
    auto mod4 = [](Int v) { return ((v % 4) + 4) % 4; };

    static constexpr std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
    }};
    static constexpr std::array<BasisType, 5> rows{
        BasisType::B1, BasisType::B2, BasisType::B3, BasisType::B4a, BasisType::B4b,
    };
    bool found = false;
    for (BasisType row : rows) {
        for (const auto& perm : perms) {
            const Int rp = mst[perm[0]];
            const Int rq = mst[perm[1]];
            const Int rr = mst[perm[2]];
            const Int pm = mod4(rp);
            const Int qm = mod4(rq);
            const Int gm = mod4(gcd(rp, rq));
            const Quad one{4, 0, 0, 0};
            const Quad sp = unit(slot(rp), 4);
            const Quad sq = unit(slot(rq), 4);
            const Quad half_p = unit(slot(rp), 2);
            const Quad half_q = unit(slot(rq), 2);
            const Quad half_r = unit(slot(rr), 2);
            switch (row) {
                case BasisType::B1:
                    if (pm == 2 && qm == 3) {
                        f->basis_ = {one, sp, sq, half_p + half_r};
                        found = true;
                    }
                    break;
                case BasisType::B2:
                    if (pm == 2 && qm == 1) {
                        f->basis_ = {one, sp, Quad{2, 0, 0, 0} + half_q, half_p + half_r};
                        found = true;
                    }
                    break;
                case BasisType::B3:
                    if (pm == 3 && qm == 1) {
                        f->basis_ = {one, sp, Quad{2, 0, 0, 0} + half_q, half_p + half_r};
                        found = true;
                    }
                    break;
                case BasisType::B4a:
                case BasisType::B4b:
                    if (pm == 1 && qm == 1 && gm == (row == BasisType::B4a ? 1 : 3)) {
                        const Int sign_p = row == BasisType::B4a ? 1 : -1;
                        f->basis_ = {one, Quad{2, 0, 0, 0} + half_p, Quad{2, 0, 0, 0} + half_q,
                                     Quad{1, 0, 0, 0} + unit(slot(rp), sign_p) + unit(slot(rq), 1) +
                                         unit(slot(rr), 1)};
                        found = true;
                    }
                    break;
            }
            if (found) {
                f->basis_type_ = row;
                break;
            }
        }
        if (found) break;
    }
    if (!found) {
        throw std::logic_error("pythlab: no integral basis row matches (" + std::to_string(f->m_) + "," +
                               std::to_string(f->s_) + "," + std::to_string(f->t_) + ")");
    }

    std::array<std::array<Int, 4>, 4> rows_matrix{};
    for (int i = 0; i < 4; ++i) {
        rows_matrix[i] = {f->basis_[i].a, f->basis_[i].b, f->basis_[i].c, f->basis_[i].d};
    }
    Wide det = 0;
    for (int j = 0; j < 4; ++j) {
        const Int cof = ((j % 2) ? -1 : 1) * det3(rows_matrix, 0, j);
        det += static_cast<Wide>(rows_matrix[0][j]) * cof;
    }
    f->determinant_ = narrow(det);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            f->adjugate_[i][j] = (((i + j) % 2) ? -1 : 1) * det3(rows_matrix, j, i);
        }
    }
    return f;
}

Quad Field::mul(const Quad& x, const Quad& y) const {
    const Wide a = x.a, b = x.b, c = x.c, d = x.d;
    const Wide a2 = y.a, b2 = y.b, c2 = y.c, d2 = y.d;
    // Numerator over 16.
    const Wide n0 = a * a2 + m_ * b * b2 + s_ * c * c2 + t_ * d * d2;
    const Wide n1 = a * b2 + b * a2 + s_over_g_ * (c * d2 + d * c2);
    const Wide n2 = a * c2 + c * a2 + m_over_g_ * (b * d2 + d * b2);
    const Wide n3 = a * d2 + d * a2 + g_ * (b * c2 + c * b2);
    if (n0 % 4 != 0 || n1 % 4 != 0 || n2 % 4 != 0 || n3 % 4 != 0) {
        throw std::domain_error("pythlab: product " + format_quad(x) + " * " + format_quad(y) +
                                " has no quarter-coordinate form");
    }
    return {narrow(n0 / 4), narrow(n1 / 4), narrow(n2 / 4), narrow(n3 / 4)};
}

bool Field::is_integral(const Quad& x) const noexcept {
    const std::array<Int, 4> v{x.a, x.b, x.c, x.d};
    for (int j = 0; j < 4; ++j) {
        Wide acc = 0;
        for (int i = 0; i < 4; ++i) acc += static_cast<Wide>(v[i]) * adjugate_[i][j];
        if (acc % determinant_ != 0) return false;
    }
    return true;
}

std::array<Int, 4> Field::basis_coordinates(const Quad& x) const {
    if (!is_integral(x)) {
        throw std::invalid_argument("element " + format_quad(x) + " is not integral");
    }
    const std::array<Int, 4> v{x.a, x.b, x.c, x.d};
    std::array<Int, 4> n{};
    for (int j = 0; j < 4; ++j) {
        Wide acc = 0;
        for (int i = 0; i < 4; ++i) acc += static_cast<Wide>(v[i]) * adjugate_[i][j];
        n[j] = narrow(acc / determinant_);
    }
    return n;
}

Quad Field::from_basis_coordinates(const std::array<Int, 4>& n) const noexcept {
    Quad x;
    for (int i = 0; i < 4; ++i) x += n[i] * basis_[i];
    return x;
}

int Field::embedding_sign(const Quad& x, int index) const {
    const Int e1 = epsilon1(index);
    const Int e2 = epsilon2(index);
    // 4g·σ(x) = (g·a + e1·g·b·√m) + √s·(e2·g·c + e1·e2·d·√m)
    const double bound = std::max({std::abs(static_cast<double>(x.a)), std::abs(static_cast<double>(x.b)),
                                   std::abs(static_cast<double>(x.c)), std::abs(static_cast<double>(x.d))}) *
                         static_cast<double>(g_);
    const double fm = static_cast<double>(m_) + 1.0;
    const double fs = static_cast<double>(s_);
    const double worst = 64.0 * std::pow(bound, 4) * fm * fm * fm * fs * fs;
    if (worst < 1e36) {
        const Wide g = g_;
        return sign_biquadratic<Wide>(g * x.a, e1 * g * x.b, e2 * g * x.c, e1 * e2 * Wide(x.d), Wide(m_),
                                      Wide(s_));
    }
    const Big g = g_;
    return sign_biquadratic<Big>(g * x.a, e1 * g * x.b, e2 * g * x.c, Big(e1 * e2) * x.d, Big(m_), Big(s_));
}

std::array<double, 4> Field::scaled_embeddings(const Quad& x) const noexcept {
    const double a = static_cast<double>(x.a);
    const double bm = static_cast<double>(x.b) * rm_;
    const double cs = static_cast<double>(x.c) * rs_;
    const double dt = static_cast<double>(x.d) * rt_;
    return {a + bm + cs + dt, a + bm - cs - dt, a - bm + cs - dt, a - bm - cs + dt};
}

bool Field::is_totally_positive(const Quad& x) const {
    if (x.is_zero()) return false;
    if (x.a <= 0) return false;  // trace is the sum of the embeddings
    const auto v = scaled_embeddings(x);
    const double err = (std::abs(static_cast<double>(x.a)) + std::abs(static_cast<double>(x.b)) * rm_ +
                        std::abs(static_cast<double>(x.c)) * rs_ + std::abs(static_cast<double>(x.d)) * rt_) *
                       1e-12;
    for (int i = 0; i < 4; ++i) {
        if (v[i] > err) continue;
        if (v[i] < -err) return false;
        if (embedding_sign(x, i) <= 0) return false;
    }
    return true;
}

EmbeddingBox Field::embedding_box(const Quad& x, unsigned precision) const {
    const Interval sm = sqrt_enclosure(m_, precision);
    const Interval ss = sqrt_enclosure(s_, precision);
    const Interval st = sqrt_enclosure(t_, precision);
    EmbeddingBox box;
    box.precision = precision;
    for (int i = 0; i < 4; ++i) {
        const Int e1 = epsilon1(i);
        const Int e2 = epsilon2(i);
        const Interval tb = scale_interval(sm, e1 * x.b);
        const Interval tc = scale_interval(ss, e2 * x.c);
        const Interval td = scale_interval(st, e1 * e2 * x.d);
        box.images[i].lo = (Rational(x.a) + tb.lo + tc.lo + td.lo) / 4;
        box.images[i].hi = (Rational(x.a) + tb.hi + tc.hi + td.hi) / 4;
    }
    return box;
}

std::array<int, 4> Field::embedding_signs_by_refinement(const Quad& x) const {
    if (x.is_zero()) return {0, 0, 0, 0};
    for (unsigned precision = 16;; precision *= 2) {
        const EmbeddingBox box = embedding_box(x, precision);
        bool decided = true;
        std::array<int, 4> signs{};
        for (int i = 0; i < 4; ++i) {
            if (!box.images[i].excludes_zero()) {
                decided = false;
                break;
            }
            signs[i] = box.images[i].lo > 0 ? 1 : -1;
        }
        if (decided) return signs;
    }
}

std::string Field::describe() const {
    std::ostringstream os;
    os << "K(" << m_ << "," << s_ << ") t=" << t_ << " g=" << g_ << " basis=" << to_string(basis_type_);
    return os.str();
}

}  // namespace pythlab
