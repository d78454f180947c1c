#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "../properties.hpp"
#include "pythlab/element.hpp"

using namespace pythlab;

namespace {

Int det4(const std::array<Quad, 4>& rows) {
    using Big = boost::multiprecision::cpp_int;
    std::array<std::array<Big, 4>, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = {rows[i].a, rows[i].b, rows[i].c, rows[i].d};
    Big det = 1;
    // Bareiss fraction-free elimination.
    Big prev = 1;
    for (int k = 0; k < 3; ++k) {
        if (a[k][k] == 0) {
            int swap = k + 1;
            while (swap < 4 && a[swap][k] == 0) ++swap;
            if (swap == 4) return 0;
            std::swap(a[k], a[swap]);
            det = -det;
        }
        for (int i = k + 1; i < 4; ++i)
            for (int j = k + 1; j < 4; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return static_cast<Int>(det * a[3][3]);
}

}  // namespace

TEST_SUITE("field_core") {

TEST_CASE("canonical triples and basis types") {
    const FieldPtr f = make_field(7, 11);
    CHECK(f->m() == 7);
    CHECK(f->s() == 11);
    CHECK(f->t() == 77);
    CHECK(f->basis_type() == BasisType::B3);
    // (1, √7, (1+√77)/2, (√7+√11)/2)
    CHECK(f->basis() == std::array<Quad, 4>{Quad{4, 0, 0, 0}, Quad{0, 4, 0, 0}, Quad{2, 0, 0, 2}, Quad{0, 2, 2, 0}});

    const FieldPtr h = make_field(6, 10);
    CHECK(h->m() == 6);
    CHECK(h->s() == 10);
    CHECK(h->t() == 15);
    CHECK(h->g() == 2);

    CHECK(make_field(2, 3)->basis_type() == BasisType::B1);

    const FieldPtr k = make_field(7, 13);
    CHECK(k->basis_type() == BasisType::B3);
    CHECK(k->basis() == std::array<Quad, 4>{Quad{4, 0, 0, 0}, Quad{0, 4, 0, 0}, Quad{2, 0, 2, 0}, Quad{0, 2, 0, 2}});
}

TEST_CASE("every basis row is reachable") {
    CHECK(make_field(2, 3)->basis_type() == BasisType::B1);
    CHECK(make_field(2, 5)->basis_type() == BasisType::B2);
    CHECK(make_field(3, 7)->basis_type() == BasisType::B3);
    CHECK(make_field(5, 13)->basis_type() == BasisType::B4a);
    CHECK(make_field(5, 21)->basis_type() == BasisType::B4a);
    CHECK(make_field(21, 33)->basis_type() == BasisType::B4b);
}

TEST_CASE("generating pair does not matter") {
    const FieldPtr a = make_field(6, 10);
    const FieldPtr b = make_field(10, 6);
    const FieldPtr c = make_field(15, 10);
    for (const FieldPtr& x : {b, c}) {
        CHECK(x->same_field(*a));
        CHECK(x->basis() == a->basis());
        CHECK(x->basis_type() == a->basis_type());
    }
    const auto r = props::pair_invariance(1000, 11);
    CHECK_MESSAGE(r.ok, r.failure);
}

TEST_CASE("invalid generators are rejected with the offending value") {
    CHECK_THROWS_WITH_AS(make_field(4, 6), "4 is not square-free", std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_field(6, 12), "12 is not square-free", std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_field(1, 5), "1 is not greater than 1", std::invalid_argument);
    CHECK_THROWS_AS(make_field(-3, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_field(7, 7), std::invalid_argument);
}

TEST_CASE("discriminant of the integral basis") {
    // disc(O_K) = d(√m)·d(√s)·d(√t); the basis matrix is in quarters and
    // disc(1, √m, √s, √t) = 256·mst.
    for (const auto& [p, q] : std::vector<std::pair<Int, Int>>{
             {2, 3}, {2, 5}, {3, 7}, {5, 13}, {5, 21}, {21, 33}, {6, 10}, {7, 13}, {3, 19}, {15, 21}, {6, 118}, {13, 17}, {10, 26}}) {
        CAPTURE(p);
        CAPTURE(q);
        const FieldPtr f = make_field(p, q);
        using Big = boost::multiprecision::cpp_int;
        const Big det = det4(f->basis());
        const Big lhs = det * det * 256 * f->m() * f->s() * f->t();
        const Big rhs = Big(65536) * oracle::quadratic_discriminant(f->m()) *
                        oracle::quadratic_discriminant(f->s()) * oracle::quadratic_discriminant(f->t());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("integrality") {
    const FieldPtr f = make_field(7, 13);
    CHECK(f->is_integral(Quad{2, 0, 2, 0}));
    CHECK_FALSE(f->is_integral(Quad{0, 2, 0, 0}));
    for (Int p : {2, 3, 5, 6, 7}) CHECK(make_field(p, 11)->is_integral(Quad{4, 0, 0, 0}));
    for (const Quad& b : f->basis()) CHECK(f->is_integral(b));
}

TEST_CASE("integrality matches the characteristic polynomial on a box") {
    for (const auto& [p, q] : std::vector<std::pair<Int, Int>>{{2, 3}, {2, 5}, {3, 7}, {5, 13}, {21, 33}, {6, 10}}) {
        const FieldPtr f = make_field(p, q);
        const oracle::Ring ring(f->m(), f->s());
        std::size_t integral = 0;
        for (Int a = -4; a <= 4; ++a)
            for (Int b = -4; b <= 4; ++b)
                for (Int c = -4; c <= 4; ++c)
                    for (Int d = -4; d <= 4; ++d) {
                        const Quad x{a, b, c, d};
                        const bool lib = f->is_integral(x);
                        REQUIRE_MESSAGE(lib == ring.integral(x), f->describe(), " ", format_quad(x));
                        if (lib) {
                            ++integral;
                            CHECK(f->from_basis_coordinates(f->basis_coordinates(x)) == x);
                        }
                    }
        CHECK(integral > 0);
    }
}

TEST_CASE("arithmetic") {
    const FieldPtr f = make_field(7, 13);
    CHECK(f->square(Quad{2, 0, 2, 0}) == Quad{14, 0, 2, 0});
    CHECK(f->square(Quad{4, 4, 0, 0}) == Quad{32, 8, 0, 0});
    const FieldPtr h = make_field(6, 10);
    CHECK(h->mul(Quad{0, 4, 0, 0}, Quad{0, 0, 4, 0}) == Quad{0, 0, 0, 8});
    CHECK(h->mul(Quad{0, 4, 0, 0}, Quad{0, 0, 0, 4}) == Quad{0, 0, 12, 0});
    CHECK(h->mul(Quad{0, 0, 4, 0}, Quad{0, 0, 0, 4}) == Quad{0, 20, 0, 0});

    const Element x = Element::from_halves(f, 1, 0, 1, 0);
    CHECK(square(x) == x * x);
    CHECK(x - x == Element::zero(f));
    CHECK(-x + x == Element::zero(f));
    CHECK_THROWS_AS(x + Element::one(make_field(2, 3)), FieldMismatch);
    CHECK(Element::one(make_field(3, 7)) == Element::one(make_field(7, 21)));
}

TEST_CASE("multiplication is associative and commutative") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const FieldPtr f = props::random_field(rng);
        const Quad x = props::random_integral(*f, rng, 5);
        const Quad y = props::random_integral(*f, rng, 5);
        const Quad z = props::random_integral(*f, rng, 5);
        REQUIRE(f->mul(f->mul(x, y), z) == f->mul(x, f->mul(y, z)));
        REQUIRE(f->mul(x, y) == f->mul(y, x));
        REQUIRE(f->mul(x, y + z) == f->mul(x, y) + f->mul(x, z));
    }
}

TEST_CASE("ring closure") {
    const auto r = props::ring_closure(1000, 12);
    CHECK_MESSAGE(r.ok, r.failure);
}

TEST_CASE("trace") {
    const FieldPtr f = make_field(7, 13);
    CHECK(trace(Element::one(f)) == 4);
    CHECK(trace(Element(f, Quad{0, 4, 0, 0})) == 0);
    const auto r = props::trace_is_a(1000, 13);
    CHECK_MESSAGE(r.ok, r.failure);
}

TEST_CASE("embedding boxes") {
    const FieldPtr f = make_field(7, 13);
    for (unsigned prec : {1u, 8u, 30u, 100u}) {
        const EmbeddingBox zero = embeddings(Element::zero(f), prec);
        const EmbeddingBox one = embeddings(Element::one(f), prec);
        for (int i = 0; i < 4; ++i) {
            CHECK(zero.images[i].contains(0));
            CHECK(one.images[i].contains(1));
            CHECK(zero.images[i].width() <= Rational(1, boost::multiprecision::cpp_int(1) << prec));
        }
    }
    // (5 + 2√6)(5 − 2√6) = 1: the small conjugate still gets a tight box.
    const FieldPtr h = make_field(2, 3);
    const Quad unit{20, 0, 0, 8};
    std::array<Rational, 4> prev{1000, 1000, 1000, 1000};
    for (unsigned prec = 8; prec <= 64; prec *= 2) {
        const EmbeddingBox box = h->embedding_box(unit, prec);
        for (int i = 0; i < 4; ++i) {
            CHECK(box.images[i].width() <= prev[i]);
            prev[i] = box.images[i].width();
        }
        // 5 - 2√6 ≈ 0.10102
        const Interval& small = box.images[1];
        CHECK(small.lo < Rational(10103, 100000));
        CHECK(small.hi > Rational(10101, 100000));
    }
    CHECK_THROWS_AS(embeddings(Element::one(f), 0), std::invalid_argument);
}

TEST_CASE("total positivity") {
    const FieldPtr f = make_field(3, 19);
    CHECK(is_totally_positive(Element::one(f)));
    CHECK_FALSE(is_totally_positive(Element(f, Quad{0, 4, 0, 0})));
    CHECK(is_totally_positive(Element(f, Quad{8, 4, 0, 0})));
    CHECK_FALSE(is_totally_positive(Element::zero(f)));
    CHECK(is_totally_nonneg(Element::zero(f)));

    // Exact signs agree with unbounded interval refinement, including on
    // elements with a conjugate very close to zero.
    std::mt19937_64 rng(14);
    for (int i = 0; i < 1000; ++i) {
        const FieldPtr k = props::random_field(rng);
        Quad x = props::random_integral(*k, rng, 30);
        if (i % 4 == 0) x = k->mul(x, x);
        if (x.is_zero()) continue;
        const auto signs = k->embedding_signs_by_refinement(x);
        for (int j = 0; j < 4; ++j) REQUIRE_MESSAGE(signs[j] == k->embedding_sign(x, j), k->describe(), " ", format_quad(x));
    }
    const FieldPtr h = make_field(2, 3);
    Quad u{20, 0, 0, 8};  // 5 + 2√6
    Quad power = u;
    for (int i = 0; i < 8; ++i) {
        CHECK(h->is_totally_positive(power));
        CHECK_FALSE(h->is_totally_positive(power - h->one()));
        power = h->mul(power, u);
    }
}

TEST_CASE("squares are totally nonnegative with trace at least 4") {
    const auto r = props::squares_nonneg(1000, 15);
    CHECK_MESSAGE(r.ok, r.failure);
}

TEST_CASE("coefficient targets") {
    const FieldPtr f = make_field(7, 13);
    // (80, 8, 8, 0)/4 = 20 + 2√7 + 2√13
    CHECK(coefficient_targets(Element(f, Quad{80, 8, 8, 0})) == std::array<Int, 4>{80, 4, 4, 0});
    CHECK(coefficient_targets(Element(f, Quad{2, 0, 2, 0})) == std::array<Int, 4>{2, 0, 1, 0});
    // (1 + √5 + √13 + √65)/4 has no denominator-2 form.
    CHECK_THROWS_AS(coefficient_targets(Element(make_field(5, 13), Quad{1, 1, 1, 1})), std::invalid_argument);

    // Expanding Σ((a + b√m + c√s + d√t)/2)² satisfies the four equations.
    std::mt19937_64 rng(16);
    std::uniform_int_distribution<Int> coord(-4, 4);
    std::uniform_int_distribution<int> count(1, 6);
    int checked = 0;
    while (checked < 1000) {
        const FieldPtr k = props::random_field(rng);
        std::array<Int, 4> t{};
        Quad sum;
        bool usable = true;
        for (int i = count(rng); i > 0 && usable; --i) {
            const Int a = coord(rng), b = coord(rng), c = coord(rng), d = coord(rng);
            const Quad x{2 * a, 2 * b, 2 * c, 2 * d};
            if (!k->is_integral(x)) {
                usable = false;
                break;
            }
            sum += k->square(x);
            t[0] += a * a + k->m() * b * b + k->s() * c * c + k->t() * d * d;
            t[1] += a * b + (k->s() / k->g()) * c * d;
            t[2] += a * c + (k->m() / k->g()) * b * d;
            t[3] += a * d + k->g() * b * c;
        }
        if (!usable) continue;
        REQUIRE(coefficient_targets(Element(k, sum)) == t);
        ++checked;
    }
}

}  // TEST_SUITE
