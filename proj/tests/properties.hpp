#pragma once

// Randomized and exhaustive property checks shared by the unit tests and the
// acceptance runner. Each returns how many cases it ran and the first failure.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pythlab/element.hpp"
#include "pythlab/repr_search.hpp"
#include "pythlab/scanner.hpp"

namespace props {

using namespace pythlab;

struct Result {
    bool ok = true;
    std::size_t cases = 0;
    std::string failure;

    void fail(const std::string& why) {
        if (ok) failure = why;
        ok = false;
    }
};

inline const std::vector<Int>& small_square_free() {
    static const std::vector<Int> values = [] {
        std::vector<Int> v;
        for (Int n = 2; n <= 70; ++n) {
            if (is_square_free(n)) v.push_back(n);
        }
        return v;
    }();
    return values;
}

inline FieldPtr random_field(std::mt19937_64& rng) {
    const auto& pool = small_square_free();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (;;) {
        const Int p = pool[pick(rng)];
        const Int q = pool[pick(rng)];
        if (p != q) return Field::make(p, q);
    }
}

inline Quad random_integral(const Field& f, std::mt19937_64& rng, Int radius) {
    std::uniform_int_distribution<Int> coord(-radius, radius);
    return f.from_basis_coordinates({coord(rng), coord(rng), coord(rng), coord(rng)});
}

inline std::string where(const Field& f, const Quad& x) { return f.describe() + " x=" + format_quad(x); }

inline Result ring_closure(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        const oracle::Ring ring(f->m(), f->s());
        const Quad x = random_integral(*f, rng, 6);
        const Quad y = random_integral(*f, rng, 6);
        const Quad sum = x + y;
        const Quad prod = f->mul(x, y);
        const auto expect = ring.mul(x, y);
        if (!expect || *expect != prod) r.fail("product disagrees with oracle at " + where(*f, x));
        if (!f->is_integral(sum) || !f->is_integral(prod) || !f->is_integral(x - y)) {
            r.fail("ring not closed at " + where(*f, x) + " y=" + format_quad(y));
        }
        if (!ring.integral(prod) || !ring.integral(x)) r.fail("oracle rejects integral element at " + where(*f, x));
    }
    return r;
}

inline Result pair_invariance(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        const std::array<Int, 3> mst{f->m(), f->s(), f->t()};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const FieldPtr h = Field::make(mst[i], mst[j]);
                if (!h->same_field(*f) || h->g() != f->g() || h->basis_type() != f->basis_type() ||
                    h->basis() != f->basis()) {
                    r.fail("descriptor depends on generating pair for " + f->describe());
                }
            }
        }
    }
    return r;
}

inline Result trace_is_a(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        const Quad x = random_integral(*f, rng, 20);
        const Element e(f, x);
        if (trace(e) != x.a) r.fail("trace differs from a at " + where(*f, x));
        const oracle::Ring ring(f->m(), f->s());
        if (oracle::Ring::trace(ring.lift(x)) != x.a) r.fail("oracle trace differs at " + where(*f, x));
        const EmbeddingBox box = embeddings(e, 40);
        Rational mid_sum = 0;
        Rational width = 0;
        for (const Interval& iv : box.images) {
            if (iv.hi < iv.lo) r.fail("inverted interval at " + where(*f, x));
            mid_sum += (iv.lo + iv.hi) / 2;
            width = std::max(width, iv.width());
        }
        if (abs(mid_sum - Rational(x.a)) > 4 * width) r.fail("midpoint sum far from trace at " + where(*f, x));
    }
    return r;
}

inline Result squares_nonneg(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        Quad x = random_integral(*f, rng, 8);
        if (x.is_zero()) x = f->one();
        const Quad sq = f->square(x);
        if (!f->is_totally_nonneg(sq)) r.fail("square not totally nonnegative at " + where(*f, x));
        if (sq.a < 4) r.fail("square with trace below 4 at " + where(*f, x));
    }
    return r;
}

inline Result subadditivity(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    static const std::array<std::array<Int, 2>, 6> fields{{{2, 3}, {7, 13}, {3, 19}, {6, 10}, {5, 13}, {3, 7}}};
    std::uniform_int_distribution<std::size_t> pick_field(0, fields.size() - 1);
    std::uniform_int_distribution<int> count(1, 3);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const auto& fp = fields[pick_field(rng)];
        const FieldPtr f = Field::make(fp[0], fp[1]);
        Quad alpha;
        for (int i = count(rng); i > 0; --i) alpha += f->square(random_integral(*f, rng, 1));
        const Quad x = random_integral(*f, rng, 1);
        const LengthOutcome before = length(Element(f, alpha));
        const LengthOutcome after = length(Element(f, alpha + f->square(x)));
        if (after.kind != LengthKind::Exact || before.kind != LengthKind::Exact) {
            r.fail("sum of squares without exact length at " + where(*f, alpha));
        } else if (after.value > before.value + 1) {
            r.fail("length jumped by more than one at " + where(*f, alpha) + " plus square of " + format_quad(x));
        }
    }
    return r;
}

// Every integral totally nonnegative α with Tr(α) ≤ bound, found by brute
// force, gets the same outcome from length() and from the naive oracle.
inline Result oracle_equivalence(Int p, Int q, Int bound) {
    const FieldPtr f = Field::make(p, q);
    const oracle::Ring ring(f->m(), f->s());
    const oracle::SquareTable table = oracle::squares_up_to(ring, f->t(), bound);
    Result r;
    auto compare = [&](const Quad& alpha) {
        ++r.cases;
        const int naive = oracle::naive_length(ring, table, alpha);
        const LengthOutcome got = length(Element(f, alpha));
        const bool same = naive >= 0 ? got.is_exact(naive)
                                     : (naive == -1 ? got.kind == LengthKind::NotSumOfSquares
                                                    : got.kind == LengthKind::NotTotallyNonneg);
        if (!same) {
            r.fail("length mismatch at " + where(*f, alpha) + ": naive " + std::to_string(naive) + ", got " +
                   got.to_string());
        }
    };
    compare(Quad{});
    for (Int a = 1; a <= bound; ++a) {
        for (const Quad& alpha : oracle::brute_totally_positive(ring, a)) compare(alpha);
    }
    return r;
}

inline Result parallel_determinism(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Int> bound(4, 32);
    std::uniform_int_distribution<unsigned> threads(2, 4);
    std::uniform_int_distribution<int> cap(4, 7);
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        const ScanConfig config{bound(rng), cap(rng), 3};
        const std::string seq = scan_lengths(f, config, 1).to_jsonl();
        const std::string par = scan_lengths(f, config, threads(rng)).to_jsonl();
        if (seq != par) r.fail("parallel report differs for " + f->describe());
    }
    return r;
}

inline Result resume_identity(std::size_t n, std::uint64_t seed, const std::filesystem::path& dir) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Int> bound(4, 32);
    std::uniform_int_distribution<unsigned> threads(1, 3);
    std::filesystem::create_directories(dir);
    const std::filesystem::path ckpt = dir / "resume.ckpt";
    Result r;
    for (; r.cases < n; ++r.cases) {
        const FieldPtr f = random_field(rng);
        const ScanConfig config{bound(rng), 7, 3};
        const std::string whole = scan_lengths(f, config, 1).to_jsonl();
        std::uniform_int_distribution<Int> cut(0, config.trace_bound - 1);
        Scanner first(f, config, threads(rng));
        first.run(cut(rng), nullptr);
        first.save_checkpoint(ckpt);
        Scanner second = Scanner::resume(f, config, ckpt, threads(rng));
        second.run();
        if (second.report().to_jsonl() != whole) r.fail("resumed report differs for " + f->describe());
    }
    std::filesystem::remove(ckpt);
    return r;
}

}  // namespace props
