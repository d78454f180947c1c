#include "pythlab/repr_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pythlab/region.hpp"

namespace pythlab {

namespace {

void require_integral(const Element& alpha, const char* op) {
    if (!is_integral(alpha)) {
        throw std::invalid_argument(std::string(op) + ": element " + alpha.to_string() + " is not integral");
    }
}

std::vector<Quad> dominated_roots(const Field& field, const Quad& alpha) {
    // σ_i(x)² ≤ σ_i(α) gives |4σ_i(x)| ≤ 2·√(4σ_i(α)).
    const auto scaled = field.scaled_embeddings(alpha);
    EmbeddingRegion region;
    for (int i = 0; i < 4; ++i) {
        const double bound = 2.0 * std::sqrt(std::max(0.0, scaled[i])) * (1.0 + 1e-12) + 1e-9;
        region.lo[i] = -bound;
        region.hi[i] = bound;
    }
    std::vector<Quad> out;
    for_each_quad_in_region(field, region, [&](const Quad& x) {
        if (x.is_zero() || canonical_sign(x) != x) return;
        if (!field.is_integral(x)) return;
        const Quad rest = alpha - field.square(x);
        if (rest.is_zero() || field.is_totally_positive(rest)) out.push_back(x);
    });
    return out;
}

Representation make_representation(const FieldPtr& field, const std::vector<Quad>& roots,
                                   const std::vector<int>& picks) {
    Representation rep{field, {}};
    rep.items.reserve(picks.size());
    for (int i : picks) rep.items.emplace_back(field, roots[static_cast<std::size_t>(i)]);
    return rep;
}

}  // namespace

std::string_view to_string(LengthKind kind) {
    switch (kind) {
        case LengthKind::Exact: return "exact";
        case LengthKind::ExceedsCap: return "exceeds_cap";
        case LengthKind::NotSumOfSquares: return "not_sum_of_squares";
        case LengthKind::NotTotallyNonneg: return "not_totally_nonneg";
    }
    return "?";
}

std::string Representation::to_string() const {
    if (items.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << " + ";
        os << '[' << items[i].to_string() << "]^2";
    }
    return os.str();
}

std::string LengthOutcome::to_string() const {
    switch (kind) {
        case LengthKind::Exact: return "length = " + std::to_string(value);
        case LengthKind::ExceedsCap: return "length > " + std::to_string(value);
        case LengthKind::NotSumOfSquares: return "not a sum of squares";
        case LengthKind::NotTotallyNonneg: return "not totally nonnegative";
    }
    return "?";
}

RepresentationSearch::RepresentationSearch(const Field& field, const Quad& alpha) : field_(field), alpha_(alpha) {
    if (!field.is_integral(alpha)) {
        throw std::invalid_argument("representation search: " + format_quad(alpha) + " is not integral");
    }
    if (!field.is_totally_nonneg(alpha)) {
        throw std::invalid_argument("representation search: " + format_quad(alpha) + " is not totally nonnegative");
    }
    std::vector<Quad> roots = dominated_roots(field, alpha);
    std::vector<std::pair<Quad, Quad>> pairs;
    pairs.reserve(roots.size());
    for (const Quad& x : roots) pairs.emplace_back(field.square(x), x);
    std::sort(pairs.begin(), pairs.end(), [](const auto& l, const auto& r) {
        if (l.first.a != r.first.a) return l.first.a > r.first.a;
        return l.second < r.second;
    });
    roots_.reserve(pairs.size());
    squares_.reserve(pairs.size());
    traces_.reserve(pairs.size());
    for (const auto& [sq, x] : pairs) {
        index_of_square_.emplace(sq, static_cast<int>(squares_.size()));
        roots_.push_back(x);
        squares_.push_back(sq);
        traces_.push_back(sq.a);
    }
}

std::size_t RepresentationSearch::first_fitting(Int trace) const noexcept {
    const auto it = std::partition_point(traces_.begin(), traces_.end(), [trace](Int t) { return t > trace; });
    return static_cast<std::size_t>(it - traces_.begin());
}

int RepresentationSearch::square_index(const Quad& q) const noexcept {
    const auto it = index_of_square_.find(q);
    return it == index_of_square_.end() ? -1 : it->second;
}

bool RepresentationSearch::decide(int k, std::vector<int>* picks) {
    if (k < 0) throw std::invalid_argument("square budget must be nonnegative");
    std::vector<int> local;
    const bool ok = decide_rec(alpha_, k, 0, local);
    if (ok && picks) *picks = std::move(local);
    return ok;
}

bool RepresentationSearch::decide_rec(const Quad& rem, int k, std::size_t start, std::vector<int>& picks) {
    ++nodes_;
    if (rem.is_zero()) return true;
    if (k == 0 || rem.a < 4 || start >= squares_.size()) return false;
    if (rem.a > static_cast<Int>(k) * traces_[start]) return false;
    if (k == 1) {
        const int idx = square_index(rem);
        if (idx < 0 || static_cast<std::size_t>(idx) < start) return false;
        picks.push_back(idx);
        return true;
    }
    const MemoKey key{rem, k};
    if (auto it = decide_memo_.find(key); it != decide_memo_.end() && start >= static_cast<std::size_t>(it->second)) {
        return false;
    }
    for (std::size_t i = std::max(start, first_fitting(rem.a)); i < squares_.size(); ++i) {
        if (static_cast<Int>(k) * traces_[i] < rem.a) break;
        const Quad diff = rem - squares_[i];
        if (diff.is_zero()) {
            picks.push_back(static_cast<int>(i));
            return true;
        }
        if (k == 2) {
            // A square in the table is automatically dominated; skip the
            // positivity test.
            const int j = square_index(diff);
            if (j >= static_cast<int>(i)) {
                picks.push_back(static_cast<int>(i));
                picks.push_back(j);
                return true;
            }
            continue;
        }
        if (diff.a < 4 || !field_.is_totally_positive(diff)) continue;
        picks.push_back(static_cast<int>(i));
        if (decide_rec(diff, k - 1, i, picks)) return true;
        picks.pop_back();
    }
    auto [it, inserted] = decide_memo_.try_emplace(key, static_cast<int>(start));
    if (!inserted && static_cast<int>(start) < it->second) it->second = static_cast<int>(start);
    return false;
}

std::vector<Element> enumerate_dominated_squares(const Element& alpha) {
    require_integral(alpha, "enumerate_dominated_squares");
    if (!is_totally_nonneg(alpha)) {
        throw std::invalid_argument("enumerate_dominated_squares: " + alpha.to_string() +
                                    " is not totally nonnegative");
    }
    RepresentationSearch search(alpha.field(), alpha.coords());
    std::vector<Element> out;
    out.reserve(search.roots().size());
    for (const Quad& x : search.roots()) out.emplace_back(alpha.field_ptr(), x);
    return out;
}

std::optional<Representation> find_sum_of_at_most(const Element& alpha, int k) {
    require_integral(alpha, "is_sum_of_at_most");
    if (k < 0) throw std::invalid_argument("is_sum_of_at_most: k must be nonnegative");
    if (alpha.is_zero()) return Representation{alpha.field_ptr(), {}};
    if (!is_totally_positive(alpha)) return std::nullopt;
    RepresentationSearch search(alpha.field(), alpha.coords());
    std::vector<int> picks;
    if (!search.decide(k, &picks)) return std::nullopt;
    return make_representation(alpha.field_ptr(), search.roots(), picks);
}

bool is_sum_of_at_most(const Element& alpha, int k) { return find_sum_of_at_most(alpha, k).has_value(); }

LengthOutcome length(const Element& alpha, int cap) {
    require_integral(alpha, "length");
    if (cap < 0) throw std::invalid_argument("length: cap must be nonnegative");
    if (alpha.is_zero()) return {LengthKind::Exact, 0, Representation{alpha.field_ptr(), {}}};
    if (!is_totally_positive(alpha)) return {LengthKind::NotTotallyNonneg, 0, std::nullopt};
    RepresentationSearch search(alpha.field(), alpha.coords());
    std::vector<int> picks;
    for (int k = 1; k <= cap; ++k) {
        if (search.decide(k, &picks)) {
            return {LengthKind::Exact, k, make_representation(alpha.field_ptr(), search.roots(), picks)};
        }
    }
    if (cap >= kPythagorasBound) return {LengthKind::NotSumOfSquares, 0, std::nullopt};
    return {LengthKind::ExceedsCap, cap, std::nullopt};
}

RepresentationList all_representations(const Element& alpha, int max_squares, std::size_t limit) {
    require_integral(alpha, "all_representations");
    if (limit == 0) throw std::invalid_argument("all_representations: limit must be positive");
    if (max_squares < 0) throw std::invalid_argument("all_representations: max_squares must be nonnegative");
    if (!is_totally_nonneg(alpha)) {
        throw std::invalid_argument("all_representations: " + alpha.to_string() + " is not totally nonnegative");
    }
    RepresentationList out;
    if (alpha.is_zero()) {
        out.reps.push_back(Representation{alpha.field_ptr(), {}});
        return out;
    }
    RepresentationSearch search(alpha.field(), alpha.coords());
    out.truncated = search.enumerate(max_squares, limit, [&](const std::vector<int>& picks) {
        out.reps.push_back(make_representation(alpha.field_ptr(), search.roots(), picks));
    });
    return out;
}

bool verify_representation(const Element& alpha, std::span<const Element> roots) {
    Quad sum;
    for (const Element& x : roots) {
        require_same_field(alpha, x);
        if (!is_integral(x)) {
            throw std::invalid_argument("verify_representation: root " + x.to_string() + " is not integral");
        }
        sum += alpha.field().square(x.coords());
    }
    return sum == alpha.coords();
}

}  // namespace pythlab
