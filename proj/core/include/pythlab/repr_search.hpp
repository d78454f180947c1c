#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pythlab/element.hpp"

namespace pythlab {

/// Every sum of squares in O_K of a totally real biquadratic field is a sum
/// of at most this many squares, so a failed search up to it is a proof
/// that the element is not a sum of squares at all.
inline constexpr int kPythagorasBound = 7;

/// α = Σ x_i², items canonical-signed, ordered by non-increasing Tr(x_i²)
/// then lexicographically by coordinates.
struct Representation {
    FieldPtr field;
    std::vector<Element> items;

    std::size_t size() const noexcept { return items.size(); }
    std::string to_string() const;
    friend bool operator==(const Representation& x, const Representation& y) { return x.items == y.items; }
};

enum class LengthKind { Exact, ExceedsCap, NotSumOfSquares, NotTotallyNonneg };

std::string_view to_string(LengthKind kind);

struct LengthOutcome {
    LengthKind kind = LengthKind::NotTotallyNonneg;
    /// k for Exact, the cap for ExceedsCap, unused otherwise.
    int value = 0;
    std::optional<Representation> witness;

    bool is_exact(int k) const noexcept { return kind == LengthKind::Exact && value == k; }
    std::string to_string() const;
};

struct RepresentationList {
    std::vector<Representation> reps;
    bool truncated = false;
};

/// Depth-first search for sums of squares of one fixed target α.
///
/// The candidate roots are all canonical-signed nonzero integral x with
/// α − x² totally nonnegative, sorted by decreasing Tr(x²) (ties by
/// coordinates). Multisets are visited as non-decreasing index sequences.
/// Pruning uses only:
///   - a nonzero remainder needs trace ≥ 4 (every nonzero square has it);
///   - k more squares, each no larger in trace than the last one picked,
///     cannot exceed k times that trace;
///   - the remainder must stay totally nonnegative.
/// Failures are memoized on (remainder, budget) with the smallest start
/// index that failed.
class RepresentationSearch {
public:
    /// Requires α integral and totally nonnegative.
    RepresentationSearch(const Field& field, const Quad& alpha);

    const std::vector<Quad>& roots() const noexcept { return roots_; }
    const std::vector<Quad>& squares() const noexcept { return squares_; }

    /// True iff α is a sum of at most k nonzero squares; on success `picks`
    /// receives candidate indices.
    bool decide(int k, std::vector<int>* picks = nullptr);

    /// Visits every multiset of at most `max_squares` squares summing to α.
    /// Stops after `limit` solutions; returns true if that cut anything off.
    template <class Fn>
    bool enumerate(int max_squares, std::size_t limit, Fn&& fn) {
        std::vector<int> path;
        std::size_t emitted = 0;
        bool truncated = false;
        enumerate_rec(alpha_, max_squares, 0, path, limit, emitted, truncated,
                      [&](const std::vector<int>& p) { fn(p); });
        return truncated;
    }

    std::uint64_t nodes_visited() const noexcept { return nodes_; }

private:
    struct MemoKey {
        Quad rem;
        int budget;
        friend bool operator==(const MemoKey&, const MemoKey&) = default;
    };
    struct MemoHash {
        std::size_t operator()(const MemoKey& k) const noexcept {
            return QuadHash{}(k.rem) * 31u + static_cast<std::size_t>(k.budget);
        }
    };
    using Memo = std::unordered_map<MemoKey, int, MemoHash>;

    std::size_t first_fitting(Int trace) const noexcept;
    int square_index(const Quad& q) const noexcept;
    bool decide_rec(const Quad& rem, int k, std::size_t start, std::vector<int>& picks);

    template <class Emit>
    bool enumerate_rec(const Quad& rem, int k, std::size_t start, std::vector<int>& path, std::size_t limit,
                       std::size_t& emitted, bool& truncated, const Emit& emit);

    const Field& field_;
    Quad alpha_;
    std::vector<Quad> roots_;
    std::vector<Quad> squares_;
    std::vector<Int> traces_;
    std::unordered_map<Quad, int, QuadHash> index_of_square_;
    Memo decide_memo_;
    Memo enumerate_memo_;
    std::uint64_t nodes_ = 0;
};

/// All canonical-signed nonzero integral x with α − x² totally nonnegative.
std::vector<Element> enumerate_dominated_squares(const Element& alpha);

bool is_sum_of_at_most(const Element& alpha, int k);
std::optional<Representation> find_sum_of_at_most(const Element& alpha, int k);

/// Exact length with the search capped at `cap` squares. With cap ≥ 7 a
/// failed search means "not a sum of squares"; below 7 it only means the
/// cap was exceeded.
LengthOutcome length(const Element& alpha, int cap = kPythagorasBound);

RepresentationList all_representations(const Element& alpha, int max_squares, std::size_t limit = 1000);

bool verify_representation(const Element& alpha, std::span<const Element> roots);

// ---------------------------------------------------------------------------

template <class Emit>
bool RepresentationSearch::enumerate_rec(const Quad& rem, int k, std::size_t start, std::vector<int>& path,
                                         std::size_t limit, std::size_t& emitted, bool& truncated,
                                         const Emit& emit) {
    ++nodes_;
    if (rem.is_zero()) {
        if (emitted >= limit) {
            truncated = true;
            return true;
        }
        ++emitted;
        emit(path);
        return true;
    }
    if (k == 0 || rem.a < 4 || start >= squares_.size()) return false;
    if (rem.a > static_cast<Int>(k) * traces_[start]) return false;
    if (k == 1) {
        const int idx = square_index(rem);
        if (idx < 0 || static_cast<std::size_t>(idx) < start) return false;
        path.push_back(idx);
        enumerate_rec(Quad{}, 0, 0, path, limit, emitted, truncated, emit);
        path.pop_back();
        return true;
    }
    const MemoKey key{rem, k};
    if (auto it = enumerate_memo_.find(key); it != enumerate_memo_.end() && start >= static_cast<std::size_t>(it->second)) {
        return false;
    }
    bool found = false;
    for (std::size_t i = std::max(start, first_fitting(rem.a)); i < squares_.size(); ++i) {
        if (static_cast<Int>(k) * traces_[i] < rem.a) break;
        const Quad diff = rem - squares_[i];
        if (!diff.is_zero() && (diff.a < 4 || !field_.is_totally_positive(diff))) continue;
        path.push_back(static_cast<int>(i));
        found |= enumerate_rec(diff, k - 1, i, path, limit, emitted, truncated, emit);
        path.pop_back();
        if (truncated) return found;
    }
    if (!found) {
        auto [it, inserted] = enumerate_memo_.try_emplace(key, static_cast<int>(start));
        if (!inserted && static_cast<int>(start) < it->second) it->second = static_cast<int>(start);
    }
    return found;
}

}  // namespace pythlab
