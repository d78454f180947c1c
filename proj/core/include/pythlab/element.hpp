#pragma once

#include <array>
#include <string>
#include <string_view>

#include "pythlab/field.hpp"

namespace pythlab {

/// Thrown when operands belong to different fields.
class FieldMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An element of a biquadratic field. Immutable value; shares the field.
class Element {
public:
    Element(FieldPtr field, Quad coords);

    static Element zero(FieldPtr field) { return Element(std::move(field), Quad{}); }
    static Element one(FieldPtr field) { return Element(std::move(field), Quad{4, 0, 0, 0}); }
    /// Parses "a,b,c,d".
    static Element parse(FieldPtr field, std::string_view text);
    /// (a + b√m + c√s + d√t) / 2, the half-coordinate form used in hand expansions.
    static Element from_halves(FieldPtr field, Int a, Int b, Int c, Int d);
    static Element integer(FieldPtr field, Int n) { return Element(std::move(field), Quad{4 * n, 0, 0, 0}); }

    const Field& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    const Quad& coords() const noexcept { return q_; }
    bool is_zero() const noexcept { return q_.is_zero(); }

    std::string to_string() const { return format_quad(q_); }

    friend bool operator==(const Element& x, const Element& y) {
        return x.field_->same_field(*y.field_) && x.q_ == y.q_;
    }

private:
    FieldPtr field_;
    Quad q_;
};

Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator-(const Element& x);
Element operator*(const Element& x, const Element& y);

inline Element add(const Element& x, const Element& y) { return x + y; }
inline Element sub(const Element& x, const Element& y) { return x - y; }
inline Element neg(const Element& x) { return -x; }
inline Element mul(const Element& x, const Element& y) { return x * y; }
Element square(const Element& x);

FieldPtr make_field(Int p, Int q);

bool is_integral(const Element& x);

/// Tr(x) = 4 × rational coordinate = the quarter-coordinate a.
inline Int trace(const Element& x) { return x.coords().a; }

EmbeddingBox embeddings(const Element& x, unsigned precision);

bool is_totally_positive(const Element& x);
bool is_totally_nonneg(const Element& x);

/// Right-hand sides (T0, T1, T2, T3) of the coefficient system obtained by
/// writing x = Σ((a_i + b_i√m + c_i√s + d_i√t)/2)²:
///   Σa² + mΣb² + sΣc² + tΣd² = T0
///   Σab + (s/g)Σcd          = T1
///   Σac + (m/g)Σbd          = T2
///   Σad + gΣbc              = T3
/// Throws std::invalid_argument if x is not integral or has an odd
/// quarter-coordinate.
std::array<Int, 4> coefficient_targets(const Element& x);

void require_same_field(const Element& x, const Element& y);

}  // namespace pythlab
