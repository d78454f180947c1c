#include "pythlab/element.hpp"

namespace pythlab {

Element::Element(FieldPtr field, Quad coords) : field_(std::move(field)), q_(coords) {
    if (!field_) throw std::invalid_argument("element requires a field");
}

Element Element::parse(FieldPtr field, std::string_view text) { return Element(std::move(field), parse_quad(text)); }

Element Element::from_halves(FieldPtr field, Int a, Int b, Int c, Int d) {
    return Element(std::move(field), Quad{2 * a, 2 * b, 2 * c, 2 * d});
}

void require_same_field(const Element& x, const Element& y) {
    if (!x.field().same_field(y.field())) {
        throw FieldMismatch("elements belong to different fields: " + x.field().describe() + " vs " +
                            y.field().describe());
    }
}

Element operator+(const Element& x, const Element& y) {
    require_same_field(x, y);
    return Element(x.field_ptr(), x.coords() + y.coords());
}

Element operator-(const Element& x, const Element& y) {
    require_same_field(x, y);
    return Element(x.field_ptr(), x.coords() - y.coords());
}

Element operator-(const Element& x) { return Element(x.field_ptr(), -x.coords()); }

Element operator*(const Element& x, const Element& y) {
    require_same_field(x, y);
    return Element(x.field_ptr(), x.field().mul(x.coords(), y.coords()));
}

Element square(const Element& x) { return Element(x.field_ptr(), x.field().square(x.coords())); }

FieldPtr make_field(Int p, Int q) { return Field::make(p, q); }

bool is_integral(const Element& x) { return x.field().is_integral(x.coords()); }

EmbeddingBox embeddings(const Element& x, unsigned precision) {
    if (precision == 0) throw std::invalid_argument("precision must be positive");
    return x.field().embedding_box(x.coords(), precision);
}

bool is_totally_positive(const Element& x) { return x.field().is_totally_positive(x.coords()); }

bool is_totally_nonneg(const Element& x) { return x.field().is_totally_nonneg(x.coords()); }

std::array<Int, 4> coefficient_targets(const Element& x) {
    const Quad& q = x.coords();
    if (!is_integral(x)) {
        throw std::invalid_argument("coefficient_targets: " + format_quad(q) + " is not integral");
    }
    if (q.a % 2 != 0 || q.b % 2 != 0 || q.c % 2 != 0 || q.d % 2 != 0) {
        throw std::invalid_argument("coefficient_targets: " + format_quad(q) +
                                    " has an odd quarter-coordinate (no denominator-2 form)");
    }
    return {q.a, q.b / 2, q.c / 2, q.d / 2};
}

}  // namespace pythlab
