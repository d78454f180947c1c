#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pythlab/element.hpp"

namespace pythlab {

/// Which family an explicit length-6 candidate comes from. Serialized with
/// `to_string` as "Lemma3.2(i)", "Prop3.3", ..., "Prop4.10".
enum class WitnessSource {
    Lemma32i,
    Lemma32ii,
    Lemma32iii,
    Lemma32iv,
    Prop33,
    Prop34,
    Prop35,
    Prop36,
    Prop37,
    Prop38,
    Prop48,
    Prop49,
    Prop410,
};

std::string_view to_string(WitnessSource source);

enum class WitnessCaveat {
    /// The field is on the list of suspected exceptions; no length claim.
    KnownException,
    /// The family element is still built, but length 6 was established with
    /// some other (unlisted) element for this s; no length claim.
    NotExplicit,
};

std::string_view to_string(WitnessCaveat caveat);

struct WitnessRecord {
    FieldPtr field;
    Element element;
    /// The six roots whose squares sum to `element`, in the order stated.
    std::vector<Element> roots;
    WitnessSource source;
    int expected_length = 6;
    std::optional<WitnessCaveat> caveat;
    /// False when s lies outside the range where the family was checked.
    bool in_verified_range = true;

    /// A length claim is attached only without caveat and inside the range.
    bool claims_length() const noexcept { return !caveat && in_verified_range; }
};

/// Raised for K(6,14), conjectured to have Pythagoras number at most 5.
class KnownExceptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OddBounds {
    Int n = 1;
    Int odd_floor = 1;
    Int odd_ceil = 1;
};

/// Largest odd integer ≤ √n; requires n ≥ 1.
Int odd_floor_sqrt(Int n);
/// Smallest odd integer ≥ √n; requires n ≥ 1.
Int odd_ceil_sqrt(Int n);
OddBounds odd_bounds(Int n);

/// Integer square root, floor(√n).
Int isqrt(Int n);

/// Candidates in K(7, s): s > 7 square-free and prime to 7.
WitnessRecord witness_m7(Int s);
/// Candidates in K(6, s): s > 6 square-free, gcd(6, s) ∈ {1, 2}.
/// Throws KnownExceptionError for s = 14.
WitnessRecord witness_m6(Int s);
/// Candidates in K(3, s): s > 3 square-free, prime to 3, s ∉ {5,7,10,11,13,14}.
WitnessRecord witness_m3(Int s);

/// Dispatches on m ∈ {3, 6, 7}.
WitnessRecord witness(Int m, Int s);

}  // namespace pythlab
