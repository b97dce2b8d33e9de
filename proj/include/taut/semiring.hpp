#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace taut {

// Element of the polycyclic monoid of some rank, in normal form
// g_{i1}^-1 ... g_{ik}^-1 g_{j1} ... g_{jl}, or the absorbing zero.
struct PolyElem {
    bool zero = false;
    std::string neg;  // inverse-generator word (indices as bytes)
    std::string pos;  // generator word (indices as bytes)

    static PolyElem make_zero() {
        PolyElem p;
        p.zero = true;
        return p;
    }
    static PolyElem identity() { return PolyElem{}; }

    bool is_identity() const { return !zero && neg.empty() && pos.empty(); }
    auto operator<=>(const PolyElem&) const = default;
};

// Product with interface cancellation: g_i g_i^-1 = 1, g_i g_j^-1 = 0 (i != j).
PolyElem poly_mul(const PolyElem& p, const PolyElem& q);

// Finite set of nonzero polycyclic elements; the carrier of the valence semiring
// P_omega(- x M) applied to a one-element set.
using PolySet = std::vector<PolyElem>;  // sorted, unique, no zero member

PolySet polyset_normalize(PolySet s);

// Runtime semiring value. Nat uses unsigned 64-bit; real is nonnegative double.
using Scalar = std::variant<bool, uint64_t, double, PolySet>;

struct SemiringOps {
    std::string name;  // bool | nat | real | polyset(<rank>)
    int poly_rank = 0; // generator count when name is polyset(...)
    Scalar zero;
    Scalar one;
    bool is_idempotent = false;

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    bool eq(const Scalar& a, const Scalar& b) const;  // 1e-9 tolerance for real
    bool is_zero(const Scalar& a) const { return eq(a, zero); }
    // natural order b <= c iff b + c = c; total answer only for idempotent instances
    bool leq(const Scalar& a, const Scalar& b) const;

    std::string print(const Scalar& a) const;
    Scalar parse(const std::string& text) const;
};

SemiringOps bool_semiring();
SemiringOps nat_semiring();
SemiringOps real_semiring();
// Finite subsets of the polycyclic monoid of the given rank (idempotent).
SemiringOps polyset_semiring(int rank);

// Lookup by name: bool | nat | real | polyset(<rank>).
SemiringOps semiring_by_name(const std::string& name);

std::string poly_print(const PolyElem& p);
// Parse forms like "1", "0", "g1 g2'": generator gi, inverse gi' (1-based indices).
PolyElem poly_parse(const std::string& text, int rank);

}  // namespace taut
