#pragma once

#include <optional>
#include <string>

#include "shifteq/matrix.hpp"
#include "shifteq/pathspace.hpp"

namespace shifteq {

// The tuple (R, S, φ_R, φ_S, ψ_A, ψ_B) witnessing a concrete shift between A
// and B with lag m. Map shapes: φ_R: E_A×E_R → E_R×E_B, φ_S: E_B×E_S → E_S×E_A,
// ψ_A: E_R×E_S → E_A^m, ψ_B: E_S×E_R → E_B^m (powers held as edge tuples).
struct ConcreteShift {
    NatMatrix A, B, R, S;
    Lag m;
    PathIso phi_R, phi_S, psi_A, psi_B;
};

// Outcome of one identity check; `witness` is the first domain path (canonical
// order) on which the two composites disagree, `side` names the identity.
struct CheckResult {
    bool ok = true;
    std::string side;
    std::optional<Path> witness;
};

struct ShiftClassification {
    bool aligned = false;
    bool balanced = false;
    bool compatible = false;
    std::optional<Path> aligned_witness, balanced_witness, compatible_witness;
};

ValidationReport validate_concrete_shift(const ConcreteShift& cs);

CheckResult is_aligned(const ConcreteShift& cs, unsigned threads = 1);
CheckResult is_balanced(const ConcreteShift& cs, unsigned threads = 1);
CheckResult is_compatible(const ConcreteShift& cs, unsigned threads = 1);

// Runs all three validators. On essential A, B a flag disagreement raises
// TheoremViolation: the three conditions are provably equivalent there, so a
// mismatch can only be an implementation bug.
ShiftClassification classify(const ConcreteShift& cs, unsigned threads = 1);

// Lexicographic ψ's, with φ_R := (id_R × ψ_B)(ψ_A⁻¹ × id_R) and
// φ_S := (id_S × ψ_A)(ψ_B⁻¹ × id_S); compatible with lag 1 by construction.
ConcreteShift build_lag1_compatible(const NatMatrix& a, const NatMatrix& b,
                                    const NatMatrix& r, const NatMatrix& s);

// Checks (id_R × φ_S^(ℓ))(φ_R^(ℓ) × id_S) = (ψ_A⁻¹ × id_{A^ℓ})(id_{A^ℓ} × ψ_A)
// at one level 1 ≤ ℓ ≤ m; holds at every level when the shift is aligned and
// A, B are essential. ℓ out of range raises BadLevel.
CheckResult check_intermediate_identity(const ConcreteShift& cs, int level,
                                        unsigned threads = 1);

}  // namespace shifteq
