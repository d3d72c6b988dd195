#pragma once

#include <vector>

#include "shifteq/matrix.hpp"

namespace shifteq {

// A correspondence over direct sums of compacts, up to unitary equivalence:
// one Hilbert-space dimension per index on each side, and a cardinal
// multiplicity matrix between the two sides.
struct CorrDescriptor {
    std::vector<Card> left_dims;   // one per row index; positive or ω
    std::vector<Card> right_dims;  // one per column index; positive or ω
    CardMatrix mult;

    friend bool operator==(const CorrDescriptor& x, const CorrDescriptor& y) {
        return x.left_dims == y.left_dims && x.right_dims == y.right_dims &&
               x.mult == y.mult;
    }
    friend bool operator!=(const CorrDescriptor& x, const CorrDescriptor& y) {
        return !(x == y);
    }
};

// Structural facts about a descriptor, all read off the multiplicity matrix.
struct DescriptorTraits {
    bool injective = false;  // no zero row
    bool proper = false;     // every multiplicity finite
    bool full = false;       // no zero column
    bool regular = false;    // injective and proper
    bool essential_underlying = false;  // multiplicity matrix is essential
};

// Raises InvariantViolation unless the dimension lists match the
// multiplicity matrix and every dimension is positive.
void require_descriptor(const CorrDescriptor& x);

// Wraps a matrix as the descriptor of its graph correspondence: every
// Hilbert-space dimension is one and the matrix itself is the multiplicity.
CorrDescriptor descriptor_from_matrix(const NatMatrix& a);
CorrDescriptor descriptor_from_matrix(const CardMatrix& a);

// Internal tensor product over the shared middle algebra. Multiplicities
// multiply as matrices; the Hilbert-space dimensions never enter them.
// Raises IncompatibleIndexSets when the middle algebras differ.
CorrDescriptor tensor_descriptor(const CorrDescriptor& x, const CorrDescriptor& y);

// Unitary equivalence test. Defined only over the same pair of algebras
// (same index sets and the same dimensions on both sides); within one,
// descriptors are equivalent exactly when the multiplicities agree.
// Raises IncompatibleIndexSets when the algebras differ.
bool descriptors_isomorphic(const CorrDescriptor& x, const CorrDescriptor& y);

DescriptorTraits descriptor_predicates(const CorrDescriptor& x);

}  // namespace shifteq
