#pragma once

#include <vector>

#include "shifteq/chain.hpp"
#include "shifteq/matrix.hpp"

namespace shifteq {

// Vertex-subset ideal of the diagonal coefficient algebra over an index set.
struct IdealSubset {
    IndexSet over;
    std::vector<std::size_t> members;  // strictly increasing

    bool contains(std::size_t v) const;
    bool empty() const { return members.empty(); }
    bool full() const { return members.size() == over.size; }
    std::vector<std::size_t> complement() const;

    friend bool operator==(const IdealSubset& a, const IdealSubset& b) {
        return a.over == b.over && a.members == b.members;
    }
    friend bool operator!=(const IdealSubset& a, const IdealSubset& b) { return !(a == b); }
};

// Sorts, deduplicates and bounds-checks the member list.
IdealSubset make_ideal(const IndexSet& over, std::vector<std::size_t> members);
IdealSubset empty_ideal(const IndexSet& over);
IdealSubset full_ideal(const IndexSet& over);
IdealSubset intersect_ideals(const IdealSubset& a, const IdealSubset& b);

// {v : R_{vw} = 0 for all w outside the ideal} — the largest vertex set whose
// rows act into the ideal's columns.
IdealSubset preimage_ideal(const NatMatrix& r, const IdealSubset& ideal);

// Least fixed point of S -> preimage_ideal(A, S) from the empty set; empty
// exactly when A has no zero rows.
IdealSubset min_fully_invariant(const NatMatrix& a);

// {v : every entry of row v is finite}.
IdealSubset proper_support(const CardMatrix& a);

// A factorization pair after deleting or restricting indices; kept_a / kept_b
// are the surviving subsets of the original index sets of A and B.
struct ReducedPair {
    NatMatrix a, b, r, s;
    IdealSubset kept_a, kept_b;
};

// Deletes the smallest fully invariant ideals of A and B from a pair with
// A = RS, SR = B, then re-verifies the primed equations. The quotiented A and
// B have no zero rows.
ReducedPair quotient_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                          const NatMatrix& s);

// Restricts a pair with A = RS, SR = B to the nonzero-column supports of A and
// B, then re-verifies the corner equations. A pair with full column supports
// is returned unchanged.
ReducedPair full_corner_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                             const NatMatrix& s);

// Repeatedly quotients and corners the chain's steps (with one shared ideal
// per intermediate index set) until every intermediate S_iR_i is essential.
// Endpoints must already be essential and are returned bit-identical; the lag
// is preserved.
SSEChain essentialize_chain(const SSEChain& chain);

// Two-pass finite trim: a forward pass from A keeps the intermediate indices
// with both an in- and an out-connection to the previously kept set, a
// backward pass does the same from B, and the matrices are compressed to the
// unions of the kept sets with surviving ω entries zeroed. The result is
// re-verified exactly; failure raises TrimFailure and indicates a corrupted
// input document.
SSEChain trim_chain(const CardChain& doc);

}  // namespace shifteq
