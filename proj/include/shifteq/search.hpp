#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shifteq/chain.hpp"
#include "shifteq/matrix.hpp"
#include "shifteq/numeric.hpp"
#include "shifteq/shifts.hpp"

namespace shifteq {

// Search verdicts. NONE is only returned together with a complete argument
// (an invariant mismatch, or exhaustion below a derived bound); whenever the
// entry cap or the node budget clips the space, failure degrades to UNKNOWN.
enum class SearchStatus { FOUND, NONE, UNKNOWN };

std::string status_name(SearchStatus status);

// Caps for the bounded searches: entry_cap limits every enumerated matrix
// entry, inner_min..inner_max the intermediate index-set sizes tried by the
// chain search, max_lag the chain length and lag sweep, and node_budget the
// number of assignment attempts before the search gives up with UNKNOWN.
struct SearchCaps {
    Nat entry_cap = 8;
    std::size_t inner_min = 1;
    std::size_t inner_max = 4;
    int max_lag = 4;
    std::uint64_t node_budget = 2000000;
};

// Matrices R (over V x W) and S (over W x V) satisfying the lag-m relations
// A^m = RS, SR = B^m, AR = RB, BS = SA.
struct SEWitness {
    NatMatrix r, s;
    Lag m;
};

// Result of one search. On FOUND exactly one witness field is populated,
// matching the operation that produced it; certificate carries the bound
// argument behind a NONE and the reason behind an UNKNOWN.
struct SearchOutcome {
    SearchStatus status = SearchStatus::UNKNOWN;
    std::optional<SSEChain> chain;
    std::optional<SEWitness> se;
    std::optional<ConcreteShift> shift;
    std::string certificate;
};

// Searches for R, S with A = RS and SR = B; the inner index set is forced to
// be B's. Any solution normalizes to one with entries at most
// max(max_entry(A), max_entry(B)), so exhaustion below that bound is a
// certified NONE; values ascend, making the first hit deterministic.
SearchOutcome factor_elementary(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps);

// Searches for a lag-m witness of the four relations above. Entry bounds are
// derived from the rows of A^m and B^m when both matrices are essential;
// otherwise only entry_cap applies and exhaustion is UNKNOWN.
SearchOutcome search_se(const NatMatrix& a, const NatMatrix& b, Lag m, const SearchCaps& caps);

// Runs search_se for m = 1..max_lag and returns the first FOUND; otherwise
// UNKNOWN if any lag was inconclusive, else NONE with the per-lag arguments.
SearchOutcome search_se_sweep(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps);

// Iterative-deepening search for a chain from A to B of length at most
// max_lag with intermediate index sets sized inner_min..inner_max. Beyond the
// trace invariant a failed search is always UNKNOWN: intermediate entries
// admit no derived bound, so the entry cap always clips the space.
SearchOutcome search_sse_chain(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps);

// Given matrices satisfying the lag-m relations, searches for path
// isomorphisms completing them to a concrete shift that classifies all-true.
// psi_A and psi_B are enumerated endpoint class by endpoint class; phi_R and
// phi_S are then solved pointwise against the identities they must satisfy.
SearchOutcome search_aligned(const NatMatrix& a, const NatMatrix& b, Lag m, const NatMatrix& r,
                             const NatMatrix& s, const SearchCaps& caps);

}  // namespace shifteq
