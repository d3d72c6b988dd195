#include "shifteq/reduction.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <string>

namespace shifteq {

namespace {

IndexSet restrict_set(const IndexSet& s, std::size_t kept) {
    if (kept == s.size) return s;
    return IndexSet{s.name + "'", kept};
}

std::vector<std::size_t> all_positions(std::size_t n) {
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

std::vector<std::size_t> nonzero_column_support(const NatMatrix& a) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < a.n_cols(); ++j)
        if (!a.col_is_zero(j)) out.push_back(j);
    return out;
}

void require_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                  const NatMatrix& s) {
    if (!a.is_square()) throw NotSquare("A is not square");
    if (!b.is_square()) throw NotSquare("B is not square");
    if (r.rows() != a.rows() || r.cols() != b.rows() || s.rows() != b.rows() ||
        s.cols() != a.rows())
        throw IncompatibleIndexSets("R must be indexed by A's set times B's set and S the other way");
    if (mat_mul(r, s) != a || mat_mul(s, r) != b)
        throw NotAFactorization("pair does not satisfy A = RS and SR = B");
}

ReducedPair restrict_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                          const NatMatrix& s, IdealSubset kept_a, IdealSubset kept_b,
                          const char* what) {
    IndexSet va = restrict_set(a.rows(), kept_a.members.size());
    IndexSet wb = restrict_set(b.rows(), kept_b.members.size());
    ReducedPair out{a.submatrix(kept_a.members, kept_a.members, va, va),
                    b.submatrix(kept_b.members, kept_b.members, wb, wb),
                    r.submatrix(kept_a.members, kept_b.members, va, wb),
                    s.submatrix(kept_b.members, kept_a.members, wb, va),
                    std::move(kept_a),
                    std::move(kept_b)};
    if (mat_mul(out.r, out.s) != out.a || mat_mul(out.s, out.r) != out.b)
        throw VerificationFailure(std::string(what) + " equations failed to close");
    return out;
}

}  // namespace

bool IdealSubset::contains(std::size_t v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

std::vector<std::size_t> IdealSubset::complement() const {
    std::vector<std::size_t> out;
    out.reserve(over.size - members.size());
    std::size_t k = 0;
    for (std::size_t v = 0; v < over.size; ++v) {
        if (k < members.size() && members[k] == v) {
            ++k;
            continue;
        }
        out.push_back(v);
    }
    return out;
}

IdealSubset make_ideal(const IndexSet& over, std::vector<std::size_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.back() >= over.size)
        throw InvariantViolation("ideal member out of range for " + over.describe());
    return IdealSubset{over, std::move(members)};
}

IdealSubset empty_ideal(const IndexSet& over) { return IdealSubset{over, {}}; }

IdealSubset full_ideal(const IndexSet& over) {
    return IdealSubset{over, all_positions(over.size)};
}

IdealSubset intersect_ideals(const IdealSubset& a, const IdealSubset& b) {
    if (a.over != b.over)
        throw IncompatibleIndexSets("cannot intersect ideals over " + a.over.describe() +
                                    " and " + b.over.describe());
    std::vector<std::size_t> out;
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                          b.members.end(), std::back_inserter(out));
    return IdealSubset{a.over, std::move(out)};
}

IdealSubset preimage_ideal(const NatMatrix& r, const IdealSubset& ideal) {
    if (r.cols() != ideal.over)
        throw IncompatibleIndexSets("preimage needs an ideal over the matrix's column set");
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < r.n_rows(); ++v) {
        bool maps_in = true;
        for (std::size_t w = 0; w < r.n_cols() && maps_in; ++w)
            if (r.at(v, w) != 0 && !ideal.contains(w)) maps_in = false;
        if (maps_in) out.push_back(v);
    }
    return IdealSubset{r.rows(), std::move(out)};
}

IdealSubset min_fully_invariant(const NatMatrix& a) {
    if (!a.is_square()) throw NotSquare("fully invariant ideals need a square matrix");
    IdealSubset cur = empty_ideal(a.rows());
    for (;;) {
        IdealSubset next = preimage_ideal(a, cur);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

IdealSubset proper_support(const CardMatrix& a) {
    if (!a.is_square()) throw NotSquare("proper support needs a square matrix");
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < a.n_rows(); ++v) {
        bool finite_row = true;
        for (std::size_t w = 0; w < a.n_cols() && finite_row; ++w)
            if (a.at(v, w).is_omega()) finite_row = false;
        if (finite_row) out.push_back(v);
    }
    return IdealSubset{a.rows(), std::move(out)};
}

ReducedPair quotient_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                          const NatMatrix& s) {
    require_pair(a, b, r, s);
    IdealSubset ia = min_fully_invariant(a);
    IdealSubset ib = min_fully_invariant(b);
    ReducedPair out = restrict_pair(a, b, r, s, IdealSubset{a.rows(), ia.complement()},
                                    IdealSubset{b.rows(), ib.complement()}, "quotient");
    for (std::size_t i = 0; i < out.a.n_rows(); ++i)
        if (out.a.row_is_zero(i)) throw VerificationFailure("quotient left a zero row in A");
    for (std::size_t i = 0; i < out.b.n_rows(); ++i)
        if (out.b.row_is_zero(i)) throw VerificationFailure("quotient left a zero row in B");
    return out;
}

ReducedPair full_corner_pair(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                             const NatMatrix& s) {
    require_pair(a, b, r, s);
    return restrict_pair(a, b, r, s, IdealSubset{a.rows(), nonzero_column_support(a)},
                         IdealSubset{b.rows(), nonzero_column_support(b)}, "corner");
}

namespace {

// Rebuilds the chain with each cut set U_i restricted to kept[i]. Endpoint
// kept lists must be full, so A and B survive untouched.
SSEChain restrict_chain(const SSEChain& cur, const std::vector<std::vector<std::size_t>>& kept) {
    const std::size_t m = cur.lag();
    std::vector<IndexSet> sets(m + 1);
    sets[0] = cur.A.rows();
    sets[m] = cur.B.rows();
    for (std::size_t i = 1; i < m; ++i)
        sets[i] = restrict_set(cur.steps[i - 1].first.cols(), kept[i].size());
    SSEChain next{cur.A, cur.B, {}};
    next.steps.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& [ri, si] = cur.steps[i];
        next.steps.emplace_back(ri.submatrix(kept[i], kept[i + 1], sets[i], sets[i + 1]),
                                si.submatrix(kept[i + 1], kept[i], sets[i + 1], sets[i]));
    }
    return next;
}

// One pass of cutting the minimal fully invariant ideal of every intermediate
// (quotient = true) or restricting to its nonzero-column support. Returns
// false when nothing was cut.
bool reduce_round(SSEChain& cur, bool quotient) {
    const std::size_t m = cur.lag();
    std::vector<NatMatrix> xs = chain_intermediates(cur);
    std::vector<std::vector<std::size_t>> kept(m + 1);
    kept[0] = all_positions(cur.A.n_rows());
    kept[m] = all_positions(cur.B.n_rows());
    bool changed = false;
    for (std::size_t i = 1; i < m; ++i) {
        kept[i] = quotient ? min_fully_invariant(xs[i - 1]).complement()
                           : nonzero_column_support(xs[i - 1]);
        if (kept[i].size() != xs[i - 1].n_rows()) changed = true;
    }
    if (!changed) return false;
    SSEChain next = restrict_chain(cur, kept);
    ValidationReport rep = verify_chain(next);
    if (!rep.ok)
        throw VerificationFailure(std::string(quotient ? "quotient" : "corner") +
                                  " round broke the chain: " + rep.message);
    cur = std::move(next);
    return true;
}

}  // namespace

SSEChain essentialize_chain(const SSEChain& chain) {
    ValidationReport rep = verify_chain(chain);
    if (!rep.ok) throw InvariantViolation("essentialize needs a valid chain: " + rep.message);
    if (!is_essential(chain.A) || !is_essential(chain.B))
        throw InvariantViolation("essentialize needs essential endpoints");
    SSEChain cur = chain;
    for (;;) {
        std::vector<NatMatrix> xs = chain_intermediates(cur);
        bool done = true;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!is_essential(xs[i])) {
                done = false;
                break;
            }
        if (done) return cur;
        bool cut_rows = reduce_round(cur, true);
        bool cut_cols = reduce_round(cur, false);
        // A zero row forces a productive quotient round and a zero column a
        // productive corner round, so a stalled loop is a bug.
        if (!cut_rows && !cut_cols)
            throw VerificationFailure("essentialize stalled on a non-essential intermediate");
    }
}

namespace {

bool keep_forward(const CardMatrix& c, const CardMatrix& d,
                  const std::vector<std::size_t>& prev, std::size_t u) {
    bool in_edge = false, out_edge = false;
    for (std::size_t t : prev) {
        if (!c.at(t, u).is_zero()) in_edge = true;
        if (!d.at(u, t).is_zero()) out_edge = true;
        if (in_edge && out_edge) return true;
    }
    return false;
}

bool keep_backward(const CardMatrix& c, const CardMatrix& d,
                   const std::vector<std::size_t>& next, std::size_t u) {
    bool in_edge = false, out_edge = false;
    for (std::size_t w : next) {
        if (!c.at(u, w).is_zero()) out_edge = true;
        if (!d.at(w, u).is_zero()) in_edge = true;
        if (in_edge && out_edge) return true;
    }
    return false;
}

NatMatrix drop_omegas(const CardMatrix& a) {
    NatMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            const Card& v = a.at(i, j);
            out.at(i, j) = v.is_omega() ? Nat(0) : v.finite_value();
        }
    return out;
}

}  // namespace

SSEChain trim_chain(const CardChain& doc) {
    if (!all_finite(doc.A) || !all_finite(doc.B))
        throw InvariantViolation("trim needs finite endpoint matrices");
    ValidationReport rep = verify_card_chain(doc);
    if (!rep.ok) throw InvariantViolation("trim needs a valid chain: " + rep.message);

    const std::size_t m = doc.lag();
    // Forward pass from A: keep an index when it both receives an R-edge from
    // and sends an S-edge to the kept part of the previous cut set.
    std::vector<std::vector<std::size_t>> fwd(m + 1);
    fwd[0] = all_positions(doc.A.n_rows());
    for (std::size_t i = 1; i <= m; ++i) {
        const auto& [c, d] = doc.steps[i - 1];
        for (std::size_t u = 0; u < c.n_cols(); ++u)
            if (keep_forward(c, d, fwd[i - 1], u)) fwd[i].push_back(u);
    }
    // Mirror pass from B.
    std::vector<std::vector<std::size_t>> bwd(m + 1);
    bwd[m] = all_positions(doc.B.n_rows());
    for (std::size_t i = m; i-- > 0;) {
        const auto& [c, d] = doc.steps[i];
        for (std::size_t u = 0; u < c.n_rows(); ++u)
            if (keep_backward(c, d, bwd[i + 1], u)) bwd[i].push_back(u);
    }

    std::vector<std::vector<std::size_t>> kept(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        std::set_union(fwd[i].begin(), fwd[i].end(), bwd[i].begin(), bwd[i].end(),
                       std::back_inserter(kept[i]));

    std::vector<IndexSet> sets(m + 1);
    sets[0] = doc.A.rows();
    sets[m] = doc.B.rows();
    for (std::size_t i = 1; i < m; ++i)
        sets[i] = restrict_set(doc.steps[i - 1].first.cols(), kept[i].size());

    SSEChain out{drop_omegas(doc.A), drop_omegas(doc.B), {}};
    out.steps.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& [c, d] = doc.steps[i];
        out.steps.emplace_back(
            drop_omegas(c.submatrix(kept[i], kept[i + 1], sets[i], sets[i + 1])),
            drop_omegas(d.submatrix(kept[i + 1], kept[i], sets[i + 1], sets[i])));
    }

    ValidationReport check = verify_chain(out);
    if (!check.ok) throw TrimFailure("trimmed chain is not exact: " + check.message);
    return out;
}

}  // namespace shifteq
