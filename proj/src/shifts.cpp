#include "shifteq/shifts.hpp"

#include <functional>

namespace shifteq {

namespace {

PathIso id_on(const NatMatrix& m) { return identity_iso(make_space(PathFamily({m}))); }

PathIso id_on_power(const NatMatrix& m, int times) {
    return identity_iso(make_space(PathFamily::repeated(m, times)));
}

CheckResult compare(const PathIso& lhs, const PathIso& rhs, const std::string& side,
                    unsigned threads) {
    auto bad = first_table_mismatch(lhs, rhs, threads);
    if (!bad) return {};
    return {false, side, lhs.domain().path(*bad)};
}

CheckResult both(CheckResult first, const std::function<CheckResult()>& second) {
    if (!first.ok) return first;
    return second();
}

}  // namespace

ValidationReport validate_concrete_shift(const ConcreteShift& cs) {
    if (!cs.A.is_square()) return ValidationReport::bad("A is not square");
    if (!cs.B.is_square()) return ValidationReport::bad("B is not square");
    const IndexSet& v = cs.A.rows();
    const IndexSet& w = cs.B.rows();
    if (cs.R.rows() != v || cs.R.cols() != w)
        return ValidationReport::bad("R is not indexed V x W");
    if (cs.S.rows() != w || cs.S.cols() != v)
        return ValidationReport::bad("S is not indexed W x V");

    if (mat_mul(cs.A, cs.R) != mat_mul(cs.R, cs.B))
        return ValidationReport::bad("AR != RB");
    if (mat_mul(cs.B, cs.S) != mat_mul(cs.S, cs.A))
        return ValidationReport::bad("BS != SA");
    if (mat_pow(cs.A, cs.m) != mat_mul(cs.R, cs.S))
        return ValidationReport::bad("A^m != RS");
    if (mat_mul(cs.S, cs.R) != mat_pow(cs.B, cs.m))
        return ValidationReport::bad("SR != B^m");

    const int m = cs.m.m;
    struct Expected {
        const PathIso* iso;
        PathFamily dom, cod;
        const char* name;
    };
    const Expected shapes[] = {
        {&cs.phi_R, PathFamily({cs.A, cs.R}), PathFamily({cs.R, cs.B}), "phi_R"},
        {&cs.phi_S, PathFamily({cs.B, cs.S}), PathFamily({cs.S, cs.A}), "phi_S"},
        {&cs.psi_A, PathFamily({cs.R, cs.S}), PathFamily::repeated(cs.A, m), "psi_A"},
        {&cs.psi_B, PathFamily({cs.S, cs.R}), PathFamily::repeated(cs.B, m), "psi_B"},
    };
    for (const Expected& e : shapes) {
        if (e.iso->domain().family() != e.dom)
            return ValidationReport::bad(std::string(e.name) + ": wrong domain family");
        if (e.iso->codomain().family() != e.cod)
            return ValidationReport::bad(std::string(e.name) + ": wrong codomain family");
        ValidationReport rep = validate_path_iso(*e.iso);
        if (!rep.ok)
            return ValidationReport::bad(std::string(e.name) + ": " + rep.message,
                                         rep.first_bad_index);
    }
    return ValidationReport::good();
}

CheckResult is_aligned(const ConcreteShift& cs, unsigned threads) {
    PathIso id_r = id_on(cs.R), id_s = id_on(cs.S);
    PathIso id_a = id_on(cs.A), id_b = id_on(cs.B);

    CheckResult a_side = [&] {
        PathIso lhs = compose(compose(cross(cs.phi_R, id_s), cross(id_r, cs.phi_S)),
                              cross(cs.psi_A, id_a));
        PathIso rhs = cross(id_a, cs.psi_A);
        return compare(lhs, rhs, "A-side aligned identity", threads);
    }();
    return both(a_side, [&] {
        PathIso lhs = compose(compose(cross(cs.phi_S, id_r), cross(id_s, cs.phi_R)),
                              cross(cs.psi_B, id_b));
        PathIso rhs = cross(id_b, cs.psi_B);
        return compare(lhs, rhs, "B-side aligned identity", threads);
    });
}

CheckResult is_balanced(const ConcreteShift& cs, unsigned threads) {
    PathIso id_r = id_on(cs.R), id_s = id_on(cs.S);
    PathIso phi_r_m = lift_power(cs.phi_R, cs.m);
    PathIso phi_s_m = lift_power(cs.phi_S, cs.m);

    CheckResult a_side = [&] {
        PathIso lhs = cross(invert(cs.psi_A), cs.psi_A);
        PathIso rhs = compose(cross(phi_r_m, id_s), cross(id_r, phi_s_m));
        return compare(lhs, rhs, "A-side balanced identity", threads);
    }();
    return both(a_side, [&] {
        PathIso lhs = cross(invert(cs.psi_B), cs.psi_B);
        PathIso rhs = compose(cross(phi_s_m, id_r), cross(id_s, phi_r_m));
        return compare(lhs, rhs, "B-side balanced identity", threads);
    });
}

CheckResult is_compatible(const ConcreteShift& cs, unsigned threads) {
    PathIso id_r = id_on(cs.R), id_s = id_on(cs.S);

    CheckResult r_side = [&] {
        PathIso lhs = lift_power(cs.phi_R, cs.m);
        PathIso rhs = compose(cross(invert(cs.psi_A), id_r), cross(id_r, cs.psi_B));
        return compare(lhs, rhs, "R-form compatible identity", threads);
    }();
    return both(r_side, [&] {
        PathIso lhs = lift_power(cs.phi_S, cs.m);
        PathIso rhs = compose(cross(invert(cs.psi_B), id_s), cross(id_s, cs.psi_A));
        return compare(lhs, rhs, "S-form compatible identity", threads);
    });
}

ShiftClassification classify(const ConcreteShift& cs, unsigned threads) {
    CheckResult a = is_aligned(cs, threads);
    CheckResult b = is_balanced(cs, threads);
    CheckResult c = is_compatible(cs, threads);
    ShiftClassification out;
    out.aligned = a.ok;
    out.balanced = b.ok;
    out.compatible = c.ok;
    out.aligned_witness = a.witness;
    out.balanced_witness = b.witness;
    out.compatible_witness = c.witness;
    if (is_essential(cs.A) && is_essential(cs.B) &&
        !(a.ok == b.ok && b.ok == c.ok))
        throw TheoremViolation("aligned/balanced/compatible flags disagree on essential input: " +
                               std::string(a.ok ? "aligned" : "not-aligned") + "/" +
                               std::string(b.ok ? "balanced" : "not-balanced") + "/" +
                               std::string(c.ok ? "compatible" : "not-compatible"));
    return out;
}

ConcreteShift build_lag1_compatible(const NatMatrix& a, const NatMatrix& b, const NatMatrix& r,
                                    const NatMatrix& s) {
    if (mat_mul(r, s) != a)
        throw NotAFactorization("RS != A");
    if (mat_mul(s, r) != b)
        throw NotAFactorization("SR != B");

    PathIso psi_a = lexicographic_matching(make_space(PathFamily({r, s})),
                                           make_space(PathFamily({a})));
    PathIso psi_b = lexicographic_matching(make_space(PathFamily({s, r})),
                                           make_space(PathFamily({b})));
    PathIso id_r = id_on(r), id_s = id_on(s);
    PathIso phi_r = compose(cross(invert(psi_a), id_r), cross(id_r, psi_b));
    PathIso phi_s = compose(cross(invert(psi_b), id_s), cross(id_s, psi_a));
    return ConcreteShift{a, b, r, s, Lag(1), std::move(phi_r), std::move(phi_s),
                         std::move(psi_a), std::move(psi_b)};
}

CheckResult check_intermediate_identity(const ConcreteShift& cs, int level, unsigned threads) {
    if (level < 1 || level > cs.m.m)
        throw BadLevel("level " + std::to_string(level) + " outside 1.." +
                       std::to_string(cs.m.m));
    PathIso id_r = id_on(cs.R), id_s = id_on(cs.S);
    PathIso id_al = id_on_power(cs.A, level);
    PathIso lhs = compose(cross(lift_power(cs.phi_R, Lag(level)), id_s),
                          cross(id_r, lift_power(cs.phi_S, Lag(level))));
    PathIso rhs = compose(cross(id_al, cs.psi_A), cross(invert(cs.psi_A), id_al));
    return compare(lhs, rhs, "intermediate identity at level " + std::to_string(level),
                   threads);
}

}  // namespace shifteq
