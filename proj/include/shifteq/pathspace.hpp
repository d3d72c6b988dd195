#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shifteq/matrix.hpp"

namespace shifteq {

// Edge (v, alpha, w) of E_F with s(e) = v, r(e) = w. Canonical order is
// lexicographic on (v, w, alpha) so parallel edges sit in one contiguous run.
struct EdgeTriple {
    std::size_t v = 0;
    std::size_t alpha = 0;
    std::size_t w = 0;

    friend bool operator==(const EdgeTriple& a, const EdgeTriple& b) {
        return a.v == b.v && a.alpha == b.alpha && a.w == b.w;
    }
    friend bool operator!=(const EdgeTriple& a, const EdgeTriple& b) { return !(a == b); }
    friend bool operator<(const EdgeTriple& a, const EdgeTriple& b) {
        if (a.v != b.v) return a.v < b.v;
        if (a.w != b.w) return a.w < b.w;
        return a.alpha < b.alpha;
    }
    std::string describe() const;
};

using Path = std::vector<EdgeTriple>;

std::vector<EdgeTriple> edge_set(const NatMatrix& f);

// Ordered list of matrices whose fibered product of edge sets is the path
// space; admissible means consecutive index sets match.
class PathFamily {
public:
    PathFamily() = default;
    explicit PathFamily(std::vector<NatMatrix> matrices);

    const std::vector<NatMatrix>& matrices() const { return matrices_; }
    std::size_t length() const { return matrices_.size(); }
    const IndexSet& source_set() const { return matrices_.front().rows(); }
    const IndexSet& range_set() const { return matrices_.back().cols(); }

    friend bool operator==(const PathFamily& a, const PathFamily& b) {
        return a.matrices_ == b.matrices_;
    }
    friend bool operator!=(const PathFamily& a, const PathFamily& b) { return !(a == b); }

    static PathFamily concat(const PathFamily& a, const PathFamily& b);
    static PathFamily repeated(const NatMatrix& a, int times);

private:
    std::vector<NatMatrix> matrices_;
};

// Fully enumerated fibered product, lexicographic in the canonical edge order.
class PathSpace {
public:
    explicit PathSpace(PathFamily family);

    const PathFamily& family() const { return family_; }
    std::size_t size() const { return paths_.size(); }
    const Path& path(std::size_t i) const { return paths_[i]; }
    std::optional<std::size_t> index_of(const Path& p) const;

    static std::size_t source_of(const Path& p) { return p.front().v; }
    static std::size_t range_of(const Path& p) { return p.back().w; }

private:
    PathFamily family_;
    std::vector<Path> paths_;
};

using PathSpacePtr = std::shared_ptr<const PathSpace>;
PathSpacePtr make_space(PathFamily family);

struct ValidationReport {
    bool ok = true;
    std::string message;
    std::optional<std::size_t> first_bad_index;

    static ValidationReport good() { return {}; }
    static ValidationReport bad(std::string msg, std::optional<std::size_t> idx = {}) {
        return {false, std::move(msg), idx};
    }
};

// Explicit bijection table between two path spaces, preserving the source of
// the first edge and the range of the last.
class PathIso {
public:
    PathIso() = default;
    PathIso(PathSpacePtr domain, PathSpacePtr codomain, std::vector<std::size_t> table);

    const PathSpace& domain() const { return *domain_; }
    const PathSpace& codomain() const { return *codomain_; }
    PathSpacePtr domain_ptr() const { return domain_; }
    PathSpacePtr codomain_ptr() const { return codomain_; }
    const std::vector<std::size_t>& table() const { return table_; }

    std::size_t apply_index(std::size_t i) const { return table_[i]; }
    const Path& apply(const Path& p) const;

    friend bool operator==(const PathIso& a, const PathIso& b) {
        return a.domain().family() == b.domain().family() &&
               a.codomain().family() == b.codomain().family() && a.table_ == b.table_;
    }
    friend bool operator!=(const PathIso& a, const PathIso& b) { return !(a == b); }

private:
    PathSpacePtr domain_, codomain_;
    std::vector<std::size_t> table_;
};

ValidationReport validate_path_iso(const PathIso& candidate);

PathIso identity_iso(PathSpacePtr space);
PathIso invert(const PathIso& phi);
// compose(inner, outer) applies inner first: outer ∘ inner.
PathIso compose(const PathIso& inner, const PathIso& outer);
PathIso cross(const PathIso& left, const PathIso& right);
PathIso lift_power(const PathIso& phi, Lag m);

// Per-endpoint-class lexicographic matching between equinumerous spaces.
PathIso lexicographic_matching(PathSpacePtr domain, PathSpacePtr codomain);

// Index-set-level composability of concatenated families.
void require_concatenable(const PathFamily& left, const PathFamily& right);

// One factor of a path written over declared powers of a base matrix: an edge
// of E_{A^exponent} (exponent 1 = a plain edge of E_A).
struct PowerPathFactor {
    int exponent = 1;
    EdgeTriple edge;
};

// Canonical re-association: expands every factor to a tuple of E_A edges and
// returns the single E_{A^k} edge identified with the concatenation, where the
// per-class identification is lexicographic.
EdgeTriple flatten(const NatMatrix& a, const std::vector<PowerPathFactor>& factors);

// Inverse direction of the same identification.
Path expand_power_edge(const NatMatrix& a, int exponent, const EdgeTriple& edge);

// First mismatching domain index of two isos over identical domains; used for
// counterexample witnesses. threads > 1 scans chunks in parallel with a
// deterministic minimum-index reduction.
std::optional<std::size_t> first_table_mismatch(const PathIso& lhs, const PathIso& rhs,
                                                unsigned threads = 1);

}  // namespace shifteq
