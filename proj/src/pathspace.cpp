#include "shifteq/pathspace.hpp"

#include <algorithm>
#include <map>
#include <thread>

namespace shifteq {

std::string EdgeTriple::describe() const {
    return "(" + std::to_string(v) + "," + std::to_string(alpha) + "," + std::to_string(w) + ")";
}

std::vector<EdgeTriple> edge_set(const NatMatrix& f) {
    std::vector<EdgeTriple> out;
    for (std::size_t v = 0; v < f.n_rows(); ++v)
        for (std::size_t w = 0; w < f.n_cols(); ++w) {
            std::size_t count = to_size_t(f.at(v, w));
            for (std::size_t alpha = 0; alpha < count; ++alpha) out.push_back({v, alpha, w});
        }
    return out;
}

PathFamily::PathFamily(std::vector<NatMatrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw InvariantViolation("empty path family");
    for (std::size_t i = 0; i + 1 < matrices_.size(); ++i)
        if (matrices_[i].cols() != matrices_[i + 1].rows())
            throw IncompatibleIndexSets("inadmissible family: " + matrices_[i].cols().describe() +
                                        " then " + matrices_[i + 1].rows().describe());
}

PathFamily PathFamily::concat(const PathFamily& a, const PathFamily& b) {
    std::vector<NatMatrix> mats = a.matrices_;
    mats.insert(mats.end(), b.matrices_.begin(), b.matrices_.end());
    return PathFamily(std::move(mats));
}

PathFamily PathFamily::repeated(const NatMatrix& a, int times) {
    if (times < 1) throw BadLevel("power family needs exponent >= 1");
    return PathFamily(std::vector<NatMatrix>(static_cast<std::size_t>(times), a));
}

// Edges per factor are grouped by source vertex; groups are contiguous and
// internally sorted because edge_set is (v, w, alpha)-lexicographic.
PathSpace::PathSpace(PathFamily family) : family_(std::move(family)) {
    std::vector<std::vector<EdgeTriple>> factor_edges;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> ranges;
    for (const NatMatrix& m : family_.matrices()) {
        std::vector<EdgeTriple> edges = edge_set(m);
        std::vector<std::pair<std::size_t, std::size_t>> by_source(m.n_rows(),
                                                                   {edges.size(), edges.size()});
        for (std::size_t i = 0; i < edges.size();) {
            std::size_t j = i;
            while (j < edges.size() && edges[j].v == edges[i].v) ++j;
            by_source[edges[i].v] = {i, j};
            i = j;
        }
        factor_edges.push_back(std::move(edges));
        ranges.push_back(std::move(by_source));
    }

    Path current(family_.length());
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == family_.length()) {
            paths_.push_back(current);
            return;
        }
        if (depth == 0) {
            for (const EdgeTriple& e : factor_edges[0]) {
                current[0] = e;
                self(self, 1);
            }
        } else {
            auto [lo, hi] = ranges[depth][current[depth - 1].w];
            for (std::size_t k = lo; k < hi; ++k) {
                current[depth] = factor_edges[depth][k];
                self(self, depth + 1);
            }
        }
    };
    rec(rec, 0);
}

std::optional<std::size_t> PathSpace::index_of(const Path& p) const {
    auto it = std::lower_bound(paths_.begin(), paths_.end(), p,
                               [](const Path& a, const Path& b) {
                                   return std::lexicographical_compare(a.begin(), a.end(),
                                                                       b.begin(), b.end());
                               });
    if (it == paths_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - paths_.begin());
}

PathSpacePtr make_space(PathFamily family) {
    return std::make_shared<const PathSpace>(std::move(family));
}

PathIso::PathIso(PathSpacePtr domain, PathSpacePtr codomain, std::vector<std::size_t> table)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), table_(std::move(table)) {
    if (!domain_ || !codomain_) throw InvariantViolation("path iso needs both spaces");
    if (table_.size() != domain_->size())
        throw InvariantViolation("path iso table size mismatch");
}

const Path& PathIso::apply(const Path& p) const {
    auto idx = domain_->index_of(p);
    if (!idx) throw InvariantViolation("path not in iso domain");
    return codomain_->path(table_[*idx]);
}

ValidationReport validate_path_iso(const PathIso& candidate) {
    const PathSpace& dom = candidate.domain();
    const PathSpace& cod = candidate.codomain();
    if (dom.family().source_set() != cod.family().source_set())
        return ValidationReport::bad("source index sets differ: " +
                                     dom.family().source_set().describe() + " vs " +
                                     cod.family().source_set().describe());
    if (dom.family().range_set() != cod.family().range_set())
        return ValidationReport::bad("range index sets differ: " +
                                     dom.family().range_set().describe() + " vs " +
                                     cod.family().range_set().describe());
    if (dom.size() != cod.size())
        return ValidationReport::bad("path space sizes differ: " + std::to_string(dom.size()) +
                                     " vs " + std::to_string(cod.size()));
    std::vector<bool> hit(cod.size(), false);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        std::size_t img = candidate.table()[i];
        if (img >= cod.size())
            return ValidationReport::bad("image index out of range", i);
        if (hit[img])
            return ValidationReport::bad("not injective at image " + std::to_string(img), i);
        hit[img] = true;
        const Path& p = dom.path(i);
        const Path& q = cod.path(img);
        if (PathSpace::source_of(p) != PathSpace::source_of(q))
            return ValidationReport::bad("source not preserved at " + std::to_string(i), i);
        if (PathSpace::range_of(p) != PathSpace::range_of(q))
            return ValidationReport::bad("range not preserved at " + std::to_string(i), i);
    }
    return ValidationReport::good();
}

PathIso identity_iso(PathSpacePtr space) {
    std::vector<std::size_t> table(space->size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = i;
    PathSpacePtr copy = space;
    return PathIso(std::move(copy), std::move(space), std::move(table));
}

PathIso invert(const PathIso& phi) {
    std::vector<std::size_t> table(phi.codomain().size());
    for (std::size_t i = 0; i < phi.table().size(); ++i) table[phi.table()[i]] = i;
    return PathIso(phi.codomain_ptr(), phi.domain_ptr(), std::move(table));
}

PathIso compose(const PathIso& inner, const PathIso& outer) {
    if (inner.codomain().family() != outer.domain().family())
        throw IncompatibleIndexSets("compose: inner codomain family differs from outer domain");
    std::vector<std::size_t> table(inner.domain().size());
    for (std::size_t i = 0; i < table.size(); ++i)
        table[i] = outer.table()[inner.table()[i]];
    return PathIso(inner.domain_ptr(), outer.codomain_ptr(), std::move(table));
}

void require_concatenable(const PathFamily& left, const PathFamily& right) {
    if (left.range_set() != right.source_set())
        throw IncompatibleIndexSets("cross: " + left.range_set().describe() +
                                    " does not meet " + right.source_set().describe());
}

PathIso cross(const PathIso& left, const PathIso& right) {
    require_concatenable(left.domain().family(), right.domain().family());
    require_concatenable(left.codomain().family(), right.codomain().family());
    PathSpacePtr dom =
        make_space(PathFamily::concat(left.domain().family(), right.domain().family()));
    PathSpacePtr cod =
        make_space(PathFamily::concat(left.codomain().family(), right.codomain().family()));
    const std::size_t split = left.domain().family().length();
    std::vector<std::size_t> table(dom->size());
    for (std::size_t i = 0; i < dom->size(); ++i) {
        const Path& p = dom->path(i);
        Path p1(p.begin(), p.begin() + split), p2(p.begin() + split, p.end());
        const Path& q1 = left.apply(p1);
        const Path& q2 = right.apply(p2);
        Path q = q1;
        q.insert(q.end(), q2.begin(), q2.end());
        auto idx = cod->index_of(q);
        if (!idx) throw InvariantViolation("cross image fell outside codomain");
        table[i] = *idx;
    }
    return PathIso(std::move(dom), std::move(cod), std::move(table));
}

PathIso lift_power(const PathIso& phi, Lag m) {
    if (phi.domain().family().length() != 2 || phi.codomain().family().length() != 2)
        throw IncompatibleIndexSets("lift_power needs two-factor families [A,R] -> [R,B]");
    const NatMatrix& a = phi.domain().family().matrices()[0];
    const NatMatrix& r = phi.domain().family().matrices()[1];
    const NatMatrix& r2 = phi.codomain().family().matrices()[0];
    const NatMatrix& b = phi.codomain().family().matrices()[1];
    if (!a.is_square() || !b.is_square() || r != r2)
        throw IncompatibleIndexSets("lift_power needs [A,R] -> [R,B] with A, B square");

    std::vector<NatMatrix> dom_mats(static_cast<std::size_t>(m.m), a);
    dom_mats.push_back(r);
    std::vector<NatMatrix> cod_mats{r};
    cod_mats.insert(cod_mats.end(), static_cast<std::size_t>(m.m), b);
    PathSpacePtr dom = make_space(PathFamily(std::move(dom_mats)));
    PathSpacePtr cod = make_space(PathFamily(std::move(cod_mats)));

    // phi is applied from the innermost pair outward: (id_{A^{m-1}} x phi)
    // first, finishing with (phi x id_{B^{m-1}}).
    std::vector<std::size_t> table(dom->size());
    Path b_part(static_cast<std::size_t>(m.m));
    for (std::size_t i = 0; i < dom->size(); ++i) {
        const Path& p = dom->path(i);
        EdgeTriple r_cur = p.back();
        for (int l = m.m - 1; l >= 0; --l) {
            const Path& image = phi.apply({p[static_cast<std::size_t>(l)], r_cur});
            r_cur = image[0];
            b_part[static_cast<std::size_t>(l)] = image[1];
        }
        Path q{r_cur};
        q.insert(q.end(), b_part.begin(), b_part.end());
        auto idx = cod->index_of(q);
        if (!idx) throw InvariantViolation("lift_power image fell outside codomain");
        table[i] = *idx;
    }
    return PathIso(std::move(dom), std::move(cod), std::move(table));
}

PathIso lexicographic_matching(PathSpacePtr domain, PathSpacePtr codomain) {
    if (domain->family().source_set() != codomain->family().source_set() ||
        domain->family().range_set() != codomain->family().range_set())
        throw IncompatibleIndexSets("matching: endpoint index sets differ");
    if (domain->size() != codomain->size())
        throw IncompatibleIndexSets("matching: path space sizes differ");

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> cod_classes;
    for (std::size_t j = 0; j < codomain->size(); ++j) {
        const Path& q = codomain->path(j);
        cod_classes[{PathSpace::source_of(q), PathSpace::range_of(q)}].push_back(j);
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> used;
    std::vector<std::size_t> table(domain->size());
    for (std::size_t i = 0; i < domain->size(); ++i) {
        const Path& p = domain->path(i);
        std::pair<std::size_t, std::size_t> cls{PathSpace::source_of(p), PathSpace::range_of(p)};
        auto it = cod_classes.find(cls);
        std::size_t k = used[cls]++;
        if (it == cod_classes.end() || k >= it->second.size())
            throw IncompatibleIndexSets("matching: endpoint class counts differ at (" +
                                        std::to_string(cls.first) + "," +
                                        std::to_string(cls.second) + ")");
        table[i] = it->second[k];
    }
    PathIso out(std::move(domain), std::move(codomain), std::move(table));
    ValidationReport rep = validate_path_iso(out);
    if (!rep.ok) throw IncompatibleIndexSets("matching failed: " + rep.message);
    return out;
}

EdgeTriple flatten(const NatMatrix& a, const std::vector<PowerPathFactor>& factors) {
    if (!a.is_square()) throw NotSquare("flatten base must be square");
    if (factors.empty()) throw InvariantViolation("flatten needs at least one factor");
    Path expanded;
    for (const PowerPathFactor& f : factors) {
        Path part = expand_power_edge(a, f.exponent, f.edge);
        if (!expanded.empty() && expanded.back().w != part.front().v)
            throw IncompatibleIndexSets("flatten: factors are not composable");
        expanded.insert(expanded.end(), part.begin(), part.end());
    }
    const int k = static_cast<int>(expanded.size());
    PathSpace tuples(PathFamily::repeated(a, k));
    // Rank of the path within its endpoint class, in enumeration order.
    const std::size_t v = expanded.front().v, w = expanded.back().w;
    std::size_t rank = 0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const Path& p = tuples.path(i);
        if (PathSpace::source_of(p) != v || PathSpace::range_of(p) != w) continue;
        if (p == expanded) return {v, rank, w};
        ++rank;
    }
    throw InvariantViolation("flatten: path not found in tuple space");
}

Path expand_power_edge(const NatMatrix& a, int exponent, const EdgeTriple& edge) {
    if (!a.is_square()) throw NotSquare("expand base must be square");
    if (exponent < 1) throw BadLevel("power exponent must be >= 1");
    if (exponent == 1) {
        if (edge.v >= a.n_rows() || edge.w >= a.n_cols() ||
            Nat(static_cast<unsigned long>(edge.alpha)) >= a.at(edge.v, edge.w))
            throw InvariantViolation("edge " + edge.describe() + " not in E_A");
        return {edge};
    }
    PathSpace tuples(PathFamily::repeated(a, exponent));
    std::size_t rank = 0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const Path& p = tuples.path(i);
        if (PathSpace::source_of(p) != edge.v || PathSpace::range_of(p) != edge.w) continue;
        if (rank == edge.alpha) return p;
        ++rank;
    }
    throw InvariantViolation("power edge " + edge.describe() + " has no tuple preimage");
}

std::optional<std::size_t> first_table_mismatch(const PathIso& lhs, const PathIso& rhs,
                                                unsigned threads) {
    if (lhs.domain().family() != rhs.domain().family() ||
        lhs.codomain().family() != rhs.codomain().family())
        throw IncompatibleIndexSets("mismatch scan needs identical families");
    const std::vector<std::size_t>& a = lhs.table();
    const std::vector<std::size_t>& b = rhs.table();
    const std::size_t n = a.size();
    if (threads <= 1 || n < 1024) {
        for (std::size_t i = 0; i < n; ++i)
            if (a[i] != b[i]) return i;
        return std::nullopt;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::size_t> local(threads, n);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i)
                if (a[i] != b[i]) {
                    local[t] = i;
                    break;
                }
        });
    for (auto& th : pool) th.join();
    std::size_t best = n;
    for (std::size_t x : local) best = std::min(best, x);
    if (best == n) return std::nullopt;
    return best;
}

}  // namespace shifteq
