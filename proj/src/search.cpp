#include "shifteq/search.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shifteq/errors.hpp"
#include "shifteq/pathspace.hpp"

namespace shifteq {

namespace {

// Counts assignment attempts; once spent, every further tick fails and the
// search unwinds so the caller can report UNKNOWN.
struct Budget {
    std::uint64_t remaining = 0;
    bool exhausted = false;

    bool tick() {
        if (remaining == 0) {
            exhausted = true;
            return false;
        }
        --remaining;
        return true;
    }
};

void require_caps(const SearchCaps& caps) {
    if (caps.entry_cap < 1 || caps.inner_min < 1 || caps.inner_max < caps.inner_min ||
        caps.max_lag < 1 || caps.node_budget < 1)
        throw InvariantViolation("search caps must be positive with inner_min <= inner_max");
}

SearchOutcome none_outcome(std::string certificate) {
    SearchOutcome out;
    out.status = SearchStatus::NONE;
    out.certificate = std::move(certificate);
    return out;
}

SearchOutcome unknown_outcome(std::string certificate) {
    SearchOutcome out;
    out.status = SearchStatus::UNKNOWN;
    out.certificate = std::move(certificate);
    return out;
}

// Backtracking enumeration of R (n x q) and S (q x n) with RS = target, every
// entry at most `bound`, in the interleaved variable order S row 0, R column
// 0, S row 1, R column 1, ...; values ascend, so the first solution emitted
// is the least one in that order. With `b` set, SR is pinned to it entrywise
// as soon as the touching row and column both exist. With `canonical` set,
// consecutive (S row, R column) pairs must be lexicographically
// non-decreasing, so inner-index relabelings are enumerated only once.
class PairSearch {
public:
    PairSearch(const NatMatrix& target, const IndexSet& inner, const NatMatrix* b, bool canonical,
               Nat bound, Budget& budget)
        : b_(b),
          canonical_(canonical),
          bound_(std::move(bound)),
          budget_(budget),
          n_(target.n_rows()),
          q_(inner.size),
          r_(target.rows(), inner),
          s_(inner, target.cols()),
          rem_(target) {}

    // Calls emit on every solution until it returns true; returns whether it
    // was stopped that way. On plain false, check the budget for exhaustion.
    bool run(const std::function<bool(const NatMatrix&, const NatMatrix&)>& emit) {
        emit_ = &emit;
        return next_pair(0);
    }

private:
    bool next_pair(std::size_t j) {
        if (j == q_) {
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t k = 0; k < n_; ++k)
                    if (rem_.at(i, k) != 0) return false;
            return (*emit_)(r_, s_);
        }
        return s_entry(j, 0, canonical_ && j > 0);
    }

    // `tied` tracks whether the row prefix equals the previous S row; under
    // canonical ordering a tied prefix may not drop below it.
    bool s_entry(std::size_t j, std::size_t k, bool tied) {
        if (k == n_) return s_row_done(j, tied);
        Nat lo = tied ? Nat(s_.at(j - 1, k)) : Nat(0);
        for (Nat v = lo; v <= bound_; v += 1) {
            if (!budget_.tick()) return false;
            s_.at(j, k) = v;
            bool over = false;
            if (b_ != nullptr)
                for (std::size_t y = 0; y < j && !over; ++y) {
                    Nat dot = 0;
                    for (std::size_t t = 0; t <= k; ++t) dot += s_.at(j, t) * r_.at(t, y);
                    if (dot > b_->at(j, y)) over = true;
                }
            if (over) break;
            if (s_entry(j, k + 1, tied && v == s_.at(j - 1, k))) return true;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    bool s_row_done(std::size_t j, bool tied) {
        if (b_ != nullptr)
            for (std::size_t y = 0; y < j; ++y) {
                Nat dot = 0;
                for (std::size_t t = 0; t < n_; ++t) dot += s_.at(j, t) * r_.at(t, y);
                if (dot != b_->at(j, y)) return false;
            }
        if (j + 1 == q_)
            for (std::size_t k = 0; k < n_; ++k)
                if (s_.at(j, k) == 0)
                    for (std::size_t i = 0; i < n_; ++i)
                        if (rem_.at(i, k) != 0) return false;
        return r_entry(j, 0, tied);
    }

    bool r_entry(std::size_t j, std::size_t i, bool tied) {
        if (i == n_) return r_col_done(j);
        const bool exact = (j + 1 == q_);
        Nat lo = tied ? Nat(r_.at(i, j - 1)) : Nat(0);
        for (Nat v = lo; v <= bound_; v += 1) {
            if (!budget_.tick()) return false;
            r_.at(i, j) = v;
            bool over = false, feasible = true;
            for (std::size_t k = 0; k < n_ && !over; ++k) {
                Nat w = v * s_.at(j, k);
                if (w > rem_.at(i, k)) over = true;
                else if (exact && w != rem_.at(i, k)) feasible = false;
            }
            if (b_ != nullptr)
                for (std::size_t x = 0; x <= j && !over; ++x) {
                    Nat dot = 0;
                    for (std::size_t t = 0; t <= i; ++t) dot += s_.at(x, t) * r_.at(t, j);
                    if (dot > b_->at(x, j)) over = true;
                }
            if (over) break;
            if (feasible && r_entry(j, i + 1, tied && v == r_.at(i, j - 1))) return true;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    bool r_col_done(std::size_t j) {
        if (b_ != nullptr)
            for (std::size_t x = 0; x <= j; ++x) {
                Nat dot = 0;
                for (std::size_t t = 0; t < n_; ++t) dot += s_.at(x, t) * r_.at(t, j);
                if (dot != b_->at(x, j)) return false;
            }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) rem_.at(i, k) -= r_.at(i, j) * s_.at(j, k);
        bool stopped = next_pair(j + 1);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) rem_.at(i, k) += r_.at(i, j) * s_.at(j, k);
        return stopped;
    }

    const NatMatrix* b_;
    const bool canonical_;
    const Nat bound_;
    Budget& budget_;
    const std::size_t n_, q_;
    NatMatrix r_, s_;
    NatMatrix rem_;
    const std::function<bool(const NatMatrix&, const NatMatrix&)>* emit_ = nullptr;
};

// Row-major enumeration of R with AR = RB enforced as rows complete, then
// column-wise enumeration of S against RS = A^m, with BS = SA and SR = B^m
// pinned as columns complete. Values ascend, so the first hit is the least
// witness in the order (R row-major, then S column-major).
class LagSearch {
public:
    LagSearch(const NatMatrix& a, const NatMatrix& b, const NatMatrix& am, const NatMatrix& bm,
              std::vector<Nat> r_bound, std::vector<Nat> s_bound, Budget& budget)
        : a_(a),
          b_(b),
          am_(am),
          bm_(bm),
          r_bound_(std::move(r_bound)),
          s_bound_(std::move(s_bound)),
          budget_(budget),
          n_(a.n_rows()),
          p_(b.n_rows()),
          r_(a.rows(), b.rows()),
          s_(b.rows(), a.rows()),
          partial_ar_(n_, std::vector<Nat>(p_)),
          rb_(n_, std::vector<Nat>(p_)),
          partial_sa_(p_, std::vector<Nat>(n_)),
          partial_sr_(p_, std::vector<Nat>(p_)),
          bs_(n_, std::vector<Nat>(p_)) {}

    bool run() {
        if (n_ == 0 || p_ == 0) {
            // One side has no entries at all, so both products are zero.
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t k = 0; k < n_; ++k)
                    if (am_.at(i, k) != 0) return false;
            for (std::size_t w = 0; w < p_; ++w)
                for (std::size_t k = 0; k < p_; ++k)
                    if (bm_.at(w, k) != 0) return false;
            return true;
        }
        return r_entry(0, 0);
    }
    const NatMatrix& r() const { return r_; }
    const NatMatrix& s() const { return s_; }

private:
    bool r_entry(std::size_t v, std::size_t w) {
        if (w == p_) return r_row_done(v);
        for (Nat val = 0; val <= r_bound_[v]; val += 1) {
            if (!budget_.tick()) return false;
            r_.at(v, w) = val;
            bool over = false;
            for (std::size_t x = 0; x < v && !over; ++x)
                if (partial_ar_[x][w] + a_.at(x, v) * val > rb_[x][w]) over = true;
            if (over) break;
            if (r_entry(v, w + 1)) return true;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    bool r_row_done(std::size_t v) {
        for (std::size_t y = 0; y < p_; ++y) {
            Nat acc = 0;
            for (std::size_t w = 0; w < p_; ++w) acc += r_.at(v, w) * b_.at(w, y);
            rb_[v][y] = acc;
        }
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = 0; y < p_; ++y) partial_ar_[x][y] += a_.at(x, v) * r_.at(v, y);
        const bool last = (v + 1 == n_);
        bool feasible = true;
        for (std::size_t x = 0; x <= v && feasible; ++x)
            for (std::size_t y = 0; y < p_ && feasible; ++y)
                feasible = last ? partial_ar_[x][y] == rb_[x][y] : partial_ar_[x][y] <= rb_[x][y];
        bool found = false;
        if (feasible) found = last ? s_entry(0, 0) : r_entry(v + 1, 0);
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = 0; y < p_; ++y) partial_ar_[x][y] -= a_.at(x, v) * r_.at(v, y);
        return found;
    }

    // Entry S_{wv}: the column-v prefix against R must stay under A^m, with
    // equality once the column is full.
    bool s_entry(std::size_t v, std::size_t w) {
        if (w == p_) return s_col_done(v);
        const bool exact = (w + 1 == p_);
        for (Nat val = 0; val <= s_bound_[w]; val += 1) {
            if (!budget_.tick()) return false;
            s_.at(w, v) = val;
            bool over = false, feasible = true;
            for (std::size_t i = 0; i < n_ && !over; ++i) {
                Nat acc = 0;
                for (std::size_t t = 0; t <= w; ++t) acc += r_.at(i, t) * s_.at(t, v);
                if (acc > am_.at(i, v)) over = true;
                else if (exact && acc != am_.at(i, v)) feasible = false;
            }
            if (over) break;
            if (feasible && s_entry(v, w + 1)) return true;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    bool s_col_done(std::size_t v) {
        for (std::size_t w = 0; w < p_; ++w) {
            Nat acc = 0;
            for (std::size_t u = 0; u < p_; ++u) acc += b_.at(w, u) * s_.at(u, v);
            bs_[v][w] = acc;
        }
        for (std::size_t w = 0; w < p_; ++w)
            for (std::size_t x = 0; x < n_; ++x) partial_sa_[w][x] += s_.at(w, v) * a_.at(v, x);
        for (std::size_t w = 0; w < p_; ++w)
            for (std::size_t k = 0; k < p_; ++k) partial_sr_[w][k] += s_.at(w, v) * r_.at(v, k);
        const bool last = (v + 1 == n_);
        bool feasible = true;
        for (std::size_t x = 0; x <= v && feasible; ++x)
            for (std::size_t w = 0; w < p_ && feasible; ++w)
                feasible = last ? partial_sa_[w][x] == bs_[x][w] : partial_sa_[w][x] <= bs_[x][w];
        for (std::size_t w = 0; w < p_ && feasible; ++w)
            for (std::size_t k = 0; k < p_ && feasible; ++k)
                feasible = last ? partial_sr_[w][k] == bm_.at(w, k) : partial_sr_[w][k] <= bm_.at(w, k);
        bool found = false;
        if (feasible) found = last ? true : s_entry(v + 1, 0);
        for (std::size_t w = 0; w < p_; ++w)
            for (std::size_t x = 0; x < n_; ++x) partial_sa_[w][x] -= s_.at(w, v) * a_.at(v, x);
        for (std::size_t w = 0; w < p_; ++w)
            for (std::size_t k = 0; k < p_; ++k) partial_sr_[w][k] -= s_.at(w, v) * r_.at(v, k);
        return found;
    }

    const NatMatrix &a_, &b_, &am_, &bm_;
    const std::vector<Nat> r_bound_, s_bound_;
    Budget& budget_;
    const std::size_t n_, p_;
    NatMatrix r_, s_;
    std::vector<std::vector<Nat>> partial_ar_, rb_, partial_sa_, partial_sr_, bs_;
};

// Iterative-deepening driver for chains: intermediate steps factor the
// frontier freely (SR unconstrained), the final step must land on B exactly.
class ChainSearch {
public:
    ChainSearch(const NatMatrix& b, const SearchCaps& caps, Budget& budget)
        : b_(b), caps_(caps), budget_(budget) {
        failed_.resize(static_cast<std::size_t>(caps.max_lag));
    }

    bool dfs(const NatMatrix& frontier, int depth_left) {
        if (budget_.exhausted) return false;
        if (depth_left == 1) return terminal(frontier);
        const std::size_t need = rank_rational(frontier);
        for (std::size_t q = caps_.inner_min; q <= caps_.inner_max; ++q) {
            if (q < need) continue;
            IndexSet inner{"U" + std::to_string(steps_.size() + 1), q};
            bool found = false;
            auto& memo = failed_[static_cast<std::size_t>(depth_left - 1)];
            PairSearch ps(frontier, inner, nullptr, true, caps_.entry_cap, budget_);
            ps.run([&](const NatMatrix& r, const NatMatrix& s) {
                NatMatrix x = mat_mul(s, r);
                const std::string key = matrix_to_string(x);
                if (memo.count(key) != 0) return false;
                steps_.emplace_back(r, s);
                if (dfs(x, depth_left - 1)) {
                    found = true;
                    return true;
                }
                steps_.pop_back();
                if (!budget_.exhausted) memo.insert(key);
                return budget_.exhausted;
            });
            if (found) return true;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    std::vector<std::pair<NatMatrix, NatMatrix>> take_steps() { return std::move(steps_); }

private:
    bool terminal(const NatMatrix& frontier) {
        if (rank_rational(frontier) > b_.n_rows()) return false;
        if (rank_rational(b_) > frontier.n_rows()) return false;
        Nat bound = std::max(max_entry(frontier), max_entry(b_));
        if (bound > caps_.entry_cap) bound = caps_.entry_cap;
        bool found = false;
        PairSearch ps(frontier, b_.rows(), &b_, false, bound, budget_);
        ps.run([&](const NatMatrix& r, const NatMatrix& s) {
            steps_.emplace_back(r, s);
            found = true;
            return true;
        });
        return found;
    }

    const NatMatrix& b_;
    const SearchCaps& caps_;
    Budget& budget_;
    std::vector<std::pair<NatMatrix, NatMatrix>> steps_;
    // Frontiers that exhausted without a chain, per remaining depth; budget
    // trips are never recorded.
    std::vector<std::unordered_set<std::string>> failed_;
};

using ClassKey = std::pair<std::size_t, std::size_t>;

std::map<ClassKey, std::vector<std::size_t>> endpoint_classes(const PathSpace& sp) {
    std::map<ClassKey, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const Path& p = sp.path(i);
        out[{PathSpace::source_of(p), PathSpace::range_of(p)}].push_back(i);
    }
    return out;
}

// Enumerates the endpoint-preserving bijections between two equinumerous
// spaces class by class, odometer-style over per-class permutations; the
// first arrangement pairs each class in ascending order on both sides.
class ClassBijections {
public:
    ClassBijections(PathSpacePtr dom, PathSpacePtr cod) : dom_(std::move(dom)), cod_(std::move(cod)) {
        auto dc = endpoint_classes(*dom_);
        auto cc = endpoint_classes(*cod_);
        if (dc.size() != cc.size())
            throw InvariantViolation("endpoint classes of the two spaces do not match");
        for (auto& [key, members] : dc) {
            auto it = cc.find(key);
            if (it == cc.end() || it->second.size() != members.size())
                throw InvariantViolation("endpoint classes of the two spaces do not match");
            dom_classes_.push_back(std::move(members));
            cod_classes_.push_back(it->second);
        }
    }

    PathIso current() const {
        std::vector<std::size_t> table(dom_->size());
        for (std::size_t c = 0; c < dom_classes_.size(); ++c)
            for (std::size_t k = 0; k < dom_classes_[c].size(); ++k)
                table[dom_classes_[c][k]] = cod_classes_[c][k];
        return PathIso(dom_, cod_, std::move(table));
    }

    bool next() {
        for (std::size_t c = cod_classes_.size(); c-- > 0;) {
            if (std::next_permutation(cod_classes_[c].begin(), cod_classes_[c].end())) return true;
        }
        return false;
    }

private:
    PathSpacePtr dom_, cod_;
    std::vector<std::vector<std::size_t>> dom_classes_, cod_classes_;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Solves lift_power(phi, m) == target for phi over [F,G] -> [G,H], walking
// the target's domain points in order. Each staircase lookup either follows
// the partial table or branches over the unused same-class outputs whose H
// edge matches the required image; entries never touched by any point are
// unconstrained and filled class-lexicographically afterwards.
class StairSolver {
public:
    StairSolver(const NatMatrix& f, const NatMatrix& g, const NatMatrix& h, Lag m,
                const PathIso& target, Budget& budget)
        : m_(m), target_(target), budget_(budget) {
        in_ = make_space(PathFamily({f, g}));
        out_ = make_space(PathFamily({g, h}));
        if (in_->size() != out_->size())
            throw InvariantViolation("staircase domain and codomain sizes differ");
        tbl_.assign(in_->size(), npos);
        used_.assign(out_->size(), false);
        out_classes_ = endpoint_classes(*out_);
    }

    std::optional<PathIso> solve() {
        if (!point(0)) return std::nullopt;
        fill_free();
        return PathIso(in_, out_, std::move(tbl_));
    }

private:
    bool point(std::size_t t) {
        if (t == target_.domain().size()) return true;
        return step(t, m_.m - 1, target_.domain().path(t).back());
    }

    bool step(std::size_t t, int l, const EdgeTriple& g_cur) {
        const Path& want = target_.codomain().path(target_.table()[t]);
        if (l < 0) {
            if (g_cur != want[0]) return false;
            return point(t + 1);
        }
        const Path& p = target_.domain().path(t);
        Path in_path{p[static_cast<std::size_t>(l)], g_cur};
        auto idx = in_->index_of(in_path);
        if (!idx) throw InvariantViolation("staircase input fell outside the domain");
        const EdgeTriple& want_h = want[static_cast<std::size_t>(l) + 1];
        if (tbl_[*idx] != npos) {
            const Path& q = out_->path(tbl_[*idx]);
            if (q[1] != want_h) return false;
            return step(t, l - 1, q[0]);
        }
        auto cls = out_classes_.find({in_path[0].v, in_path[1].w});
        if (cls == out_classes_.end())
            throw InvariantViolation("staircase output class is empty");
        for (std::size_t cand : cls->second) {
            if (used_[cand]) continue;
            const Path& q = out_->path(cand);
            if (q[1] != want_h) continue;
            if (!budget_.tick()) return false;
            tbl_[*idx] = cand;
            used_[cand] = true;
            if (step(t, l - 1, q[0])) return true;
            tbl_[*idx] = npos;
            used_[cand] = false;
            if (budget_.exhausted) return false;
        }
        return false;
    }

    void fill_free() {
        auto in_classes = endpoint_classes(*in_);
        for (auto& [key, members] : in_classes) {
            auto cls = out_classes_.find(key);
            if (cls == out_classes_.end())
                throw InvariantViolation("staircase output class is empty");
            for (std::size_t i : members) {
                if (tbl_[i] != npos) continue;
                for (std::size_t cand : cls->second) {
                    if (used_[cand]) continue;
                    tbl_[i] = cand;
                    used_[cand] = true;
                    break;
                }
                if (tbl_[i] == npos)
                    throw InvariantViolation("staircase ran out of unused outputs");
            }
        }
    }

    const Lag m_;
    const PathIso& target_;
    Budget& budget_;
    PathSpacePtr in_, out_;
    std::vector<std::size_t> tbl_;
    std::vector<bool> used_;
    std::map<ClassKey, std::vector<std::size_t>> out_classes_;
};

}  // namespace

std::string status_name(SearchStatus status) {
    switch (status) {
        case SearchStatus::FOUND: return "FOUND";
        case SearchStatus::NONE: return "NONE";
        case SearchStatus::UNKNOWN: return "UNKNOWN";
    }
    throw InvariantViolation("unknown search status");
}

SearchOutcome factor_elementary(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps) {
    require_caps(caps);
    require_nonnegative(a);
    require_nonnegative(b);
    if (!a.is_square() || !b.is_square())
        throw NotSquare("factor_elementary needs square matrices");

    const Nat tr_a = trace(a), tr_b = trace(b);
    if (tr_a != tr_b)
        return none_outcome("trace(A) = " + tr_a.get_str() + " and trace(B) = " + tr_b.get_str() +
                            " differ, but tr(RS) = tr(SR) forces equal traces");
    const std::size_t n = a.n_rows(), p = b.n_rows();
    const std::size_t rank_a = rank_rational(a);
    if (rank_a > p)
        return none_outcome("rank_rational(A) = " + std::to_string(rank_a) +
                            " exceeds the forced inner dimension " + std::to_string(p) +
                            ", but A = RS caps the rank at the inner dimension");
    const std::size_t rank_b = rank_rational(b);
    if (rank_b > n)
        return none_outcome("rank_rational(B) = " + std::to_string(rank_b) +
                            " exceeds the forced inner dimension " + std::to_string(n) +
                            ", but SR = B caps the rank at the inner dimension");

    const Nat derived = std::max(max_entry(a), max_entry(b));
    const bool capped = derived > caps.entry_cap;
    const Nat bound = capped ? caps.entry_cap : derived;

    Budget budget{caps.node_budget};
    PairSearch search(a, b.rows(), &b, false, bound, budget);
    std::optional<std::pair<NatMatrix, NatMatrix>> hit;
    search.run([&](const NatMatrix& r, const NatMatrix& s) {
        hit.emplace(r, s);
        return true;
    });

    if (hit) {
        SSEChain chain{a, b, {std::move(*hit)}};
        ValidationReport rep = verify_chain(chain);
        if (!rep.ok)
            throw VerificationFailure("elementary search emitted a non-verifying pair: " +
                                      rep.message);
        SearchOutcome out;
        out.status = SearchStatus::FOUND;
        out.chain = std::move(chain);
        out.certificate = "A = RS and SR = B re-verified";
        return out;
    }
    if (budget.exhausted) return unknown_outcome("node budget exhausted");
    if (capped)
        return unknown_outcome("entry cap " + caps.entry_cap.get_str() +
                               " is below the derived complete bound " + derived.get_str() +
                               ", so exhaustion is inconclusive");
    return none_outcome("no factorization with entries up to " + derived.get_str() +
                        ", and any solution normalizes to one within that bound");
}

SearchOutcome search_se(const NatMatrix& a, const NatMatrix& b, Lag m, const SearchCaps& caps) {
    require_caps(caps);
    require_nonnegative(a);
    require_nonnegative(b);
    if (!a.is_square() || !b.is_square()) throw NotSquare("search_se needs square matrices");

    const NatMatrix am = mat_pow(a, m), bm = mat_pow(b, m);
    const Nat tr_a = trace(am), tr_b = trace(bm);
    if (tr_a != tr_b)
        return none_outcome("trace(A^m) = " + tr_a.get_str() + " and trace(B^m) = " +
                            tr_b.get_str() + " differ, but tr(RS) = tr(SR) forces equal traces");
    const std::size_t n = a.n_rows(), p = b.n_rows();
    const std::size_t rank_am = rank_rational(am);
    if (rank_am > p)
        return none_outcome("rank_rational(A^m) = " + std::to_string(rank_am) + " exceeds " +
                            std::to_string(p) + ", but A^m = RS caps the rank at R's width");
    const std::size_t rank_bm = rank_rational(bm);
    if (rank_bm > n)
        return none_outcome("rank_rational(B^m) = " + std::to_string(rank_bm) + " exceeds " +
                            std::to_string(n) + ", but SR = B^m caps the rank at S's width");

    // For essential A and B the row maxima of A^m and B^m bound every witness
    // entry outright: a larger R entry forces a zero row of S, hence of B^m.
    const bool essential_pair = is_essential(a) && is_essential(b);
    bool capped = !essential_pair;
    std::vector<Nat> r_bound(n), s_bound(p);
    for (std::size_t v = 0; v < n; ++v) {
        Nat d = essential_pair ? max_row_entry(am, v) : caps.entry_cap;
        if (d > caps.entry_cap) {
            d = caps.entry_cap;
            capped = true;
        }
        r_bound[v] = d;
    }
    for (std::size_t w = 0; w < p; ++w) {
        Nat d = essential_pair ? max_row_entry(bm, w) : caps.entry_cap;
        if (d > caps.entry_cap) {
            d = caps.entry_cap;
            capped = true;
        }
        s_bound[w] = d;
    }

    Budget budget{caps.node_budget};
    LagSearch search(a, b, am, bm, std::move(r_bound), std::move(s_bound), budget);
    if (search.run()) {
        SEWitness witness{search.r(), search.s(), m};
        if (mat_mul(witness.r, witness.s) != am || mat_mul(witness.s, witness.r) != bm ||
            mat_mul(a, witness.r) != mat_mul(witness.r, b) ||
            mat_mul(b, witness.s) != mat_mul(witness.s, a))
            throw VerificationFailure("lag search emitted a non-verifying witness");
        SearchOutcome out;
        out.status = SearchStatus::FOUND;
        out.se = std::move(witness);
        out.certificate = "A^m = RS, SR = B^m, AR = RB, BS = SA re-verified";
        return out;
    }
    if (budget.exhausted) return unknown_outcome("node budget exhausted");
    if (capped)
        return unknown_outcome(essential_pair
                                   ? "entry cap clipped the derived row bounds, so exhaustion is "
                                     "inconclusive"
                                   : "derived entry bounds need both matrices essential, so "
                                     "exhaustion under the cap is inconclusive");
    return none_outcome("no witness with R rows bounded by the rows of A^m and S rows by the "
                        "rows of B^m, and essentiality makes those bounds complete");
}

SearchOutcome search_se_sweep(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps) {
    require_caps(caps);
    bool any_unknown = false;
    std::ostringstream report;
    for (int m = 1; m <= caps.max_lag; ++m) {
        SearchOutcome out = search_se(a, b, Lag(m), caps);
        if (out.status == SearchStatus::FOUND) {
            out.certificate = "lag " + std::to_string(m) + ": " + out.certificate;
            return out;
        }
        any_unknown = any_unknown || out.status == SearchStatus::UNKNOWN;
        if (m > 1) report << "; ";
        report << "lag " << m << ": " << status_name(out.status) << " (" << out.certificate << ")";
    }
    return any_unknown ? unknown_outcome(report.str()) : none_outcome(report.str());
}

SearchOutcome search_sse_chain(const NatMatrix& a, const NatMatrix& b, const SearchCaps& caps) {
    require_caps(caps);
    require_nonnegative(a);
    require_nonnegative(b);
    if (!a.is_square() || !b.is_square()) throw NotSquare("search_sse_chain needs square matrices");
    if (!is_essential(a) || !is_essential(b))
        throw InvariantViolation("search_sse_chain needs essential endpoint matrices");

    const auto finish = [&](SSEChain chain, std::string certificate) {
        ValidationReport rep = verify_chain(chain);
        if (!rep.ok)
            throw VerificationFailure("chain search emitted a non-verifying chain: " + rep.message);
        SearchOutcome out;
        out.status = SearchStatus::FOUND;
        out.chain = std::move(chain);
        out.certificate = std::move(certificate);
        return out;
    };

    if (a == b) return finish(SSEChain{a, b, {}}, "A and B coincide, so the empty chain links them");
    if (a.n_rows() == b.n_rows()) {
        bool same_entries = true;
        for (std::size_t i = 0; i < a.n_rows() && same_entries; ++i)
            for (std::size_t j = 0; j < a.n_cols() && same_entries; ++j)
                same_entries = a.at(i, j) == b.at(i, j);
        if (same_entries) {
            NatMatrix r(a.rows(), b.rows());
            for (std::size_t i = 0; i < a.n_rows(); ++i)
                for (std::size_t j = 0; j < a.n_cols(); ++j) r.at(i, j) = a.at(i, j);
            NatMatrix s(b.rows(), a.rows());
            for (std::size_t i = 0; i < b.n_rows(); ++i) s.at(i, i) = 1;
            return finish(SSEChain{a, b, {{std::move(r), std::move(s)}}},
                          "equal entries over renamed sets, linked by one relabeling step");
        }
    }

    const Nat tr_a = trace(a), tr_b = trace(b);
    if (tr_a != tr_b)
        return none_outcome("trace(A) = " + tr_a.get_str() + " and trace(B) = " + tr_b.get_str() +
                            " differ, but every elementary step preserves the trace");

    Budget budget{caps.node_budget};
    ChainSearch search(b, caps, budget);
    for (int depth = 1; depth <= caps.max_lag; ++depth) {
        if (search.dfs(a, depth))
            return finish(SSEChain{a, b, search.take_steps()},
                          "all linking products re-verified");
        if (budget.exhausted) return unknown_outcome("node budget exhausted");
    }
    return unknown_outcome("no chain up to length " + std::to_string(caps.max_lag) +
                           " with inner sizes " + std::to_string(caps.inner_min) + ".." +
                           std::to_string(caps.inner_max) + " and entries up to " +
                           caps.entry_cap.get_str() +
                           "; longer chains or larger entries remain possible");
}

SearchOutcome search_aligned(const NatMatrix& a, const NatMatrix& b, Lag m, const NatMatrix& r,
                             const NatMatrix& s, const SearchCaps& caps) {
    require_caps(caps);
    require_nonnegative(a);
    require_nonnegative(b);
    require_nonnegative(r);
    require_nonnegative(s);
    if (!a.is_square() || !b.is_square()) throw NotSquare("search_aligned needs square A and B");
    if (r.rows() != a.rows() || r.cols() != b.rows() || s.rows() != b.rows() ||
        s.cols() != a.rows())
        throw NotAnSEWitness("R must be indexed by A's set times B's set and S the other way");
    const NatMatrix am = mat_pow(a, m), bm = mat_pow(b, m);
    if (mat_mul(r, s) != am || mat_mul(s, r) != bm || mat_mul(a, r) != mat_mul(r, b) ||
        mat_mul(b, s) != mat_mul(s, a))
        throw NotAnSEWitness("the pair fails the lag-" + std::to_string(m.m) +
                             " relations A^m = RS, SR = B^m, AR = RB, BS = SA");

    Budget budget{caps.node_budget};
    auto sp_rs = make_space(PathFamily({r, s}));
    auto sp_sr = make_space(PathFamily({s, r}));
    auto sp_am = make_space(PathFamily::repeated(a, m.m));
    auto sp_bm = make_space(PathFamily::repeated(b, m.m));
    PathIso id_r = identity_iso(make_space(PathFamily({r})));
    PathIso id_s = identity_iso(make_space(PathFamily({s})));

    ClassBijections psi_as(sp_rs, sp_am);
    do {
        const PathIso psi_a = psi_as.current();
        const PathIso psi_a_inv = invert(psi_a);
        ClassBijections psi_bs(sp_sr, sp_bm);
        do {
            if (!budget.tick()) return unknown_outcome("node budget exhausted");
            const PathIso psi_b = psi_bs.current();
            const PathIso t_r = compose(cross(psi_a_inv, id_r), cross(id_r, psi_b));
            const PathIso t_s = compose(cross(invert(psi_b), id_s), cross(id_s, psi_a));
            StairSolver solve_r(a, r, b, m, t_r, budget);
            std::optional<PathIso> phi_r = solve_r.solve();
            if (!phi_r) {
                if (budget.exhausted) return unknown_outcome("node budget exhausted");
                continue;
            }
            StairSolver solve_s(b, s, a, m, t_s, budget);
            std::optional<PathIso> phi_s = solve_s.solve();
            if (!phi_s) {
                if (budget.exhausted) return unknown_outcome("node budget exhausted");
                continue;
            }
            ConcreteShift cs{a, b, r, s, m, std::move(*phi_r), std::move(*phi_s), psi_a, psi_b};
            ValidationReport rep = validate_concrete_shift(cs);
            if (!rep.ok)
                throw InvariantViolation("aligned search assembled an invalid shift: " +
                                         rep.message);
            ShiftClassification cls = classify(cs);
            if (!cls.aligned || !cls.balanced || !cls.compatible)
                throw InvariantViolation(
                    "aligned search solved the identities but classification disagrees");
            SearchOutcome out;
            out.status = SearchStatus::FOUND;
            out.shift = std::move(cs);
            out.certificate = "classifies aligned, balanced, and compatible";
            return out;
        } while (psi_bs.next());
    } while (psi_as.next());

    if (is_essential(a) && is_essential(b))
        return none_outcome("every endpoint-class assignment was exhausted; with essential "
                            "matrices any aligned tuple extends to one of the enumerated "
                            "solutions, so none exists for this witness");
    return unknown_outcome("assignment space exhausted, but without essential endpoints an "
                           "aligned tuple may exist outside the enumerated family");
}

}  // namespace shifteq
