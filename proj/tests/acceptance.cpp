// End-to-end acceptance gate. Nine independent checks, one verdict line each;
// the process exits nonzero when any of them fails. Everything runs in exact
// arithmetic: no floating point is used anywhere below.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gen.hpp"
#include "helpers.hpp"
#include "shifteq/chain.hpp"
#include "shifteq/correspondence.hpp"
#include "shifteq/errors.hpp"
#include "shifteq/matrix.hpp"
#include "shifteq/reduction.hpp"
#include "shifteq/search.hpp"
#include "shifteq/serialize.hpp"
#include "shifteq/shifts.hpp"

#ifndef SHIFTEQ_SOURCE_DIR
#error "SHIFTEQ_SOURCE_DIR must point at the repository root"
#endif
#ifndef SHIFTEQ_CLI_PATH
#error "SHIFTEQ_CLI_PATH must point at the built command-line binary"
#endif

namespace fs = std::filesystem;
using namespace shifteq;
using namespace shifteq::testing;

namespace {

struct CheckFail {
    std::string msg;
};

void need(bool ok, const std::string& msg) {
    if (!ok) throw CheckFail{msg};
}

// ---------------------------------------------------------------- utilities

using Grid = std::vector<std::vector<std::uint64_t>>;

Grid grid_of(const NatMatrix& m) {
    Grid out(m.n_rows(), std::vector<std::uint64_t>(m.n_cols(), 0));
    for (std::size_t i = 0; i < m.n_rows(); ++i)
        for (std::size_t j = 0; j < m.n_cols(); ++j) out[i][j] = m.at(i, j).get_ui();
    return out;
}

Grid grid_of(const CardMatrix& m) {
    need(all_finite(m), "expected a finite matrix");
    return grid_of(to_nat(m));
}

// Schoolbook product over machine words; deliberately shares no code with the
// library multiplication it cross-checks.
Grid grid_mul(const Grid& x, const Grid& y) {
    const std::size_t n = x.size(), k = y.size(), p = k == 0 ? 0 : y[0].size();
    Grid out(n, std::vector<std::uint64_t>(p, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t j = 0; j < p; ++j) out[i][j] += x[i][t] * y[t][j];
    return out;
}

NatMatrix grid_to_nat(const Grid& g, const IndexSet& rows, const IndexSet& cols) {
    NatMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows.size; ++i)
        for (std::size_t j = 0; j < cols.size; ++j) out.at(i, j) = Nat(g[i][j]);
    return out;
}

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const fs::path& scratch, const std::string& tag) {
    const fs::path outfile = scratch / ("cli_" + tag + ".txt");
    const std::string cmd =
        std::string(SHIFTEQ_CLI_PATH) + " " + args + " > " + outfile.string() + " 2>&1";
    int raw = std::system(cmd.c_str());
    CliResult res;
    res.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(outfile);
    std::stringstream ss;
    ss << in.rdbuf();
    res.out = ss.str();
    return res;
}

template <class T>
bool same_entries(const BasicMatrix<T>& x, const BasicMatrix<T>& y) {
    if (x.n_rows() != y.n_rows() || x.n_cols() != y.n_cols()) return false;
    for (std::size_t i = 0; i < x.n_rows(); ++i)
        for (std::size_t j = 0; j < x.n_cols(); ++j)
            if (!(x.at(i, j) == y.at(i, j))) return false;
    return true;
}

bool chain_same_entries(const SSEChain& x, const SSEChain& y) {
    if (x.lag() != y.lag() || x.A != y.A || x.B != y.B) return false;
    for (std::size_t i = 0; i < x.steps.size(); ++i)
        if (!same_entries(x.steps[i].first, y.steps[i].first) ||
            !same_entries(x.steps[i].second, y.steps[i].second))
            return false;
    return true;
}

// ------------------------------------------------- criterion 1: worked trio

void check_witness_file(const fs::path& file, const NatMatrix& a, const NatMatrix& b) {
    ArtifactFile art = load_artifact(file.string());
    need(art.kind == "chain" && art.chain.has_value(), "expected a chain artifact");
    const CardChain& ch = *art.chain;
    need(ch.lag() == 1, "an elementary witness is a one-step chain");
    const Grid ga = grid_of(a), gb = grid_of(b);
    need(grid_of(ch.A) == ga && grid_of(ch.B) == gb, "witness endpoints differ from the inputs");
    const Grid r = grid_of(ch.steps[0].first), s = grid_of(ch.steps[0].second);
    need(grid_mul(r, s) == ga, "re-multiplied RS does not equal A");
    need(grid_mul(s, r) == gb, "re-multiplied SR does not equal B");
}

void criterion_one(const fs::path& scratch) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string src = SHIFTEQ_SOURCE_DIR;
    const std::string a = src + "/examples/ex58_A.json";
    const std::string b = src + "/examples/ex58_B.json";
    const std::string c = src + "/examples/ex58_C.json";

    CliResult ab = run_cli("search-elementary " + a + " " + b + " -o " +
                               (scratch / "w_ab.json").string(),
                           scratch, "1ab");
    need(ab.code == 0, "first pair should report FOUND, exit code " + std::to_string(ab.code));
    CliResult bc = run_cli("search-elementary " + b + " " + c + " -o " +
                               (scratch / "w_bc.json").string(),
                           scratch, "1bc");
    need(bc.code == 0, "second pair should report FOUND, exit code " + std::to_string(bc.code));
    CliResult ac = run_cli("search-elementary " + a + " " + c, scratch, "1ac");
    need(ac.code == 1, "third pair should report NONE, exit code " + std::to_string(ac.code));
    need(ac.out.find("rank") != std::string::npos,
         "the NONE verdict should cite the rank obstruction");

    check_witness_file(scratch / "w_ab.json", sq("V", {{1, 1, 0}, {0, 0, 1}, {1, 1, 1}}),
                       sq("W", {{1, 1}, {1, 1}}));
    check_witness_file(scratch / "w_bc.json", sq("W", {{1, 1}, {1, 1}}), sq("Z", {{2}}));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    need(secs < 1.0, "must finish inside one second");
}

// ------------------------------------- criteria 2 and 3: generated shifts

struct SuiteItem {
    ConcreteShift cs;
    bool built_compatible = false;
    ShiftClassification flags;
};

ConcreteShift make_lag1_instance(Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::size_t n = 2 + rng.below(3);
        const std::size_t p = 1 + rng.below(3);
        ElementaryPair pair = random_elementary_pair(rng, n, p, 1);
        if (max_entry(pair.a) > 3 || max_entry(pair.b) > 3) continue;
        return build_lag1_compatible(pair.a, pair.b, pair.r, pair.s);
    }
    throw CheckFail{"no admissible elementary pair after 1000 draws"};
}

// A lag-1 factorization A = RS, B = SR induces the lag-m witness pair
// (A^{m-1} R, S); the map search then completes it to a concrete shift. Most
// draws complete within a few thousand nodes, so a small budget abandons the
// occasional stubborn draw cheaply instead of grinding it out.
std::optional<ConcreteShift> make_lagm_instance(Rng& rng, int m) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        ElementaryPair pair = random_elementary_pair(rng, 2, 2, 1);
        if (max_entry(pair.a) > 3 || max_entry(pair.b) > 3) continue;
        NatMatrix rm = mat_mul(mat_pow(pair.a, Lag(m - 1)), pair.r);
        SearchCaps caps;
        caps.node_budget = 150000;
        SearchOutcome out = search_aligned(pair.a, pair.b, Lag(m), rm, pair.s, caps);
        if (out.status == SearchStatus::FOUND) return out.shift;
    }
    return std::nullopt;
}

std::optional<ConcreteShift> mutate_instance(Rng& rng, const ConcreteShift& cs) {
    const MapSlot slots[4] = {MapSlot::PhiR, MapSlot::PhiS, MapSlot::PsiA, MapSlot::PsiB};
    const std::size_t start = rng.below(4);
    for (std::size_t k = 0; k < 4; ++k) {
        auto alt = mutate_map(rng, cs, slots[(start + k) % 4]);
        if (alt) return alt;
    }
    return std::nullopt;
}

void criterion_two(std::vector<SuiteItem>& suite) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20260815);

    std::vector<ConcreteShift> compatible;
    compatible.reserve(100);
    for (int i = 0; i < 40; ++i) compatible.push_back(make_lag1_instance(rng));
    for (int m : {2, 3})
        for (int i = 0; i < 30; ++i) {
            auto cs = make_lagm_instance(rng, m);
            need(cs.has_value(),
                 "could not complete a lag-" + std::to_string(m) + " witness to a shift");
            compatible.push_back(*cs);
        }

    std::vector<SuiteItem> items;
    items.reserve(200);
    for (const ConcreteShift& cs : compatible) items.push_back({cs, true, {}});
    std::size_t cursor = 0;
    int stall = 0;
    while (items.size() < 200) {
        need(++stall < 2000, "mutation stalled before reaching 200 instances");
        auto alt = mutate_instance(rng, compatible[cursor++ % compatible.size()]);
        if (alt) items.push_back({*alt, false, {}});
    }

    int violations = 0;
    for (SuiteItem& item : items) {
        try {
            item.flags = classify(item.cs);
        } catch (const TheoremViolation&) {
            ++violations;
            continue;
        }
        need(item.flags.aligned == item.flags.balanced &&
                 item.flags.balanced == item.flags.compatible,
             "the three conditions disagreed on an essential instance");
        if (item.built_compatible)
            need(item.flags.compatible, "a constructed instance failed to classify compatible");
    }
    need(violations == 0, std::to_string(violations) + " equivalence violations were raised");

    suite = std::move(items);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    need(secs < 60.0, "must finish inside sixty seconds");
}

void criterion_three(const std::vector<SuiteItem>& suite) {
    need(!suite.empty(), "instance suite unavailable");
    int aligned_count = 0;
    for (const SuiteItem& item : suite) {
        if (!item.flags.aligned) continue;
        ++aligned_count;
        for (int level = 1; level <= item.cs.m.m; ++level) {
            CheckResult res = check_intermediate_identity(item.cs, level);
            need(res.ok, "intermediate identity failed at level " + std::to_string(level) +
                             " on side " + res.side);
        }
    }
    need(aligned_count >= 100, "every constructed instance should have been aligned");
}

// ----------------------------------------- criterion 4: two-round collapse

void criterion_four() {
    const NatMatrix start = sq("V", {{1, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    const IdealSubset ideal = min_fully_invariant(start);
    need(ideal.members == std::vector<std::size_t>{1, 2},
         "the least fully invariant ideal should hold exactly the two dying vertices");

    NatMatrix cur = start;
    std::vector<std::size_t> alive = {0, 1, 2};
    std::vector<std::size_t> removed;
    int rounds = 0;
    for (;;) {
        std::vector<std::size_t> keep, dead;
        for (std::size_t i = 0; i < cur.n_rows(); ++i)
            (cur.row_is_zero(i) ? dead : keep).push_back(i);
        if (dead.empty()) break;
        for (std::size_t d : dead) removed.push_back(alive[d]);
        std::vector<std::size_t> next_alive;
        for (std::size_t k : keep) next_alive.push_back(alive[k]);
        alive = std::move(next_alive);
        const IndexSet next{"Q" + std::to_string(++rounds), keep.size()};
        cur = cur.submatrix(keep, keep, next, next);
        need(rounds <= 3, "sink removal failed to terminate");
    }
    need(rounds == 2, "expected exactly two quotient rounds, got " + std::to_string(rounds));
    need(cur.n_rows() == 1 && cur.at(0, 0) == 1, "the terminal matrix should be [[1]]");
    need(is_essential(cur), "the terminal matrix should be essential");
    std::sort(removed.begin(), removed.end());
    need(removed == ideal.members,
         "the vertices deleted round by round should fill the least fully invariant ideal");
}

// ------------------------------------ criterion 5: tensor versus product

void criterion_five() {
    Rng rng(58585858);
    for (int trial = 0; trial < 500; ++trial) {
        const bool omega_case = trial >= 460;
        const std::size_t n = 1 + rng.below(4);
        const std::size_t k = 1 + rng.below(4);
        const std::size_t p = 1 + rng.below(4);
        const std::string tag = std::to_string(trial);
        const IndexSet iv{"I" + tag + "a", n}, iw{"I" + tag + "b", k}, iz{"I" + tag + "c", p};

        auto draw = [&](const IndexSet& rows, const IndexSet& cols) {
            CardMatrix out(rows, cols);
            for (std::size_t i = 0; i < rows.size; ++i)
                for (std::size_t j = 0; j < cols.size; ++j)
                    out.at(i, j) = omega_case && rng.below(8) == 0 ? Card::omega()
                                                                   : Card(Nat(rng.entry(3)));
            return out;
        };
        CardMatrix a = draw(iv, iw), b = draw(iw, iz);
        if (omega_case) a.at(0, 0) = Card::omega();

        const CorrDescriptor lhs =
            tensor_descriptor(descriptor_from_matrix(a), descriptor_from_matrix(b));
        const CorrDescriptor rhs = descriptor_from_matrix(card_mul(a, b));
        need(lhs == rhs, "tensor disagreed with the matrix product on trial " + tag);
    }
}

// ----------------------------- criterion 6: planted sinks and zero columns

void criterion_six() {
    Rng rng(40712);
    const long biased[5] = {0, 0, 1, 1, 2};
    int done = 0, attempts = 0;
    while (done < 200) {
        need(++attempts < 4000, "could not assemble 200 planted pairs");
        const std::size_t n = 2 + rng.below(3);
        const std::size_t p = 2 + rng.below(3);
        NatMatrix r(IndexSet{"V", n}, IndexSet{"W", p});
        NatMatrix s(IndexSet{"W", p}, IndexSet{"V", n});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) r.at(i, j) = biased[rng.below(5)];
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < n; ++j) s.at(i, j) = biased[rng.below(5)];

        auto plant = [&](std::uint64_t which) {
            switch (which) {
                case 0:
                    for (std::size_t j = 0; j < p; ++j) r.at(rng.below(n), j) = 0;
                    break;
                case 1: {
                    const std::size_t col = rng.below(n);
                    for (std::size_t i = 0; i < p; ++i) s.at(i, col) = 0;
                    break;
                }
                case 2:
                    for (std::size_t j = 0; j < n; ++j) s.at(rng.below(p), j) = 0;
                    break;
                default: {
                    const std::size_t col = rng.below(p);
                    for (std::size_t i = 0; i < n; ++i) r.at(i, col) = 0;
                    break;
                }
            }
        };
        plant(rng.below(4));
        if (rng.below(2) == 0) plant(rng.below(4));

        const NatMatrix a = mat_mul(r, s), b = mat_mul(s, r);
        if (min_fully_invariant(a).full() || min_fully_invariant(b).full()) continue;

        bool has_defect = false;
        for (std::size_t i = 0; i < n && !has_defect; ++i)
            if (a.row_is_zero(i) || a.col_is_zero(i)) has_defect = true;
        for (std::size_t i = 0; i < p && !has_defect; ++i)
            if (b.row_is_zero(i) || b.col_is_zero(i)) has_defect = true;
        if (!has_defect) continue;

        const ReducedPair q = quotient_pair(a, b, r, s);
        for (std::size_t i = 0; i < q.a.n_rows(); ++i)
            need(!q.a.row_is_zero(i), "the quotient left a zero row in the first matrix");
        for (std::size_t i = 0; i < q.b.n_rows(); ++i)
            need(!q.b.row_is_zero(i), "the quotient left a zero row in the second matrix");
        need(q.a == mat_mul(q.r, q.s) && q.b == mat_mul(q.s, q.r),
             "the quotient output is not a factorization pair");

        const ReducedPair c = full_corner_pair(a, b, r, s);
        need(c.a == mat_mul(c.r, c.s) && c.b == mat_mul(c.s, c.r),
             "the corner output is not a factorization pair");
        ++done;
    }
}

// --------------------------------------- criterion 7: trimming padded chains

template <class T>
BasicMatrix<T> hcat(const BasicMatrix<T>& a, const BasicMatrix<T>& b, const IndexSet& cols) {
    need(a.n_rows() == b.n_rows() && cols.size == a.n_cols() + b.n_cols(), "hcat shape");
    BasicMatrix<T> out(a.rows(), cols);
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        for (std::size_t j = 0; j < a.n_cols(); ++j) out.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.n_cols(); ++j) out.at(i, a.n_cols() + j) = b.at(i, j);
    }
    return out;
}

template <class T>
BasicMatrix<T> vcat(const BasicMatrix<T>& a, const BasicMatrix<T>& b, const IndexSet& rows) {
    need(a.n_cols() == b.n_cols() && rows.size == a.n_rows() + b.n_rows(), "vcat shape");
    BasicMatrix<T> out(rows, a.cols());
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        for (std::size_t i = 0; i < a.n_rows(); ++i) out.at(i, j) = a.at(i, j);
        for (std::size_t i = 0; i < b.n_rows(); ++i) out.at(a.n_rows() + i, j) = b.at(i, j);
    }
    return out;
}

// Appends sink vertices at cut `cut`: they receive edges but emit none.
CardChain pad_sink(const CardChain& chain, std::size_t cut, const CardMatrix& e) {
    need(cut >= 1 && cut < chain.lag(), "pad cut out of range");
    CardChain out = chain;
    const CardMatrix& r1 = chain.steps[cut - 1].first;
    const CardMatrix& s1 = chain.steps[cut - 1].second;
    const CardMatrix& r2 = chain.steps[cut].first;
    const CardMatrix& s2 = chain.steps[cut].second;
    need(e.rows() == r1.cols(), "pad block rows must match the cut set");
    const IndexSet up{r1.cols().name + "+", r1.cols().size + e.n_cols()};
    out.steps[cut - 1].first = hcat(r1, card_mul(r1, e), up);
    out.steps[cut - 1].second = vcat(s1, CardMatrix(IndexSet{"pad", e.n_cols()}, s1.cols()), up);
    out.steps[cut].first = vcat(r2, CardMatrix(IndexSet{"pad", e.n_cols()}, r2.cols()), up);
    out.steps[cut].second = hcat(s2, card_mul(s2, e), up);
    return out;
}

// Appends source vertices at cut `cut`: they emit edges but receive none.
CardChain pad_source(const CardChain& chain, std::size_t cut, const CardMatrix& f) {
    need(cut >= 1 && cut < chain.lag(), "pad cut out of range");
    CardChain out = chain;
    const CardMatrix& r1 = chain.steps[cut - 1].first;
    const CardMatrix& s1 = chain.steps[cut - 1].second;
    const CardMatrix& r2 = chain.steps[cut].first;
    const CardMatrix& s2 = chain.steps[cut].second;
    need(f.cols() == r1.cols(), "pad block columns must match the cut set");
    const IndexSet up{r1.cols().name + "+", r1.cols().size + f.n_rows()};
    out.steps[cut - 1].first = hcat(r1, CardMatrix(r1.rows(), IndexSet{"pad", f.n_rows()}), up);
    out.steps[cut - 1].second = vcat(s1, card_mul(f, s1), up);
    out.steps[cut].first = vcat(r2, card_mul(f, r2), up);
    out.steps[cut].second = hcat(s2, CardMatrix(s2.rows(), IndexSet{"pad", f.n_rows()}), up);
    return out;
}

NatMatrix random_no_zero_lines(Rng& rng, const IndexSet& rows, const IndexSet& cols,
                               long max_entry) {
    for (int attempt = 0; attempt < 2000; ++attempt) {
        NatMatrix m = random_nat(rng, rows, cols, max_entry);
        bool ok = true;
        for (std::size_t i = 0; i < m.n_rows() && ok; ++i) ok = !m.row_is_zero(i);
        for (std::size_t j = 0; j < m.n_cols() && ok; ++j) ok = !m.col_is_zero(j);
        if (ok) return m;
    }
    throw CheckFail{"no totally supported matrix after 2000 draws"};
}

// A lag-m chain around the cyclic factorization A = M_0 ... M_{m-1}.
SSEChain cyclic_chain(Rng& rng, std::size_t n, std::size_t m, long max_entry) {
    std::vector<IndexSet> sets(m + 1);
    sets[0] = IndexSet{"V", n};
    for (std::size_t i = 1; i < m; ++i) sets[i] = IndexSet{"U" + std::to_string(i), n};
    sets[m] = sets[0];
    std::vector<NatMatrix> ms;
    for (std::size_t i = 0; i < m; ++i)
        ms.push_back(random_no_zero_lines(rng, sets[i], sets[i + 1], max_entry));
    SSEChain out;
    out.A = ms[0];
    for (std::size_t i = 1; i < m; ++i) out.A = mat_mul(out.A, ms[i]);
    out.B = out.A;
    for (std::size_t i = 0; i < m; ++i) {
        NatMatrix s = ms[(i + 1) % m];
        for (std::size_t t = 2; t < m; ++t) s = mat_mul(s, ms[(i + t) % m]);
        out.steps.emplace_back(ms[i], std::move(s));
    }
    need(verify_chain(out).ok, "generated chain does not verify");
    return out;
}

CardMatrix omega_block(Rng& rng, const IndexSet& rows, const IndexSet& cols) {
    CardMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows.size; ++i)
        for (std::size_t j = 0; j < cols.size; ++j) {
            const std::uint64_t roll = rng.below(4);
            out.at(i, j) = roll == 3 ? Card::omega() : Card(Nat(roll));
        }
    out.at(0, 0) = Card::omega();
    return out;
}

bool chain_has_omega(const CardChain& doc) {
    auto scan = [](const CardMatrix& m) { return !all_finite(m); };
    if (scan(doc.A) || scan(doc.B)) return true;
    for (const auto& [r, s] : doc.steps)
        if (scan(r) || scan(s)) return true;
    return false;
}

// Lag-2 chain whose middle holds two vertices the forward pass alone would
// drop (they feed nothing back toward A) plus one genuinely dead vertex that
// carries an infinite multiplicity.
CardChain backward_pass_case() {
    CardChain doc;
    doc.A = to_card(sq("V", {{0}}));
    doc.B = to_card(sq("W", {{0, 2}, {0, 0}}));
    doc.steps.emplace_back(card("V", "U", {{1, 0, 0}}), card("U", "V", {{0}, {0}, {0}}));
    doc.steps.emplace_back(card("U", "W", {{0, 1}, {0, 1}, {0, 0}}),
                           card("W", "U", {{1, 1, -1}, {0, 0, 0}}));
    need(verify_card_chain(doc).ok, "backward-pass case does not verify");
    return doc;
}

SSEChain check_trim(const CardChain& padded, const NatMatrix& a0, const NatMatrix& b0) {
    SSEChain out = trim_chain(padded);
    need(out.A == a0 && out.B == b0, "trim must keep the endpoints bit-identical");
    need(verify_chain(out).ok, "trimmed chain does not verify");
    need(trim_chain(to_card_chain(out)) == out, "trim must be idempotent");
    return out;
}

void criterion_seven() {
    Rng rng(77210);
    for (int trial = 0; trial < 49; ++trial) {
        const std::size_t lag = 2 + trial % 2;
        const SSEChain base = cyclic_chain(rng, 2, lag, 2);
        CardChain padded = to_card_chain(base);
        const std::size_t cut = 1 + rng.below(lag - 1);
        const int style = trial % 3;
        if (style == 0 || style == 2) {
            const CardMatrix e =
                omega_block(rng, padded.steps[cut - 1].first.cols(),
                            IndexSet{"P", 1 + rng.below(2)});
            padded = pad_sink(padded, cut, e);
        }
        if (style == 1 || style == 2) {
            const CardMatrix f =
                omega_block(rng, IndexSet{"P", 1 + rng.below(2)},
                            padded.steps[cut - 1].first.cols());
            padded = pad_source(padded, cut, f);
        }
        need(verify_card_chain(padded).ok, "padded chain does not verify");
        need(chain_has_omega(padded), "padding should have introduced an infinite entry");

        const SSEChain out = check_trim(padded, base.A, base.B);
        need(chain_same_entries(out, base), "trim should recover the tight core chain");
    }

    const CardChain doc = backward_pass_case();
    need(chain_has_omega(doc), "the backward-pass case should carry an infinite entry");
    const SSEChain out = check_trim(doc, sq("V", {{0}}), sq("W", {{0, 2}, {0, 0}}));
    need(doc.steps[0].first.n_cols() == 3 && out.steps[0].first.n_cols() == 2,
         "exactly the dead middle vertex should be deleted");
}

// ------------------------- criterion 8: capped sweep and stored witness

void criterion_eight(const fs::path& scratch) {
    const std::string src = SHIFTEQ_SOURCE_DIR;
    CliResult sweep = run_cli("search-se " + src + "/examples/ak3_A.json " + src +
                                  "/examples/ak3_B.json --max-lag 3 --entry-cap 12",
                              scratch, "8sweep");
    need(sweep.code != 1, "a capped sweep may never report NONE");
    need(sweep.code == 2, "expected the inconclusive outcome, exit code " +
                              std::to_string(sweep.code));

    ArtifactFile art = load_artifact(src + "/tests/data/ak3_witness.json");
    need(art.kind == "chain" && art.chain.has_value(), "stored witness should be a chain");
    const CardChain& ch = *art.chain;
    need(ch.lag() == 1, "stored witness should be a one-step chain");

    const NatMatrix a = sq("V", {{1, 3}, {2, 1}});
    const NatMatrix b = sq("W", {{1, 6}, {1, 1}});
    const NatMatrix am = mat_pow(a, Lag(3)), bm = mat_pow(b, Lag(3));
    const NatMatrix r = to_nat(ch.steps[0].first);
    const NatMatrix s = to_nat(ch.steps[0].second);
    need(to_nat(ch.A) == am && to_nat(ch.B) == bm,
         "stored witness endpoints should be the cubed pair");
    need(mat_mul(r, s) == am, "stored witness fails the first product relation");
    need(mat_mul(s, r) == bm, "stored witness fails the second product relation");
    need(mat_mul(a, r) == mat_mul(r, b), "stored witness fails the first intertwining relation");
    need(mat_mul(b, s) == mat_mul(s, a), "stored witness fails the second intertwining relation");
}

// ------------------- criterion 9: search versus brute-force enumeration

// Exhaustive check for R, S with RS = A and SR = B over entries bounded by
// the largest entry appearing in A or B. Deliberately a different algorithm
// and representation from the library search: one odometer over every cell of
// both unknowns, products recomputed from scratch.
bool oracle_factors(const Grid& a, const Grid& b) {
    const std::size_t n = a.size(), p = b.size();
    std::uint64_t bound = 0;
    for (const auto& row : a)
        for (std::uint64_t v : row) bound = std::max(bound, v);
    for (const auto& row : b)
        for (std::uint64_t v : row) bound = std::max(bound, v);

    const std::size_t cells = 2 * n * p;
    std::vector<std::uint64_t> cell(cells, 0);
    const auto rat = [&](std::size_t i, std::size_t j) { return cell[i * p + j]; };
    const auto sat = [&](std::size_t i, std::size_t j) { return cell[n * p + i * n + j]; };
    for (;;) {
        bool match = true;
        for (std::size_t i = 0; i < n && match; ++i)
            for (std::size_t k = 0; k < n && match; ++k) {
                std::uint64_t acc = 0;
                for (std::size_t j = 0; j < p; ++j) acc += rat(i, j) * sat(j, k);
                match = acc == a[i][k];
            }
        for (std::size_t i = 0; i < p && match; ++i)
            for (std::size_t k = 0; k < p && match; ++k) {
                std::uint64_t acc = 0;
                for (std::size_t j = 0; j < n; ++j) acc += sat(i, j) * rat(j, k);
                match = acc == b[i][k];
            }
        if (match) return true;
        std::size_t idx = 0;
        while (idx < cells && ++cell[idx] > bound) cell[idx++] = 0;
        if (idx == cells) return false;
    }
}

void agree_with_oracle(const Grid& a, const Grid& b) {
    const NatMatrix na = grid_to_nat(a, IndexSet{"V", a.size()}, IndexSet{"V", a.size()});
    const NatMatrix nb = grid_to_nat(b, IndexSet{"W", b.size()}, IndexSet{"W", b.size()});
    SearchCaps caps;
    caps.node_budget = 50000000;
    const SearchOutcome out = factor_elementary(na, nb, caps);
    need(out.status != SearchStatus::UNKNOWN,
         "entries sit below the derived bound, so the verdict must be decisive");
    const bool oracle = oracle_factors(a, b);
    need((out.status == SearchStatus::FOUND) == oracle,
         std::string("search and enumeration disagree: search says ") +
             status_name(out.status));
    if (out.status == SearchStatus::FOUND) {
        need(out.chain.has_value() && out.chain->lag() == 1, "missing witness chain");
        const Grid r = grid_of(out.chain->steps[0].first);
        const Grid s = grid_of(out.chain->steps[0].second);
        need(grid_mul(r, s) == a && grid_mul(s, r) == b, "found witness fails re-multiplication");
    }
}

std::vector<Grid> all_grids(std::size_t n, std::uint64_t max) {
    const std::size_t cells = n * n;
    std::vector<Grid> out;
    Grid g(n, std::vector<std::uint64_t>(n, 0));
    for (;;) {
        out.push_back(g);
        std::size_t idx = 0;
        while (idx < cells && ++g[idx / n][idx % n] > max) g[idx / n][idx % n] = 0, ++idx;
        if (idx == cells) return out;
    }
}

Grid random_grid(Rng& rng, std::size_t n, long max) {
    Grid g(n, std::vector<std::uint64_t>(n, 0));
    for (auto& row : g)
        for (auto& v : row) v = static_cast<std::uint64_t>(rng.entry(max));
    return g;
}

void criterion_nine() {
    const std::vector<Grid> ones = all_grids(1, 2);
    const std::vector<Grid> twos = all_grids(2, 2);

    for (const Grid& a : ones)
        for (const Grid& b : ones) agree_with_oracle(a, b);
    for (const Grid& a : ones)
        for (const Grid& b : twos) {
            agree_with_oracle(a, b);
            agree_with_oracle(b, a);
        }
    for (const Grid& a : twos)
        for (const Grid& b : twos) agree_with_oracle(a, b);

    // Full three-by-three versus one-by-one family.
    const std::vector<Grid> threes = all_grids(3, 2);
    for (const Grid& a : threes)
        for (const Grid& b : ones) {
            agree_with_oracle(a, b);
            agree_with_oracle(b, a);
        }

    Rng rng(903903);
    for (int trial = 0; trial < 150; ++trial) {
        agree_with_oracle(random_grid(rng, 2, 2), random_grid(rng, 3, 2));
        agree_with_oracle(random_grid(rng, 3, 2), random_grid(rng, 2, 2));
    }

    // Size three against size three: 0/1 entries keep the enumeration small;
    // planted factorizations exercise the FOUND path.
    for (int trial = 0; trial < 60; ++trial)
        agree_with_oracle(random_grid(rng, 3, 1), random_grid(rng, 3, 1));
    int planted = 0;
    while (planted < 30) {
        const std::size_t p = 1 + rng.below(3);
        Grid r(3, std::vector<std::uint64_t>(p, 0)), s(p, std::vector<std::uint64_t>(3, 0));
        for (auto& row : r)
            for (auto& v : row) v = rng.below(2);
        for (auto& row : s)
            for (auto& v : row) v = rng.below(2);
        const Grid a = grid_mul(r, s), b0 = grid_mul(s, r);
        Grid b(3, std::vector<std::uint64_t>(3, 0));
        if (p == 3)
            b = b0;
        else
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j) b[i][j] = b0[i][j];
        if (p < 3) continue;  // keep both sides size three
        std::uint64_t top = 0;
        for (const auto& row : a)
            for (std::uint64_t v : row) top = std::max(top, v);
        for (const auto& row : b)
            for (std::uint64_t v : row) top = std::max(top, v);
        if (top > 1) continue;
        agree_with_oracle(a, b);
        ++planted;
    }
    for (int trial = 0; trial < 2; ++trial)
        agree_with_oracle(random_grid(rng, 3, 2), random_grid(rng, 3, 2));
}

}  // namespace

int main() {
    const fs::path scratch =
        fs::temp_directory_path() / ("shifteq-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(scratch);

    int failures = 0;
    const auto run = [&](int number, const std::string& label, auto&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        try {
            body();
        } catch (const CheckFail& f) {
            ok = false;
            detail = f.msg;
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << "criterion " << number << ": " << (ok ? "PASS" : "FAIL") << " - " << label << " ("
             << std::fixed;
        line.precision(2);
        line << secs << "s)";
        if (!ok) line << " [" << detail << "]";
        std::cout << line.str() << std::endl;
        if (!ok) ++failures;
    };

    std::vector<SuiteItem> suite;
    run(1, "worked example decided through the command line", [&] { criterion_one(scratch); });
    run(2, "the three shift conditions agree on 200 generated instances",
        [&] { criterion_two(suite); });
    run(3, "intermediate identity holds at every level on aligned instances",
        [&] { criterion_three(suite); });
    run(4, "iterated sink removal reaches the one-vertex matrix in two rounds",
        [&] { criterion_four(); });
    run(5, "tensor of descriptors matches the matrix product on 500 pairs",
        [&] { criterion_five(); });
    run(6, "quotient and corner reductions verify on 200 planted pairs",
        [&] { criterion_six(); });
    run(7, "trimming strips padding and infinite entries from 50 chains",
        [&] { criterion_seven(); });
    run(8, "capped lag sweep stays sound and the stored witness re-verifies",
        [&] { criterion_eight(scratch); });
    run(9, "elementary search agrees with brute-force enumeration",
        [&] { criterion_nine(); });

    std::error_code ec;
    fs::remove_all(scratch, ec);

    if (failures == 0) {
        std::cout << "acceptance: all 9 criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria failed" << std::endl;
    return 1;
}
