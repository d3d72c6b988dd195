#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shifteq/chain.hpp"
#include "shifteq/correspondence.hpp"
#include "shifteq/errors.hpp"
#include "shifteq/matrix.hpp"
#include "shifteq/pathspace.hpp"
#include "shifteq/reduction.hpp"
#include "shifteq/search.hpp"
#include "shifteq/serialize.hpp"
#include "shifteq/shifts.hpp"

using namespace shifteq;

namespace {

// Exit codes: 0 FOUND/true/success, 1 NONE/false, 2 UNKNOWN,
// 64 usage errors, 65 malformed or invalid data.
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageFailure {
    std::string message;
};

NatMatrix load_finite_matrix(const std::string& path) {
    ArtifactFile art = load_artifact(path);
    if (art.kind != "matrix" || !art.matrix)
        throw ParseError(path + ": expected a matrix artifact, got kind \"" + art.kind +
                         "\"");
    if (!all_finite(*art.matrix))
        throw ParseError(path + ": this command needs finite entries");
    return to_nat(*art.matrix);
}

CardChain load_chain_artifact(const std::string& path) {
    ArtifactFile art = load_artifact(path);
    if (art.kind != "chain" || !art.chain)
        throw ParseError(path + ": expected a chain artifact, got kind \"" + art.kind +
                         "\"");
    return *art.chain;
}

ConcreteShift load_shift_artifact(const std::string& path) {
    ArtifactFile art = load_artifact(path);
    if (art.kind != "concrete-shift" || !art.shift)
        throw ParseError(path + ": expected a concrete-shift artifact, got kind \"" +
                         art.kind + "\"");
    return *art.shift;
}

CorrDescriptor load_descriptor_like(const std::string& path) {
    ArtifactFile art = load_artifact(path);
    if (art.kind == "descriptor" && art.descriptor) return *art.descriptor;
    if (art.kind == "matrix" && art.matrix) return descriptor_from_matrix(*art.matrix);
    throw ParseError(path + ": expected a descriptor or matrix artifact, got kind \"" +
                     art.kind + "\"");
}

std::string path_str(const Path& p) {
    std::string out;
    for (const EdgeTriple& e : p) out += e.describe();
    return out;
}

int status_exit(SearchStatus s) {
    switch (s) {
        case SearchStatus::FOUND: return 0;
        case SearchStatus::NONE: return 1;
        case SearchStatus::UNKNOWN: return 2;
    }
    return kExitData;
}

// Flag bundle shared by the search subcommands.
struct SearchFlags {
    std::uint64_t entry_cap = 8;
    std::uint64_t node_budget = 2000000;
    std::string inner_dims;
    int max_lag = 4;
    std::string out_path;
};

void add_search_flags(CLI::App* sub, SearchFlags& f, bool with_inner, bool with_max_lag) {
    sub->add_option("--entry-cap", f.entry_cap, "largest entry tried in witness matrices")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--node-budget", f.node_budget,
                    "search nodes spent before giving up with UNKNOWN")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_inner)
        sub->add_option("--inner-dims", f.inner_dims,
                        "inner dimension range, written a..b");
    if (with_max_lag)
        sub->add_option("--max-lag", f.max_lag, "largest lag tried")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    sub->add_option("-o,--output", f.out_path, "write the found witness artifact here");
}

SearchCaps to_caps(const SearchFlags& f) {
    SearchCaps caps;
    caps.entry_cap = Nat(static_cast<unsigned long>(f.entry_cap));
    caps.node_budget = f.node_budget;
    caps.max_lag = f.max_lag;
    if (!f.inner_dims.empty()) {
        const auto pos = f.inner_dims.find("..");
        bool ok = pos != std::string::npos && pos > 0 && pos + 2 < f.inner_dims.size();
        if (ok) {
            const std::string lo = f.inner_dims.substr(0, pos);
            const std::string hi = f.inner_dims.substr(pos + 2);
            ok = lo.find_first_not_of("0123456789") == std::string::npos &&
                 hi.find_first_not_of("0123456789") == std::string::npos;
            if (ok) {
                caps.inner_min = std::stoull(lo);
                caps.inner_max = std::stoull(hi);
            }
        }
        if (!ok)
            throw UsageFailure{"--inner-dims expects a range like 1..4, got \"" +
                               f.inner_dims + "\""};
        if (caps.inner_min == 0 || caps.inner_min > caps.inner_max)
            throw UsageFailure{"--inner-dims range must be positive and ordered"};
    }
    return caps;
}

void report_outcome(const SearchOutcome& out) {
    std::cout << status_name(out.status) << ": " << out.certificate << "\n";
}

void write_witness(const ArtifactFile& art, const std::string& path) {
    save_artifact(art, path);
    std::cout << "witness written to " << path << "\n";
}

int run_verify_shift(const std::string& path, unsigned threads) {
    ConcreteShift cs = load_shift_artifact(path);
    ShiftClassification cls = classify(cs, threads);
    const auto line = [](const char* name, bool ok, const std::optional<Path>& witness) {
        std::cout << name << ": " << (ok ? "yes" : "no") << "\n";
        if (!ok && witness)
            std::cout << "  first failing path: " << path_str(*witness) << "\n";
    };
    line("aligned", cls.aligned, cls.aligned_witness);
    line("balanced", cls.balanced, cls.balanced_witness);
    line("compatible", cls.compatible, cls.compatible_witness);
    return cls.aligned && cls.balanced && cls.compatible ? 0 : 1;
}

int run_search_elementary(const std::string& a_path, const std::string& b_path,
                          const SearchFlags& flags) {
    NatMatrix a = load_finite_matrix(a_path), b = load_finite_matrix(b_path);
    SearchOutcome out = factor_elementary(a, b, to_caps(flags));
    report_outcome(out);
    if (out.status == SearchStatus::FOUND && !flags.out_path.empty())
        write_witness(chain_artifact(*out.chain), flags.out_path);
    return status_exit(out.status);
}

int run_search_se(const std::string& a_path, const std::string& b_path,
                  const SearchFlags& flags, std::optional<int> lag) {
    NatMatrix a = load_finite_matrix(a_path), b = load_finite_matrix(b_path);
    SearchCaps caps = to_caps(flags);
    SearchOutcome out =
        lag ? search_se(a, b, Lag(*lag), caps) : search_se_sweep(a, b, caps);
    report_outcome(out);
    if (out.status == SearchStatus::FOUND) {
        std::cout << "lag: " << out.se->m.m << "\n";
        if (!flags.out_path.empty()) {
            // The four-relation witness is stored as the one-step chain
            // A^m = R S, S R = B^m; the intertwining pair is re-derivable.
            SSEChain powers{mat_pow(a, out.se->m), mat_pow(b, out.se->m),
                            {{out.se->r, out.se->s}}};
            write_witness(chain_artifact(powers), flags.out_path);
        }
    }
    return status_exit(out.status);
}

int run_search_sse(const std::string& a_path, const std::string& b_path,
                   const SearchFlags& flags) {
    NatMatrix a = load_finite_matrix(a_path), b = load_finite_matrix(b_path);
    SearchOutcome out = search_sse_chain(a, b, to_caps(flags));
    report_outcome(out);
    if (out.status == SearchStatus::FOUND) {
        std::cout << "chain length: " << out.chain->lag() << "\n";
        if (!flags.out_path.empty())
            write_witness(chain_artifact(*out.chain), flags.out_path);
    }
    return status_exit(out.status);
}

int run_search_aligned(const std::string& a_path, const std::string& b_path,
                       const std::vector<std::string>& with_paths, int lag,
                       const SearchFlags& flags) {
    NatMatrix a = load_finite_matrix(a_path), b = load_finite_matrix(b_path);
    NatMatrix r = load_finite_matrix(with_paths[0]), s = load_finite_matrix(with_paths[1]);
    SearchOutcome out = search_aligned(a, b, Lag(lag), r, s, to_caps(flags));
    report_outcome(out);
    if (out.status == SearchStatus::FOUND && !flags.out_path.empty())
        write_witness(shift_artifact(*out.shift), flags.out_path);
    return status_exit(out.status);
}

int run_regularize(const std::string& path, const std::string& out_path) {
    CardChain doc = load_chain_artifact(path);
    const auto finite = [](const CardMatrix& m) { return all_finite(m); };
    bool ok = finite(doc.A) && finite(doc.B);
    for (const auto& [r, s] : doc.steps) ok = ok && finite(r) && finite(s);
    if (!ok)
        throw ParseError(path + ": regularize needs a finite chain; run trim first");
    SSEChain chain{to_nat(doc.A), to_nat(doc.B), {}};
    for (const auto& [r, s] : doc.steps) chain.steps.emplace_back(to_nat(r), to_nat(s));
    SSEChain out = essentialize_chain(chain);
    ValidationReport report = verify_chain(out);
    std::cout << "verification: " << (report.ok ? "ok" : report.message) << "\n";
    std::cout << "chain length: " << out.lag() << "\n";
    for (std::size_t i = 0; i < out.steps.size(); ++i)
        std::cout << "step " << i + 1 << " inner set: "
                  << out.steps[i].first.cols().describe() << "\n";
    if (!out_path.empty()) {
        save_artifact(chain_artifact(out), out_path);
        std::cout << "chain written to " << out_path << "\n";
    }
    return report.ok ? 0 : kExitData;
}

int run_trim(const std::string& path, const std::string& out_path) {
    CardChain doc = load_chain_artifact(path);
    SSEChain out = trim_chain(doc);
    ValidationReport report = verify_chain(out);
    std::cout << "verification: " << (report.ok ? "ok" : report.message) << "\n";
    std::cout << "chain length: " << out.lag() << "\n";
    for (std::size_t i = 0; i < out.steps.size(); ++i)
        std::cout << "step " << i + 1 << " inner set: "
                  << out.steps[i].first.cols().describe() << "\n";
    if (!out_path.empty()) {
        save_artifact(chain_artifact(out), out_path);
        std::cout << "chain written to " << out_path << "\n";
    }
    return report.ok ? 0 : kExitData;
}

int run_tensor(const std::string& x_path, const std::string& y_path,
               const std::string& out_path) {
    CorrDescriptor x = load_descriptor_like(x_path);
    CorrDescriptor y = load_descriptor_like(y_path);
    CorrDescriptor t = tensor_descriptor(x, y);
    std::cout << "multiplicities: " << matrix_to_string(t.mult) << "\n";
    DescriptorTraits traits = descriptor_predicates(t);
    std::cout << "injective: " << (traits.injective ? "yes" : "no")
              << ", proper: " << (traits.proper ? "yes" : "no")
              << ", full: " << (traits.full ? "yes" : "no")
              << ", regular: " << (traits.regular ? "yes" : "no") << "\n";
    if (!out_path.empty()) {
        save_artifact(descriptor_artifact(t), out_path);
        std::cout << "descriptor written to " << out_path << "\n";
    }
    return 0;
}

int run_examples(const std::string& dir, std::optional<int> ak) {
    std::filesystem::create_directories(dir);
    const auto put = [&](const std::string& name, const NatMatrix& m) {
        const std::string path = dir + "/" + name;
        save_artifact(matrix_artifact(m), path);
        std::cout << "wrote " << path << "\n";
    };
    const auto square = [](const std::string& set, std::vector<std::vector<long>> data) {
        IndexSet v{set, data.size()};
        NatMatrix m(v, v);
        for (std::size_t i = 0; i < v.size; ++i)
            for (std::size_t j = 0; j < v.size; ++j) m.at(i, j) = data[i][j];
        return m;
    };
    put("ex58_A.json", square("V", {{1, 1, 0}, {0, 0, 1}, {1, 1, 1}}));
    put("ex58_B.json", square("W", {{1, 1}, {1, 1}}));
    put("ex58_C.json", square("Z", {{2}}));
    put("sink_chain.json", square("V", {{1, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
    if (ak) {
        const long k = *ak;
        NatMatrix a = square("V", {{1, k}, {k - 1, 1}});
        NatMatrix b = square("W", {{1, 1}, {1, 1}});
        b.at(0, 1) = Nat(k) * Nat(k - 1);
        put("ak" + std::to_string(k) + "_A.json", a);
        put("ak" + std::to_string(k) + "_B.json", b);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t default_budget = 2000000;
    if (const char* env = std::getenv("SHIFTEQ_NODE_BUDGET")) {
        const std::string s(env);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos ||
            s == "0") {
            std::cerr << "SHIFTEQ_NODE_BUDGET must be a positive integer, got \"" << s
                      << "\"\n";
            return kExitUsage;
        }
        default_budget = std::stoull(s);
    }

    CLI::App app{"exact search, verification, and reduction tools for shift "
                 "equivalence of nonnegative integer matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized generator workflows");
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for verification")
        ->check(CLI::PositiveNumber);

    // verify-shift
    std::string vs_path;
    CLI::App* vs = app.add_subcommand(
        "verify-shift", "classify a concrete shift as aligned / balanced / compatible");
    vs->add_option("shift", vs_path, "concrete-shift artifact")->required();

    // search-elementary
    std::string el_a, el_b;
    SearchFlags el_flags;
    el_flags.node_budget = default_budget;
    CLI::App* el = app.add_subcommand(
        "search-elementary", "search for R, S with A = RS and SR = B");
    el->add_option("A", el_a, "matrix artifact")->required();
    el->add_option("B", el_b, "matrix artifact")->required();
    add_search_flags(el, el_flags, true, false);

    // search-se
    std::string se_a, se_b;
    SearchFlags se_flags;
    se_flags.node_budget = default_budget;
    int se_lag = 1;
    CLI::App* se = app.add_subcommand(
        "search-se",
        "search for a shift equivalence at one lag (--lag) or sweeping lags "
        "1..--max-lag");
    se->add_option("A", se_a, "matrix artifact")->required();
    se->add_option("B", se_b, "matrix artifact")->required();
    CLI::Option* se_lag_opt =
        se->add_option("--lag", se_lag, "single lag to try")->check(CLI::PositiveNumber);
    add_search_flags(se, se_flags, false, true);

    // search-sse
    std::string sse_a, sse_b;
    SearchFlags sse_flags;
    sse_flags.node_budget = default_budget;
    CLI::App* sse = app.add_subcommand(
        "search-sse", "search for a chain of elementary factorizations linking A to B");
    sse->add_option("A", sse_a, "matrix artifact")->required();
    sse->add_option("B", sse_b, "matrix artifact")->required();
    add_search_flags(sse, sse_flags, true, true);

    // search-aligned
    std::string al_a, al_b;
    std::vector<std::string> al_with;
    SearchFlags al_flags;
    al_flags.node_budget = default_budget;
    int al_lag = 1;
    CLI::App* al = app.add_subcommand(
        "search-aligned",
        "complete a shift-equivalence witness (R, S) to a compatible concrete shift");
    al->add_option("A", al_a, "matrix artifact")->required();
    al->add_option("B", al_b, "matrix artifact")->required();
    al->add_option("--with", al_with, "R and S matrix artifacts")
        ->expected(2)
        ->required();
    al->add_option("--lag", al_lag, "lag of the witness")->check(CLI::PositiveNumber);
    add_search_flags(al, al_flags, false, false);

    // regularize
    std::string reg_path, reg_out;
    CLI::App* reg = app.add_subcommand(
        "regularize", "make every intermediate matrix of a chain essential");
    reg->add_option("chain", reg_path, "chain artifact")->required();
    reg->add_option("-o,--output", reg_out, "write the regularized chain here");

    // trim
    std::string trim_path, trim_out;
    CLI::App* trim = app.add_subcommand(
        "trim", "cut a padded or ω-augmented chain down to an all-finite one");
    trim->add_option("chain", trim_path, "chain artifact")->required();
    trim->add_option("-o,--output", trim_out, "write the trimmed chain here");

    // tensor
    std::string tn_x, tn_y, tn_out;
    CLI::App* tn = app.add_subcommand(
        "tensor", "tensor two correspondence descriptors over their middle algebra");
    tn->add_option("X", tn_x, "descriptor or matrix artifact")->required();
    tn->add_option("Y", tn_y, "descriptor or matrix artifact")->required();
    tn->add_option("-o,--output", tn_out, "write the product descriptor here");

    // examples
    std::string ex_dir = ".";
    int ex_ak = 0;
    CLI::App* ex = app.add_subcommand("examples", "materialize the bundled example corpus");
    ex->add_option("-o,--output", ex_dir, "directory to write into")
        ->capture_default_str();
    CLI::Option* ex_ak_opt =
        ex->add_option("--ak", ex_ak, "also write the lag-k pair A_k, B_k for this k")
            ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (vs->parsed()) return run_verify_shift(vs_path, threads);
        if (el->parsed()) return run_search_elementary(el_a, el_b, el_flags);
        if (se->parsed()) {
            if (se_lag_opt->count() > 0 && se->count("--max-lag") > 0) {
                std::cerr << "choose one of --lag and --max-lag\n";
                return kExitUsage;
            }
            std::optional<int> lag;
            if (se_lag_opt->count() > 0) lag = se_lag;
            return run_search_se(se_a, se_b, se_flags, lag);
        }
        if (sse->parsed()) return run_search_sse(sse_a, sse_b, sse_flags);
        if (al->parsed()) return run_search_aligned(al_a, al_b, al_with, al_lag, al_flags);
        if (reg->parsed()) return run_regularize(reg_path, reg_out);
        if (trim->parsed()) return run_trim(trim_path, trim_out);
        if (tn->parsed()) return run_tensor(tn_x, tn_y, tn_out);
        if (ex->parsed())
            return run_examples(ex_dir, ex_ak_opt->count() > 0
                                            ? std::optional<int>(ex_ak)
                                            : std::nullopt);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const UsageFailure& u) {
        std::cerr << u.message << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
