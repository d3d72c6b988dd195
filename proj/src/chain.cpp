#include "shifteq/chain.hpp"

#include <string>

namespace shifteq {

namespace {

template <typename Matrix, typename Mul>
ValidationReport verify_impl(const Matrix& a, const Matrix& b,
                             const std::vector<std::pair<Matrix, Matrix>>& steps, Mul mul) {
    if (!a.is_square()) return ValidationReport::bad("A is not square");
    if (!b.is_square()) return ValidationReport::bad("B is not square");
    if (steps.empty()) {
        if (a != b) return ValidationReport::bad("empty chain requires A = B");
        return ValidationReport::good();
    }

    const std::size_t m = steps.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Matrix& r = steps[i].first;
        const Matrix& s = steps[i].second;
        const IndexSet& left = i == 0 ? a.rows() : steps[i - 1].first.cols();
        if (r.rows() != left || s.cols() != left || s.rows() != r.cols())
            return ValidationReport::bad("step " + std::to_string(i + 1) +
                                             ": index sets do not line up",
                                         i);
    }
    if (steps.back().first.cols() != b.rows())
        return ValidationReport::bad("last step is not indexed by B's set", m - 1);

    if (mul(steps[0].first, steps[0].second) != a)
        return ValidationReport::bad("A != R_1 S_1", 0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (mul(steps[i].second, steps[i].first) !=
            mul(steps[i + 1].first, steps[i + 1].second))
            return ValidationReport::bad("S_" + std::to_string(i + 1) + " R_" +
                                             std::to_string(i + 1) + " != R_" +
                                             std::to_string(i + 2) + " S_" +
                                             std::to_string(i + 2),
                                         i);
    }
    if (mul(steps.back().second, steps.back().first) != b)
        return ValidationReport::bad("S_m R_m != B", m - 1);
    return ValidationReport::good();
}

}  // namespace

ValidationReport verify_chain(const SSEChain& chain) {
    return verify_impl(chain.A, chain.B, chain.steps,
                       [](const NatMatrix& x, const NatMatrix& y) { return mat_mul(x, y); });
}

ValidationReport verify_card_chain(const CardChain& chain) {
    return verify_impl(chain.A, chain.B, chain.steps,
                       [](const CardMatrix& x, const CardMatrix& y) { return card_mul(x, y); });
}

std::vector<NatMatrix> chain_intermediates(const SSEChain& chain) {
    std::vector<NatMatrix> out;
    out.reserve(chain.steps.size());
    for (const auto& [r, s] : chain.steps) out.push_back(mat_mul(s, r));
    return out;
}

CardChain to_card_chain(const SSEChain& chain) {
    CardChain out{to_card(chain.A), to_card(chain.B), {}};
    out.steps.reserve(chain.steps.size());
    for (const auto& [r, s] : chain.steps) out.steps.emplace_back(to_card(r), to_card(s));
    return out;
}

}  // namespace shifteq
