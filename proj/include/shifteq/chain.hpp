#pragma once

#include <utility>
#include <vector>

#include "shifteq/matrix.hpp"
#include "shifteq/pathspace.hpp"

namespace shifteq {

// Chain of elementary factorizations linking A to B:
//   A = R_1 S_1,   S_i R_i = R_{i+1} S_{i+1} (i < m),   S_m R_m = B.
// An empty step list is the degenerate chain and requires A = B.
struct SSEChain {
    NatMatrix A, B;
    std::vector<std::pair<NatMatrix, NatMatrix>> steps;

    std::size_t lag() const { return steps.size(); }

    friend bool operator==(const SSEChain& a, const SSEChain& b) {
        return a.A == b.A && a.B == b.B && a.steps == b.steps;
    }
    friend bool operator!=(const SSEChain& a, const SSEChain& b) { return !(a == b); }
};

// Same linkage over ℕ ∪ {ω}; products are taken in cardinal arithmetic.
struct CardChain {
    CardMatrix A, B;
    std::vector<std::pair<CardMatrix, CardMatrix>> steps;

    std::size_t lag() const { return steps.size(); }
};

ValidationReport verify_chain(const SSEChain& chain);
ValidationReport verify_card_chain(const CardChain& chain);

// X_i = S_i R_i for i = 1..m; the last one equals B on a verified chain.
std::vector<NatMatrix> chain_intermediates(const SSEChain& chain);

CardChain to_card_chain(const SSEChain& chain);

}  // namespace shifteq
