#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "shifteq/matrix.hpp"

namespace shifteq::testing {

inline NatMatrix nat(const std::string& rows_name, const std::string& cols_name,
                     std::vector<std::vector<long>> data) {
    IndexSet r{rows_name, data.size()};
    IndexSet c{cols_name, data.empty() ? 0 : data[0].size()};
    NatMatrix out(r, c);
    for (std::size_t i = 0; i < r.size; ++i)
        for (std::size_t j = 0; j < c.size; ++j) out.at(i, j) = data[i][j];
    return out;
}

inline NatMatrix sq(const std::string& name, std::vector<std::vector<long>> data) {
    return nat(name, name, std::move(data));
}

// -1 stands for ω.
inline CardMatrix card(const std::string& rows_name, const std::string& cols_name,
                       std::vector<std::vector<long>> data) {
    IndexSet r{rows_name, data.size()};
    IndexSet c{cols_name, data.empty() ? 0 : data[0].size()};
    CardMatrix out(r, c);
    for (std::size_t i = 0; i < r.size; ++i)
        for (std::size_t j = 0; j < c.size; ++j)
            out.at(i, j) = data[i][j] < 0 ? Card::omega() : Card(Nat(data[i][j]));
    return out;
}

// Deterministic generator; modulo reduction keeps the draw sequence stable
// regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    long entry(long max_inclusive) { return static_cast<long>(below(max_inclusive + 1)); }

private:
    std::mt19937_64 engine_;
};

inline NatMatrix random_nat(Rng& rng, const IndexSet& rows, const IndexSet& cols,
                            long max_entry) {
    NatMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows.size; ++i)
        for (std::size_t j = 0; j < cols.size; ++j) out.at(i, j) = rng.entry(max_entry);
    return out;
}

}  // namespace shifteq::testing
