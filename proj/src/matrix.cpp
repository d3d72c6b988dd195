#include "shifteq/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace shifteq {

namespace {

void require_composable(const IndexSet& left_cols, const IndexSet& right_rows) {
    if (left_cols != right_rows)
        throw IncompatibleIndexSets("cannot compose " + left_cols.describe() + " with " +
                                    right_rows.describe());
}

}  // namespace

NatMatrix mat_mul(const NatMatrix& a, const NatMatrix& b) {
    require_composable(a.cols(), b.rows());
    NatMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t k = 0; k < a.n_cols(); ++k) {
            const Nat& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.n_cols(); ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

NatMatrix mat_pow(const NatMatrix& a, Lag m) {
    if (!a.is_square())
        throw NotSquare("mat_pow needs a square matrix, got " + a.rows().describe() + " x " +
                        a.cols().describe());
    NatMatrix out = a;
    for (int i = 1; i < m.m; ++i) out = mat_mul(out, a);
    return out;
}

template <class T>
static bool essential_impl(const BasicMatrix<T>& a) {
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        if (a.row_is_zero(i)) return false;
    for (std::size_t j = 0; j < a.n_cols(); ++j)
        if (a.col_is_zero(j)) return false;
    return true;
}

bool is_essential(const NatMatrix& a) { return essential_impl(a); }
bool is_essential(const CardMatrix& a) { return essential_impl(a); }

// Fraction-free Bareiss elimination; exact over ℤ so the rank is the rank
// over the rationals.
std::size_t rank_rational(const NatMatrix& a) {
    const std::size_t n = a.n_rows(), m = a.n_cols();
    std::vector<std::vector<Nat>> w(n, std::vector<Nat>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) w[i][j] = a.at(i, j);

    Nat prev_pivot = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < n; ++col) {
        std::size_t pivot_row = rank;
        while (pivot_row < n && w[pivot_row][col] == 0) ++pivot_row;
        if (pivot_row == n) continue;
        std::swap(w[rank], w[pivot_row]);
        const Nat pivot = w[rank][col];
        for (std::size_t i = rank + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j < m; ++j) {
                Nat num = w[i][j] * pivot - w[i][col] * w[rank][j];
                mpz_divexact(w[i][j].get_mpz_t(), num.get_mpz_t(), prev_pivot.get_mpz_t());
            }
            w[i][col] = 0;
        }
        prev_pivot = pivot;
        ++rank;
    }
    return rank;
}

CardMatrix card_mul(const CardMatrix& c, const CardMatrix& d) {
    require_composable(c.cols(), d.rows());
    CardMatrix out(c.rows(), d.cols());
    for (std::size_t i = 0; i < c.n_rows(); ++i)
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            Card sum;
            for (std::size_t k = 0; k < c.n_cols(); ++k) sum += c.at(i, k) * d.at(k, j);
            out.at(i, j) = sum;
        }
    return out;
}

NatMatrix identity_matrix(const IndexSet& v) {
    NatMatrix out(v, v);
    for (std::size_t i = 0; i < v.size; ++i) out.at(i, i) = 1;
    return out;
}

Nat trace(const NatMatrix& a) {
    if (!a.is_square()) throw NotSquare("trace needs a square matrix");
    Nat t = 0;
    for (std::size_t i = 0; i < a.n_rows(); ++i) t += a.at(i, i);
    return t;
}

Nat max_entry(const NatMatrix& a) {
    Nat m = 0;
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j) m = std::max(m, a.at(i, j));
    return m;
}

Nat max_row_entry(const NatMatrix& a, std::size_t i) {
    Nat m = 0;
    for (std::size_t j = 0; j < a.n_cols(); ++j) m = std::max(m, a.at(i, j));
    return m;
}

CardMatrix to_card(const NatMatrix& a) {
    CardMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j) out.at(i, j) = Card(a.at(i, j));
    return out;
}

NatMatrix to_nat(const CardMatrix& a) {
    NatMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            const Card& c = a.at(i, j);
            if (c.is_omega())
                throw InvariantViolation("ω entry at (" + std::to_string(i) + "," +
                                         std::to_string(j) + ") in finite conversion");
            out.at(i, j) = c.finite_value();
        }
    return out;
}

bool all_finite(const CardMatrix& a) {
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j)
            if (a.at(i, j).is_omega()) return false;
    return true;
}

void require_nonnegative(const NatMatrix& a) {
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t j = 0; j < a.n_cols(); ++j)
            if (a.at(i, j) < 0) throw InvariantViolation("negative entry in NatMatrix");
}

template <class T>
static std::string to_string_impl(const BasicMatrix<T>& a) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            if (j) os << ",";
            if constexpr (std::is_same_v<T, Nat>)
                os << a.at(i, j).get_str();
            else
                os << a.at(i, j).str();
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string matrix_to_string(const NatMatrix& a) { return to_string_impl(a); }
std::string matrix_to_string(const CardMatrix& a) { return to_string_impl(a); }

}  // namespace shifteq
