#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shifteq/errors.hpp"
#include "shifteq/index_set.hpp"
#include "shifteq/numeric.hpp"

namespace shifteq {

// Rectangular matrix with named row/column index sets. Entry type is either
// Nat (matrices over ℕ) or Card (matrices over ℕ ∪ {ω}).
template <class T>
class BasicMatrix {
public:
    BasicMatrix() = default;
    BasicMatrix(IndexSet rows, IndexSet cols)
        : rows_(std::move(rows)), cols_(std::move(cols)), data_(rows_.size * cols_.size) {}
    BasicMatrix(IndexSet rows, IndexSet cols, std::vector<T> data)
        : rows_(std::move(rows)), cols_(std::move(cols)), data_(std::move(data)) {
        if (data_.size() != rows_.size * cols_.size)
            throw InvariantViolation("matrix data size does not match index sets");
    }

    const IndexSet& rows() const { return rows_; }
    const IndexSet& cols() const { return cols_; }
    std::size_t n_rows() const { return rows_.size; }
    std::size_t n_cols() const { return cols_.size; }
    bool is_square() const { return rows_ == cols_; }

    const T& at(std::size_t i, std::size_t j) const {
        check_bounds(i, j);
        return data_[i * cols_.size + j];
    }
    T& at(std::size_t i, std::size_t j) {
        check_bounds(i, j);
        return data_[i * cols_.size + j];
    }

    friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const BasicMatrix& a, const BasicMatrix& b) { return !(a == b); }

    bool row_is_zero(std::size_t i) const {
        for (std::size_t j = 0; j < n_cols(); ++j)
            if (!entry_is_zero(at(i, j))) return false;
        return true;
    }
    bool col_is_zero(std::size_t j) const {
        for (std::size_t i = 0; i < n_rows(); ++i)
            if (!entry_is_zero(at(i, j))) return false;
        return true;
    }

    // Restriction to kept rows/columns (ascending position lists), relabelled
    // onto fresh index sets of matching sizes.
    BasicMatrix submatrix(const std::vector<std::size_t>& keep_rows,
                          const std::vector<std::size_t>& keep_cols,
                          IndexSet new_rows, IndexSet new_cols) const {
        if (new_rows.size != keep_rows.size() || new_cols.size != keep_cols.size())
            throw InvariantViolation("submatrix index sets do not match kept positions");
        BasicMatrix out(std::move(new_rows), std::move(new_cols));
        for (std::size_t i = 0; i < keep_rows.size(); ++i)
            for (std::size_t j = 0; j < keep_cols.size(); ++j)
                out.at(i, j) = at(keep_rows[i], keep_cols[j]);
        return out;
    }

    static bool entry_is_zero(const Nat& v) { return v == 0; }
    static bool entry_is_zero(const Card& v) { return v.is_zero(); }

private:
    void check_bounds(std::size_t i, std::size_t j) const {
        if (i >= rows_.size || j >= cols_.size)
            throw InvariantViolation("matrix index out of range");
    }

    IndexSet rows_, cols_;
    std::vector<T> data_;
};

using NatMatrix = BasicMatrix<Nat>;
using CardMatrix = BasicMatrix<Card>;

NatMatrix mat_mul(const NatMatrix& a, const NatMatrix& b);
NatMatrix mat_pow(const NatMatrix& a, Lag m);
bool is_essential(const NatMatrix& a);
bool is_essential(const CardMatrix& a);
std::size_t rank_rational(const NatMatrix& a);
CardMatrix card_mul(const CardMatrix& c, const CardMatrix& d);

NatMatrix identity_matrix(const IndexSet& v);
Nat trace(const NatMatrix& a);
Nat max_entry(const NatMatrix& a);
Nat max_row_entry(const NatMatrix& a, std::size_t i);

CardMatrix to_card(const NatMatrix& a);
// Requires every entry finite.
NatMatrix to_nat(const CardMatrix& a);
bool all_finite(const CardMatrix& a);

void require_nonnegative(const NatMatrix& a);

std::string matrix_to_string(const NatMatrix& a);
std::string matrix_to_string(const CardMatrix& a);

}  // namespace shifteq
