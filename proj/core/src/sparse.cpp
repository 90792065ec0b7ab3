#include "respars/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "respars/errors.hpp"

namespace respars {

SparseMatrix::SparseMatrix(std::uint32_t rows, std::uint32_t cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::uint32_t> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + std::size_t(1) || row_ptr_.front() != 0 ||
        row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
        throw PreconditionError("inconsistent CSR arrays");
    }
    for (std::uint32_t r = 0; r < rows_; ++r) {
        if (row_ptr_[r] > row_ptr_[r + 1]) throw PreconditionError("row_ptr not monotone");
        for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
            if (col_idx_[i] >= cols_) throw PreconditionError("column index out of range");
            if (i > row_ptr_[r] && col_idx_[i - 1] >= col_idx_[i]) {
                throw PreconditionError("columns not sorted and unique in row " + std::to_string(r));
            }
            if (!std::isfinite(values_[i])) throw PreconditionError("non-finite matrix entry");
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(std::uint32_t rows, std::uint32_t cols,
                                         std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw PreconditionError("triplet index out of range");
        }
        if (!std::isfinite(t.value)) throw PreconditionError("non-finite triplet value");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::size_t out = 0;
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        if (out > 0 && triplets[out - 1].row == triplets[i].row &&
            triplets[out - 1].col == triplets[i].col) {
            triplets[out - 1].value += triplets[i].value;
        } else {
            triplets[out++] = triplets[i];
        }
    }
    triplets.resize(out);

    std::vector<std::size_t> row_ptr(rows + std::size_t(1), 0);
    std::vector<std::uint32_t> col_idx(out);
    std::vector<double> values(out);
    for (const Triplet& t : triplets) ++row_ptr[t.row + 1];
    for (std::uint32_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
    for (std::size_t i = 0; i < out; ++i) {
        col_idx[i] = triplets[i].col;
        values[i] = triplets[i].value;
    }
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrix::at(std::uint32_t r, std::uint32_t c) const {
    if (r >= rows_ || c >= cols_) throw PreconditionError("at() index out of range");
    const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    const auto it = std::lower_bound(begin, end, c);
    if (it != end && *it == c) {
        return values_[static_cast<std::size_t>(it - col_idx_.begin())];
    }
    return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
    const std::uint32_t d = std::min(rows_, cols_);
    std::vector<double> diag(d);
    for (std::uint32_t i = 0; i < d; ++i) diag[i] = at(i, i);
    return diag;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.cols() || y.size() != a.rows()) {
        throw PreconditionError("spmv dimension mismatch");
    }
    const auto& row_ptr = a.row_ptr();
    const auto& col_idx = a.col_idx();
    const auto& values = a.values();
    for (std::uint32_t r = 0; r < a.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) {
            acc += values[i] * x[col_idx[i]];
        }
        y[r] = acc;
    }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows());
    spmv(a, x, y);
    return y;
}

} // namespace respars
