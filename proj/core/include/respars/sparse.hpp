#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace respars {

// Compressed sparse row matrix. Within each row the column indices are
// sorted and unique, and every stored value is finite.
class SparseMatrix {
public:
    struct Triplet {
        std::uint32_t row;
        std::uint32_t col;
        double value;
    };

    SparseMatrix() = default;
    SparseMatrix(std::uint32_t rows, std::uint32_t cols,
                 std::vector<std::size_t> row_ptr,
                 std::vector<std::uint32_t> col_idx,
                 std::vector<double> values);

    // Duplicate (row, col) entries are summed. Entries that cancel to zero
    // are kept explicitly.
    static SparseMatrix from_triplets(std::uint32_t rows, std::uint32_t cols,
                                      std::vector<Triplet> triplets);

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::uint32_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    // Stored value at (r, c), or 0 when the entry is absent. Binary search
    // within the row.
    double at(std::uint32_t r, std::uint32_t c) const;

    // First min(rows, cols) diagonal entries.
    std::vector<double> diagonal() const;

private:
    std::uint32_t rows_ = 0;
    std::uint32_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> values_;
};

// y = A x.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

} // namespace respars
