#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ticketclass {

// Row-major sparse matrix in CSR form.
//
// Invariants: column indices are strictly increasing within each row, every
// stored value is finite, zeros are never stored explicitly.
class SparseMatrix {
public:
    struct Entry {
        std::uint32_t col = 0;
        double value = 0.0;
        bool operator==(const Entry&) const = default;
    };

    struct Triplet {
        std::size_t row = 0;
        std::uint32_t col = 0;
        double value = 0.0;
    };

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    // Triplets may arrive in any order; duplicates are rejected.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> triplets);
    static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);

    // Entries must be sorted by column; zero values are dropped.
    void append_row(std::span<const Entry> entries);

    std::size_t rows() const { return row_offsets_.size() - 1; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::uint32_t> row_cols(std::size_t row) const;
    std::span<const double> row_values(std::size_t row) const;
    std::size_t row_nnz(std::size_t row) const;

    SparseMatrix select_rows(std::span<const std::size_t> indices) const;
    std::vector<std::vector<double>> to_dense() const;
    std::vector<Triplet> to_triplets() const;

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::uint32_t> col_indices_;
    std::vector<double> values_;
};

}  // namespace ticketclass
