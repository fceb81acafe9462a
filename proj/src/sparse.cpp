#include "ticketclass/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ticketclass/errors.hpp"

namespace ticketclass {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols) {
    row_offsets_.assign(rows + 1, 0);
}

void SparseMatrix::append_row(std::span<const Entry> entries) {
    std::uint32_t last_col = 0;
    bool first = true;
    for (const auto& entry : entries) {
        if (entry.col >= cols_) {
            throw DimensionError("sparse row entry column " + std::to_string(entry.col) +
                                 " out of range for " + std::to_string(cols_) + " columns");
        }
        if (!first && entry.col <= last_col) {
            throw ValidationError("sparse row entries must have strictly increasing columns");
        }
        if (!std::isfinite(entry.value)) {
            throw ValidationError("sparse matrix values must be finite");
        }
        if (entry.value != 0.0) {
            col_indices_.push_back(entry.col);
            values_.push_back(entry.value);
        }
        last_col = entry.col;
        first = false;
    }
    row_offsets_.push_back(values_.size());
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix out(0, cols);
    std::vector<Entry> row;
    std::size_t next = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        row.clear();
        while (next < triplets.size() && triplets[next].row == r) {
            if (!row.empty() && row.back().col == triplets[next].col) {
                throw ValidationError("duplicate triplet at row " + std::to_string(r) +
                                      ", col " + std::to_string(triplets[next].col));
            }
            row.push_back({triplets[next].col, triplets[next].value});
            ++next;
        }
        out.append_row(row);
    }
    if (next != triplets.size()) {
        throw DimensionError("triplet row index exceeds declared row count");
    }
    return out;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
    const std::size_t cols = dense.empty() ? 0 : dense.front().size();
    SparseMatrix out(0, cols);
    std::vector<Entry> row;
    for (const auto& dense_row : dense) {
        if (dense_row.size() != cols) {
            throw DimensionError("ragged dense matrix");
        }
        row.clear();
        for (std::size_t j = 0; j < cols; ++j) {
            if (dense_row[j] != 0.0) {
                row.push_back({static_cast<std::uint32_t>(j), dense_row[j]});
            }
        }
        out.append_row(row);
    }
    return out;
}

std::span<const std::uint32_t> SparseMatrix::row_cols(std::size_t row) const {
    return {col_indices_.data() + row_offsets_[row], row_offsets_[row + 1] - row_offsets_[row]};
}

std::span<const double> SparseMatrix::row_values(std::size_t row) const {
    return {values_.data() + row_offsets_[row], row_offsets_[row + 1] - row_offsets_[row]};
}

std::size_t SparseMatrix::row_nnz(std::size_t row) const {
    return row_offsets_[row + 1] - row_offsets_[row];
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> indices) const {
    SparseMatrix out(0, cols_);
    std::vector<Entry> row;
    for (const std::size_t i : indices) {
        if (i >= rows()) {
            throw DimensionError("row index out of range in select_rows");
        }
        row.clear();
        const auto cols = row_cols(i);
        const auto vals = row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row.push_back({cols[k], vals[k]});
        }
        out.append_row(row);
    }
    return out;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
    std::vector<std::vector<double>> dense(rows(), std::vector<double>(cols_, 0.0));
    for (std::size_t i = 0; i < rows(); ++i) {
        const auto cols = row_cols(i);
        const auto vals = row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            dense[i][cols[k]] = vals[k];
        }
    }
    return dense;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::to_triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < rows(); ++i) {
        const auto cols = row_cols(i);
        const auto vals = row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out.push_back({i, cols[k], vals[k]});
        }
    }
    return out;
}

}  // namespace ticketclass
