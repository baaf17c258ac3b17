#pragma once

#include <vector>

#include "ncilab/schatten.hpp"

namespace ncilab {

/// An M x N grid of dense blocks. Blocks in a grid row share their row count
/// and blocks in a grid column share their column count; sizes may differ
/// between grid rows/columns. Immutable after construction.
class BlockMatrix {
public:
    /// Throws ShapeError if the grid is empty, ragged, or the block sizes are
    /// inconsistent.
    explicit BlockMatrix(std::vector<std::vector<Matrix>> blocks);

    /// Every entry of `scalars` becomes a 1x1 block.
    static BlockMatrix from_scalars(const Matrix& scalars);

    Eigen::Index block_rows() const { return static_cast<Eigen::Index>(blocks_.size()); }
    Eigen::Index block_cols() const { return static_cast<Eigen::Index>(blocks_.front().size()); }
    const Matrix& block(Eigen::Index i, Eigen::Index j) const { return blocks_[i][j]; }
    const std::vector<std::vector<Matrix>>& blocks() const { return blocks_; }

    Eigen::Index row_height(Eigen::Index i) const { return blocks_[i].front().rows(); }
    Eigen::Index col_width(Eigen::Index j) const { return blocks_.front()[j].cols(); }
    Eigen::Index total_rows() const;
    Eigen::Index total_cols() const;

    /// A copy with block (i, j) replaced; the replacement must keep its shape.
    BlockMatrix with_block(Eigen::Index i, Eigen::Index j, Matrix block) const;

private:
    std::vector<std::vector<Matrix>> blocks_;
};

Matrix assemble(const BlockMatrix& T);

/// [||T_(ij)||_p]_{ij}.
struct CompressionResult {
    RealMatrix values;
    SchattenOrder exponent;
};

CompressionResult compress(const BlockMatrix& T, SchattenOrder p);

/// Squared form of the 2 x N compression inequality:
/// G = T T* = [[sum A_k A_k*, sum A_k B_k*], [sum B_k A_k*, sum B_k B_k*]]
/// against [[sum a_k^2, sum a_k b_k], [sum a_k b_k, sum b_k^2]] with
/// a_k = ||A_k A_k*||_q^(1/2) = ||A_k||_2q.
struct GramForm {
    Matrix G;
    Eigen::Matrix2d compressed;
    SchattenOrder q;
};

/// Requires exactly two block rows (ShapeError otherwise).
GramForm gram_form(const BlockMatrix& T, SchattenOrder q);

/// For a grid of square diagonal blocks of common size d, returns the d
/// matrices [a_ij^k]_{ij} of k-th diagonal entries; T is permutation-similar
/// to their direct sum. Off-diagonal block entries must be exactly zero
/// (DomainError otherwise).
std::vector<Matrix> diagonal_block_reduction(const BlockMatrix& T);

/// Appends zero rows and columns to every block.
BlockMatrix pad_blocks(const BlockMatrix& T, Eigen::Index extra_rows, Eigen::Index extra_cols);

}  // namespace ncilab
