#include "ncilab/blockmat.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ncilab/errors.hpp"

namespace ncilab {

BlockMatrix::BlockMatrix(std::vector<std::vector<Matrix>> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty() || blocks_.front().empty()) {
        throw ShapeError("block matrix needs at least one block row and column");
    }
    const std::size_t n = blocks_.front().size();
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].size() != n) throw ShapeError("ragged block grid");
        for (std::size_t j = 0; j < n; ++j) {
            const Matrix& b = blocks_[i][j];
            if (b.rows() < 1 || b.cols() < 1) throw ShapeError("empty block");
            if (b.rows() != blocks_[i][0].rows()) {
                throw ShapeError("blocks in grid row " + std::to_string(i) + " differ in height");
            }
            if (b.cols() != blocks_[0][j].cols()) {
                throw ShapeError("blocks in grid column " + std::to_string(j) + " differ in width");
            }
        }
    }
}

BlockMatrix BlockMatrix::from_scalars(const Matrix& scalars) {
    std::vector<std::vector<Matrix>> grid(scalars.rows());
    for (Eigen::Index i = 0; i < scalars.rows(); ++i) {
        grid[i].reserve(scalars.cols());
        for (Eigen::Index j = 0; j < scalars.cols(); ++j) {
            grid[i].push_back(Matrix::Constant(1, 1, scalars(i, j)));
        }
    }
    return BlockMatrix(std::move(grid));
}

Eigen::Index BlockMatrix::total_rows() const {
    Eigen::Index total = 0;
    for (Eigen::Index i = 0; i < block_rows(); ++i) total += row_height(i);
    return total;
}

Eigen::Index BlockMatrix::total_cols() const {
    Eigen::Index total = 0;
    for (Eigen::Index j = 0; j < block_cols(); ++j) total += col_width(j);
    return total;
}

BlockMatrix BlockMatrix::with_block(Eigen::Index i, Eigen::Index j, Matrix block) const {
    auto grid = blocks_;
    grid[i][j] = std::move(block);
    return BlockMatrix(std::move(grid));
}

Matrix assemble(const BlockMatrix& T) {
    Matrix out(T.total_rows(), T.total_cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < T.block_rows(); ++i) {
        Eigen::Index c = 0;
        for (Eigen::Index j = 0; j < T.block_cols(); ++j) {
            const Matrix& b = T.block(i, j);
            out.block(r, c, b.rows(), b.cols()) = b;
            c += b.cols();
        }
        r += T.row_height(i);
    }
    return out;
}

CompressionResult compress(const BlockMatrix& T, SchattenOrder p) {
    RealMatrix values(T.block_rows(), T.block_cols());
    for (Eigen::Index i = 0; i < T.block_rows(); ++i)
        for (Eigen::Index j = 0; j < T.block_cols(); ++j)
            values(i, j) = schatten_norm(T.block(i, j), p);
    return {std::move(values), p};
}

GramForm gram_form(const BlockMatrix& T, SchattenOrder q) {
    if (T.block_rows() != 2) throw ShapeError("gram_form: exactly two block rows required");

    const Eigen::Index h1 = T.row_height(0);
    const Eigen::Index h2 = T.row_height(1);
    Matrix G = Matrix::Zero(h1 + h2, h1 + h2);
    Eigen::Matrix2d compressed = Eigen::Matrix2d::Zero();

    const SchattenOrder doubled = q.is_infinite() ? q : SchattenOrder(2.0 * q.value());
    for (Eigen::Index k = 0; k < T.block_cols(); ++k) {
        const Matrix& A = T.block(0, k);
        const Matrix& B = T.block(1, k);
        G.topLeftCorner(h1, h1) += A * A.adjoint();
        G.topRightCorner(h1, h2) += A * B.adjoint();
        G.bottomLeftCorner(h2, h1) += B * A.adjoint();
        G.bottomRightCorner(h2, h2) += B * B.adjoint();

        // ||A_k A_k*||_q^(1/2) == ||A_k||_2q
        const double a = schatten_norm(A, doubled);
        const double b = schatten_norm(B, doubled);
        compressed(0, 0) += a * a;
        compressed(0, 1) += a * b;
        compressed(1, 1) += b * b;
    }
    compressed(1, 0) = compressed(0, 1);
    return {std::move(G), compressed, q};
}

std::vector<Matrix> diagonal_block_reduction(const BlockMatrix& T) {
    const Eigen::Index d = T.block(0, 0).rows();
    for (Eigen::Index i = 0; i < T.block_rows(); ++i) {
        for (Eigen::Index j = 0; j < T.block_cols(); ++j) {
            const Matrix& b = T.block(i, j);
            if (b.rows() != d || b.cols() != d) {
                throw DomainError("diagonal_block_reduction: blocks must be square of common size");
            }
            for (Eigen::Index c = 0; c < d; ++c)
                for (Eigen::Index r = 0; r < d; ++r)
                    if (r != c && b(r, c) != Complex{0.0, 0.0}) {
                        throw DomainError("diagonal_block_reduction: block (" + std::to_string(i) +
                                          "," + std::to_string(j) + ") is not diagonal");
                    }
        }
    }
    std::vector<Matrix> out(d, Matrix(T.block_rows(), T.block_cols()));
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index i = 0; i < T.block_rows(); ++i)
            for (Eigen::Index j = 0; j < T.block_cols(); ++j)
                out[k](i, j) = T.block(i, j)(k, k);
    return out;
}

BlockMatrix pad_blocks(const BlockMatrix& T, Eigen::Index extra_rows, Eigen::Index extra_cols) {
    auto grid = T.blocks();
    for (auto& row : grid) {
        for (auto& b : row) {
            Matrix padded = Matrix::Zero(b.rows() + extra_rows, b.cols() + extra_cols);
            padded.topLeftCorner(b.rows(), b.cols()) = b;
            b = std::move(padded);
        }
    }
    return BlockMatrix(std::move(grid));
}

}  // namespace ncilab
