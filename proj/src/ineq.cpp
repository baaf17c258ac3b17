#include "ncilab/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "ncilab/errors.hpp"

namespace ncilab {

namespace {

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Flip at q = 1: LHS <= RHS for norms, reversed for quasi-norms.
Direction convexity_direction(SchattenOrder q) {
    return q.value() >= 1.0 ? Direction::LhsLeRhs : Direction::LhsGeRhs;
}

void require_psd_list(const std::vector<Matrix>& list, const char* what) {
    if (list.empty()) throw InvalidArgument(std::string(what) + ": empty list");
    const Eigen::Index n = list.front().rows();
    for (const Matrix& M : list) {
        if (M.rows() != n || M.cols() != n) {
            throw ShapeError(std::string(what) + ": operands must be square of common size");
        }
        if (!is_psd(M, 1e-8)) throw DomainError(std::string(what) + ": operand is not PSD");
    }
}

Matrix sum_of(const std::vector<Matrix>& list) {
    Matrix out = Matrix::Zero(list.front().rows(), list.front().cols());
    for (const Matrix& M : list) out += M;
    return out;
}

Matrix tensor_sum(const std::vector<Matrix>& A_list, const std::vector<Matrix>& B_list) {
    Matrix out = kron(A_list[0], B_list[0]);
    for (std::size_t k = 1; k < A_list.size(); ++k) out += kron(A_list[k], B_list[k]);
    return out;
}

bool real_nonneg(const Matrix& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (A(i, j).imag() != 0.0 || A(i, j).real() < 0.0) return false;
    return true;
}

}  // namespace

std::string to_string(Direction d) {
    switch (d) {
        case Direction::LhsLeRhs: return "LHS<=RHS";
        case Direction::LhsGeRhs: return "LHS>=RHS";
        case Direction::Equality: return "equality";
    }
    return "?";
}

double oriented_margin(double lhs, double rhs, Direction direction) {
    switch (direction) {
        case Direction::LhsLeRhs: return rhs - lhs;
        case Direction::LhsGeRhs: return lhs - rhs;
        case Direction::Equality: return -std::abs(lhs - rhs);
    }
    return 0.0;
}

IneqReport make_report(std::string name, const UnitarilyInvariantNorm& norm, double lhs, double rhs,
                       Direction direction, double tol, std::string scope) {
    IneqReport r = make_report(std::move(name), norm_label(norm), lhs, rhs, direction, tol, std::move(scope));
    if (const auto* p = std::get_if<SchattenOrder>(&norm)) r.exponent = *p;
    return r;
}

IneqReport make_report(std::string name, std::string label, double lhs, double rhs, Direction direction,
                       double tol, std::string scope) {
    IneqReport r;
    r.name = std::move(name);
    r.norm = std::move(label);
    r.lhs = lhs;
    r.rhs = rhs;
    r.direction = direction;
    r.margin = oriented_margin(lhs, rhs, direction);
    r.tol = tol;
    r.satisfied = r.margin >= -tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    r.scope = std::move(scope);
    return r;
}

Direction nci_direction(SchattenOrder p) {
    if (p.value() == 2.0) return Direction::Equality;
    return p.value() < 2.0 ? Direction::LhsGeRhs : Direction::LhsLeRhs;
}

IneqReport check_nci(const BlockMatrix& T, SchattenOrder p, double tol) {
    const double lhs = schatten_norm(assemble(T), p);
    const double rhs = schatten_norm(to_complex(compress(T, p).values), p);
    std::string scope = "conjecture";
    if (T.block_rows() != 2) {
        scope = "outside-conjecture-scope";
    } else if (p.is_quasi_norm()) {
        scope = "extension";
    }
    return make_report("nci", p, lhs, rhs, nci_direction(p), tol, std::move(scope));
}

IneqReport check_nci_gram(const BlockMatrix& T, SchattenOrder q, double tol) {
    if (q.value() < 0.5) throw InvalidArgument("check_nci_gram: requires q >= 0.5");
    const GramForm g = gram_form(T, q);
    const double lhs = schatten_norm(g.G, q);
    const double rhs = schatten_norm(to_complex(g.compressed), q);
    Direction dir = Direction::Equality;
    if (q.value() > 1.0) dir = Direction::LhsLeRhs;
    if (q.value() < 1.0) dir = Direction::LhsGeRhs;
    return make_report("nci-gram", q, lhs, rhs, dir, tol, "conjecture");
}

IneqReport check_hanner(const Matrix& A, const Matrix& B, SchattenOrder p, double tol) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw ShapeError("check_hanner: shape mismatch");
    if (p.value() < 1.0) throw InvalidArgument("check_hanner: requires p >= 1");
    if (p.is_infinite()) throw UnsupportedExponent("check_hanner: p-th powers undefined at p = inf");
    const double pv = p.value();
    const double a = schatten_norm(A, p);
    const double b = schatten_norm(B, p);
    const double lhs = std::pow(schatten_norm(A + B, p), pv) + std::pow(schatten_norm(A - B, p), pv);
    const double rhs = std::pow(a + b, pv) + std::pow(std::abs(a - b), pv);
    const bool proven = pv <= 4.0 / 3.0 || pv == 2.0 || pv >= 4.0 ||
                        (A.rows() == A.cols() && is_psd(A + B) && is_psd(A - B));
    return make_report("hanner", p, lhs, rhs, nci_direction(p), tol, proven ? "theorem" : "conjecture");
}

HannerReduction hanner_from_nci(const Matrix& A, const Matrix& B, SchattenOrder p, double tol) {
    HannerReduction out{check_nci(BlockMatrix({{A, B}, {B, A}}), p, tol), check_hanner(A, B, p, tol),
                        0.0, 0.0, 0.0, false};

    const auto hadamard = [](Eigen::Index n) {
        const Matrix I = Matrix::Identity(n, n);
        Matrix W(2 * n, 2 * n);
        W << I, I, I, -I;
        return Matrix(W / std::sqrt(2.0));
    };
    const Matrix T = assemble(BlockMatrix({{A, B}, {B, A}}));
    const Matrix conj = hadamard(A.rows()) * T * hadamard(A.cols());

    const double pv = p.value();
    out.conjugated_gap = rel_gap(std::pow(schatten_norm(conj, p), pv), out.hanner.lhs);
    out.lhs_gap = rel_gap(std::pow(out.nci.lhs, pv), out.hanner.lhs);
    out.rhs_gap = rel_gap(std::pow(out.nci.rhs, pv), out.hanner.rhs);
    out.identity_holds = out.conjugated_gap <= 1e-10 && out.lhs_gap <= 1e-10 && out.rhs_gap <= 1e-10;
    return out;
}

IneqReport check_king_tensor(const std::vector<Matrix>& A_list, const std::vector<Matrix>& B_list,
                             SchattenOrder q, double tol) {
    if (A_list.size() != B_list.size()) throw ShapeError("check_king_tensor: list lengths differ");
    require_psd_list(A_list, "check_king_tensor");
    require_psd_list(B_list, "check_king_tensor");

    const double lhs = schatten_norm(tensor_sum(A_list, B_list), q);
    std::vector<double> b_norms;
    for (const Matrix& B : B_list) b_norms.push_back(schatten_norm(B, q));
    const Direction dir = convexity_direction(q);
    const double extreme = dir == Direction::LhsLeRhs
                               ? *std::max_element(b_norms.begin(), b_norms.end())
                               : *std::min_element(b_norms.begin(), b_norms.end());
    const double rhs = schatten_norm(sum_of(A_list), q) * extreme;
    return make_report("king-tensor", q, lhs, rhs, dir, tol, "theorem");
}

IneqReport check_scaled_tensor(const std::vector<Matrix>& A_list, const std::vector<Matrix>& B_list,
                               SchattenOrder q, double tol) {
    if (A_list.size() != B_list.size()) throw ShapeError("check_scaled_tensor: list lengths differ");
    require_psd_list(A_list, "check_scaled_tensor");
    require_psd_list(B_list, "check_scaled_tensor");

    const double lhs = schatten_norm(tensor_sum(A_list, B_list), q);
    Matrix scaled = Matrix::Zero(A_list[0].rows(), A_list[0].cols());
    for (std::size_t k = 0; k < A_list.size(); ++k) scaled += schatten_norm(B_list[k], q) * A_list[k];
    const double rhs = schatten_norm(scaled, q);
    return make_report("scaled-tensor", q, lhs, rhs, convexity_direction(q), tol, "theorem");
}

IneqReport check_rank1_psd_bound(const std::vector<Matrix>& X_list, const Matrix& Z, SchattenOrder q,
                                 double tol) {
    const auto d = static_cast<Eigen::Index>(X_list.size());
    if (d == 0) throw InvalidArgument("check_rank1_psd_bound: empty list");
    if (Z.rows() != d || Z.cols() != d) throw ShapeError("check_rank1_psd_bound: Z must be d x d");
    if (!is_psd(Z, 1e-8)) throw DomainError("check_rank1_psd_bound: Z is not PSD");
    const Eigen::Index width = X_list.front().cols();
    for (const Matrix& X : X_list) {
        if (X.cols() != width) throw ShapeError("check_rank1_psd_bound: X_k must share a column count");
        if (std::abs(schatten_norm(X * X.adjoint(), q) - 1.0) > 1e-8) {
            throw InvalidArgument("check_rank1_psd_bound: requires ||X_k X_k*||_q = 1");
        }
    }

    std::vector<std::vector<Matrix>> grid(d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            grid[i].push_back(Z(i, j) * X_list[i] * X_list[j].adjoint());
    const double lhs = schatten_norm(assemble(BlockMatrix(std::move(grid))), q);
    const double rhs = schatten_norm(Z, q);
    return make_report("rank1-psd-bound", q, lhs, rhs, convexity_direction(q), tol, "theorem");
}

IneqReport check_mono_2x2(const Matrix& A1, const Matrix& A2, const UnitarilyInvariantNorm& norm,
                          double tol) {
    for (const Matrix* A : {&A1, &A2}) {
        if (A->rows() != 2 || A->cols() != 2) throw ShapeError("check_mono_2x2: operands must be 2x2");
        if (!real_nonneg(*A)) throw DomainError("check_mono_2x2: entries must be real and non-negative");
        if (!is_psd(*A, 1e-12)) throw DomainError("check_mono_2x2: operand is not PSD");
    }
    if ((A2.real() - A1.real()).minCoeff() < 0.0) {
        throw InvalidArgument("check_mono_2x2: A1 <= A2 entrywise required");
    }
    return make_report("mono-2x2", norm, ui_norm(A1, norm), ui_norm(A2, norm), Direction::LhsLeRhs, tol,
                       "theorem");
}

IneqReport check_kyfan_compression(const Matrix& Q, const Matrix& R,
                                   const std::vector<Eigen::Index>& partition,
                                   const UnitarilyInvariantNorm& norm, double tol) {
    if (Q.rows() != R.rows() || Q.cols() != R.cols()) throw ShapeError("check_kyfan_compression: shape mismatch");
    if (!is_psd(Q, 1e-8) || !is_psd(R, 1e-8)) throw DomainError("check_kyfan_compression: operands must be PSD");
    const Eigen::Index d = Q.rows();
    if (partition.empty() || std::accumulate(partition.begin(), partition.end(), Eigen::Index{0}) != d ||
        std::any_of(partition.begin(), partition.end(), [](Eigen::Index s) { return s < 1; })) {
        throw ShapeError("check_kyfan_compression: partition must consist of positive sizes summing to dim");
    }

    double y = 0.0;
    Eigen::Index offset = 0;
    for (const Eigen::Index size : partition) {
        const double qk = std::max(0.0, Q.block(offset, offset, size, size).trace().real());
        const double rk = std::max(0.0, R.block(offset, offset, size, size).trace().real());
        y += std::sqrt(qk * rk);
        offset += size;
    }
    const Eigen::Index dim = std::max<Eigen::Index>(2, d);
    Matrix M = Matrix::Zero(dim, dim);
    M(0, 0) = Q.trace().real();
    M(1, 1) = R.trace().real();
    M(0, 1) = M(1, 0) = y;

    const double lhs = ui_norm(Q + R, norm);
    const double rhs = ui_norm(M, norm);
    Direction dir = Direction::LhsLeRhs;
    if (const auto* p = std::get_if<SchattenOrder>(&norm); p && p->is_quasi_norm()) dir = Direction::LhsGeRhs;
    return make_report("kyfan-compression", norm, lhs, rhs, dir, tol, "theorem");
}

double max_opnorm_prescribed_diag(const std::vector<RealVector>& diags) {
    if (diags.empty()) throw InvalidArgument("max_opnorm_prescribed_diag: no diagonals given");
    const Eigen::Index d = diags.front().size();
    RealMatrix sum = RealMatrix::Zero(d, d);
    for (const RealVector& v : diags) {
        if (v.size() != d) throw ShapeError("max_opnorm_prescribed_diag: diagonals differ in length");
        if (v.size() > 0 && v.minCoeff() < 0.0) throw DomainError("max_opnorm_prescribed_diag: negative entry");
        const RealVector root = v.cwiseSqrt();
        sum += root * root.transpose();
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sum, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
}

IneqReport check_cauchy_schwarz_chain(const BlockMatrix& T, SchattenOrder q, double tol) {
    if (T.block_rows() != 2) throw ShapeError("check_cauchy_schwarz_chain: exactly two block rows required");
    if (q.value() < 1.0) throw InvalidArgument("check_cauchy_schwarz_chain: requires q >= 1");
    const SchattenOrder doubled = q.is_infinite() ? q : SchattenOrder(2.0 * q.value());
    Matrix cross = Matrix::Zero(T.row_height(0), T.row_height(1));
    double rhs = 0.0;
    for (Eigen::Index k = 0; k < T.block_cols(); ++k) {
        cross += T.block(0, k) * T.block(1, k).adjoint();
        rhs += schatten_norm(T.block(0, k), doubled) * schatten_norm(T.block(1, k), doubled);
    }
    return make_report("cauchy-schwarz-chain", q, schatten_norm(cross, q), rhs, Direction::LhsLeRhs, tol,
                       "theorem");
}

DualityRoundtrip duality_roundtrip(const BlockMatrix& T, SchattenOrder p) {
    if (T.block_rows() != 2) throw ShapeError("duality_roundtrip: exactly two block rows required");
    if (!(p.value() > 1.0 && p.value() < 2.0)) throw InvalidArgument("duality_roundtrip: requires 1 < p < 2");

    const RealMatrix C = compress(T, p).values;
    if (C.maxCoeff() == 0.0) throw InvalidArgument("duality_roundtrip: T is zero");
    const DualWitness outer = dual_witness(to_complex(C), p);
    const RealMatrix X_hat = outer.Y.real();

    const auto block_witness = [&](const Matrix& block) -> Matrix {
        if (block.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(block.rows(), block.cols());
        return dual_witness(block, p).Y;
    };

    std::vector<Matrix> G_hat;
    std::vector<Matrix> H_hat;
    std::vector<std::vector<Matrix>> grid(2);
    for (Eigen::Index k = 0; k < T.block_cols(); ++k) {
        G_hat.push_back(block_witness(T.block(0, k)));
        H_hat.push_back(block_witness(T.block(1, k)));
        grid[0].push_back(X_hat(0, k) * G_hat.back());
        grid[1].push_back(X_hat(1, k) * H_hat.back());
    }
    BlockMatrix Y(std::move(grid));
    const Matrix flatT = assemble(T);
    const Matrix flatY = assemble(Y);
    const SchattenOrder dual = p.conjugate();

    std::optional<double> trace_TX;
    if (flatT.rows() == 2 && flatT.cols() == T.block_cols()) {
        trace_TX = (flatT.real().array() * X_hat.array()).sum();
    }

    return DualityRoundtrip{
        X_hat,
        std::move(G_hat),
        std::move(H_hat),
        std::move(Y),
        schatten_norm(flatY, dual),
        schatten_norm(to_complex(X_hat), dual),
        schatten_norm(to_complex(C), p),
        schatten_norm(flatT, p),
        (flatT.array() * flatY.array().conjugate()).sum().real(),
        trace_TX,
    };
}

}  // namespace ncilab
