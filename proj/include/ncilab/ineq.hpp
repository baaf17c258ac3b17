#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncilab/blockmat.hpp"
#include "ncilab/schatten.hpp"

namespace ncilab {

enum class Direction { LhsLeRhs, LhsGeRhs, Equality };

std::string to_string(Direction d);

/// Outcome of one inequality evaluation.
///
/// `margin` is oriented so that a satisfied inequality has margin >= 0:
/// rhs - lhs for LHS <= RHS, lhs - rhs for LHS >= RHS, -|lhs - rhs| for
/// equality. `satisfied` iff margin >= -tol * max(1, |lhs|, |rhs|).
struct IneqReport {
    std::string name;
    std::string norm;                      // e.g. "schatten(1.5)", "kyfan(1)"
    std::optional<SchattenOrder> exponent; // empty for Ky Fan norms
    double lhs = 0.0;
    double rhs = 0.0;
    Direction direction = Direction::LhsLeRhs;
    double margin = 0.0;
    bool satisfied = true;
    double tol = kDefaultTol;
    std::string scope;
};

IneqReport make_report(std::string name, const UnitarilyInvariantNorm& norm, double lhs, double rhs,
                       Direction direction, double tol, std::string scope);

/// For quantities that are not norms (entries, powers, ...).
IneqReport make_report(std::string name, std::string label, double lhs, double rhs, Direction direction,
                       double tol, std::string scope);

double oriented_margin(double lhs, double rhs, Direction direction);

/// LHS >= RHS for p < 2 (including the p < 1 extension), equality at p = 2,
/// LHS <= RHS for p > 2.
Direction nci_direction(SchattenOrder p);

/// ||T||_p against ||C_p(T)||_p. Any grid shape is accepted; scope is
/// "conjecture" for 2 x N grids with p >= 1, "extension" for 2 x N with
/// p < 1, and "outside-conjecture-scope" otherwise.
IneqReport check_nci(const BlockMatrix& T, SchattenOrder p, double tol = kDefaultTol);

/// ||G||_q against the 2x2 compressed Gram matrix. Requires q >= 0.5 and
/// two block rows.
IneqReport check_nci_gram(const BlockMatrix& T, SchattenOrder q, double tol = kDefaultTol);

/// ||A+B||_p^p + ||A-B||_p^p against (||A||_p + ||B||_p)^p + | ||A||_p - ||B||_p |^p.
/// Requires 1 <= p < inf.
IneqReport check_hanner(const Matrix& A, const Matrix& B, SchattenOrder p, double tol = kDefaultTol);

/// The N = 2, A_1 = B_2 = A, A_2 = B_1 = B embedding of Hanner's inequality.
struct HannerReduction {
    IneqReport nci;           // check_nci on [[A, B], [B, A]]
    IneqReport hanner;        // check_hanner on (A, B)
    double conjugated_gap;    // relative gap between ||W T W||_p^p and ||A+B||_p^p + ||A-B||_p^p
    double lhs_gap;           // relative gap between nci.lhs^p and hanner.lhs
    double rhs_gap;           // relative gap between nci.rhs^p and hanner.rhs
    bool identity_holds;      // all gaps <= 1e-10
};

HannerReduction hanner_from_nci(const Matrix& A, const Matrix& B, SchattenOrder p,
                                double tol = kDefaultTol);

/// ||sum A_k (x) B_k||_q against ||sum A_k||_q max_j ||B_j||_q (q >= 1) or
/// ... min_j ||B_j||_q reversed (q < 1). All operands PSD.
IneqReport check_king_tensor(const std::vector<Matrix>& A_list, const std::vector<Matrix>& B_list,
                             SchattenOrder q, double tol = kDefaultTol);

/// ||sum A_k (x) B_k||_q against ||sum ||B_k||_q A_k||_q, flipping at q = 1.
IneqReport check_scaled_tensor(const std::vector<Matrix>& A_list, const std::vector<Matrix>& B_list,
                               SchattenOrder q, double tol = kDefaultTol);

/// ||[z_ij X_i X_j*]||_q against ||Z||_q for ||X_k X_k*||_q = 1.
IneqReport check_rank1_psd_bound(const std::vector<Matrix>& X_list, const Matrix& Z, SchattenOrder q,
                                 double tol = kDefaultTol);

/// Monotonicity of UI norms on entrywise-ordered 2x2 PSD matrices with
/// non-negative entries.
IneqReport check_mono_2x2(const Matrix& A1, const Matrix& A2, const UnitarilyInvariantNorm& norm,
                          double tol = kDefaultTol);

/// |||Q+R||| against |||[[Tr Q, y], [y, Tr R]] (+) 0|||, y = sum_k sqrt(q_k r_k),
/// where q_k, r_k are the traces of the diagonal blocks given by `partition`.
IneqReport check_kyfan_compression(const Matrix& Q, const Matrix& R,
                                   const std::vector<Eigen::Index>& partition,
                                   const UnitarilyInvariantNorm& norm, double tol = kDefaultTol);

/// max ||Q + R + ...||_inf over PSD matrices with the given diagonals,
/// attained by the rank-one completions [sqrt(v_i v_j)].
double max_opnorm_prescribed_diag(const std::vector<RealVector>& diags);

/// ||sum A_k B_k*||_q against sum ||A_k A_k*||_q^(1/2) ||B_k B_k*||_q^(1/2).
IneqReport check_cauchy_schwarz_chain(const BlockMatrix& T, SchattenOrder q, double tol = kDefaultTol);

/// The attempted converse duality construction for 1 < p < 2.
struct DualityRoundtrip {
    RealMatrix X_hat;             // dual witness of C_p(T), in the p'-ball
    std::vector<Matrix> G_hat;    // witnesses of ||A_k||_p (zero for zero blocks)
    std::vector<Matrix> H_hat;    // witnesses of ||B_k||_p
    BlockMatrix Y;                // [s_k G_k; t_k H_k]
    double y_norm;                // ||Y||_p'
    double x_norm;                // ||X_hat||_p'
    double rhs_value;             // ||C_p(T)||_p
    double lhs_value;             // ||T||_p
    double trace_TY;              // Re Tr[T Y*]
    std::optional<double> trace_TX;  // Re Tr[T X_hat*], scalar blocks only
};

DualityRoundtrip duality_roundtrip(const BlockMatrix& T, SchattenOrder p);

}  // namespace ncilab
