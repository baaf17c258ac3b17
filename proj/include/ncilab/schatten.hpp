#pragma once

#include <complex>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace ncilab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Smallest accepted quasi-norm exponent; below this sigma^p overflows long
/// before it says anything useful.
inline constexpr double kMinExponent = 0.05;

/// Relative tolerance for equality claims.
inline constexpr double kDefaultTol = 1e-9;

/// Schatten exponent p in [0.05, inf].
class SchattenOrder {
public:
    explicit SchattenOrder(double p);

    static SchattenOrder infinity();

    double value() const { return p_; }
    bool is_infinite() const;
    bool is_quasi_norm() const { return p_ < 1.0; }
    bool is_norm() const { return p_ >= 1.0; }

    /// p' with 1/p + 1/p' = 1. Requires p > 1; the conjugate of inf is 1.
    SchattenOrder conjugate() const;

    /// "1.5", "inf", ...
    std::string label() const;

    friend bool operator==(const SchattenOrder&, const SchattenOrder&) = default;

private:
    double p_;
};

/// Sum of the k largest singular values.
struct KyFan {
    int k;
};

using UnitarilyInvariantNorm = std::variant<SchattenOrder, KyFan>;

std::string norm_label(const UnitarilyInvariantNorm& norm);

struct SvdFactors {
    Matrix U;            // m x r, orthonormal columns
    RealVector sigma;    // r = min(m, n), non-increasing
    Matrix V;            // n x r, orthonormal columns
};

/// Throws InvalidArgument on empty or non-finite input.
void require_finite(const Matrix& A, const char* what);

/// Thin SVD. Throws NumericalFailure when the factorization does not
/// reproduce A to 1e-10 relative accuracy.
SvdFactors svd(const Matrix& A);

/// Singular values only, non-increasing.
RealVector singular_values(const Matrix& A);

/// Singular values computed in long double arithmetic. Used to re-verify
/// violation certificates away from double-precision SVD noise.
Eigen::Matrix<long double, Eigen::Dynamic, 1> singular_values_extended(const Matrix& A);

double schatten_norm(const Matrix& A, SchattenOrder p);

/// (sum sigma_i^p)^(1/p) from given singular values, scaled by the largest
/// one so that small quasi-norm exponents do not underflow.
double schatten_from_singular_values(const RealVector& sigma, SchattenOrder p);

/// Extended-precision Schatten norm (long double SVD and summation).
long double schatten_norm_extended(const Matrix& A, SchattenOrder p);

double ky_fan_norm(const Matrix& A, int k);

double ui_norm(const Matrix& A, const UnitarilyInvariantNorm& norm);

/// Entrywise power. Fractional r requires real non-negative entries;
/// 0^r = 0 for r > 0 and 0^0 = 1. Zero entries with r < 0 are a DomainError.
Matrix hadamard_power(const Matrix& B, double r);
RealMatrix hadamard_power(const RealMatrix& B, double r);

/// B^[r] = (BB*)^((r-1)/2) B, evaluated as U diag(sigma^r) V*.
///
/// Singular values below max(m,n) * eps * sigma_max count as zero, so the
/// result is continuous in B for r > 0 and needs no pseudo-inverse.
Matrix polar_power(const Matrix& B, double r);
RealMatrix polar_power(const RealMatrix& B, double r);

/// H^r for Hermitian PSD H via its eigendecomposition. Eigenvalues are
/// clamped at zero; for r < 0 a zero eigenvalue is a DomainError.
Matrix hermitian_power(const Matrix& H, double r);

/// Dual element of the Schatten unit ball attaining the norm:
/// Re Tr[T Y*] = ||T||_p with ||Y||_p' = 1.
struct DualWitness {
    Matrix Y;
    double attained;
    SchattenOrder exponent_of_Y;
};

/// Requires 1 < p < inf and T != 0.
DualWitness dual_witness(const Matrix& T, SchattenOrder p);

/// Hermitian within tol and smallest eigenvalue >= -tol * max(1, ||A||_inf).
bool is_psd(const Matrix& A, double tol = 1e-10);

Matrix kron(const Matrix& A, const Matrix& B);

/// Embeds a real matrix as a complex one.
Matrix to_complex(const RealMatrix& A);

/// Real part, throwing DomainError if any |imag| exceeds tol.
RealMatrix to_real(const Matrix& A, double tol = 0.0);

}  // namespace ncilab
