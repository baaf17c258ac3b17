#include "ncilab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ncilab/errors.hpp"

namespace ncilab {

namespace {

bool is_nonneg_integer(double r) {
    return r >= 0.0 && std::floor(r) == r && r <= 64.0;
}

Complex integer_power(Complex z, int n) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < n; ++i) out *= z;
    return out;
}

double real_power(double x, double r) {
    if (x == 0.0) {
        if (r > 0.0) return 0.0;
        if (r == 0.0) return 1.0;
        throw DomainError("hadamard_power: zero entry raised to a negative power");
    }
    return std::pow(x, r);
}

double singular_cutoff(const RealVector& sigma, Eigen::Index rows, Eigen::Index cols) {
    if (sigma.size() == 0) return 0.0;
    return sigma(0) * static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon();
}

}  // namespace

SchattenOrder::SchattenOrder(double p) : p_(p) {
    if (std::isnan(p) || p < kMinExponent) {
        std::ostringstream msg;
        msg << "Schatten exponent must be >= " << kMinExponent << " (got " << p << ")";
        throw InvalidArgument(msg.str());
    }
}

SchattenOrder SchattenOrder::infinity() {
    return SchattenOrder(std::numeric_limits<double>::infinity());
}

bool SchattenOrder::is_infinite() const { return std::isinf(p_); }

SchattenOrder SchattenOrder::conjugate() const {
    if (is_infinite()) return SchattenOrder(1.0);
    if (p_ <= 1.0) throw UnsupportedExponent("conjugate exponent requires p > 1");
    return SchattenOrder(p_ / (p_ - 1.0));
}

std::string SchattenOrder::label() const {
    if (is_infinite()) return "inf";
    std::ostringstream out;
    out << p_;
    return out.str();
}

std::string norm_label(const UnitarilyInvariantNorm& norm) {
    if (const auto* kf = std::get_if<KyFan>(&norm)) {
        return "kyfan(" + std::to_string(kf->k) + ")";
    }
    return "schatten(" + std::get<SchattenOrder>(norm).label() + ")";
}

void require_finite(const Matrix& A, const char* what) {
    if (A.rows() < 1 || A.cols() < 1) {
        throw InvalidArgument(std::string(what) + ": empty matrix");
    }
    if (!A.allFinite()) {
        throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
    }
}

SvdFactors svd(const Matrix& A) {
    require_finite(A, "svd");
    Eigen::JacobiSVD<Matrix> solver(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("svd: Jacobi iteration did not converge");
    }
    SvdFactors f{solver.matrixU(), solver.singularValues(), solver.matrixV()};

    const double scale = std::max(1.0, f.sigma.size() ? f.sigma(0) : 0.0);
    const double residual =
        (f.U * f.sigma.asDiagonal() * f.V.adjoint() - A).norm();
    if (!(residual <= 1e-10 * scale)) {
        throw NumericalFailure("svd: reconstruction residual too large");
    }
    return f;
}

RealVector singular_values(const Matrix& A) {
    require_finite(A, "singular_values");
    Eigen::JacobiSVD<Matrix> solver(A);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("singular_values: Jacobi iteration did not converge");
    }
    return solver.singularValues();
}

Eigen::Matrix<long double, Eigen::Dynamic, 1> singular_values_extended(const Matrix& A) {
    require_finite(A, "singular_values_extended");
    using ExtMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const ExtMatrix ext = A.cast<std::complex<long double>>();
    Eigen::JacobiSVD<ExtMatrix> solver(ext);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("singular_values_extended: Jacobi iteration did not converge");
    }
    return solver.singularValues();
}

double schatten_from_singular_values(const RealVector& sigma, SchattenOrder p) {
    if (sigma.size() == 0) return 0.0;
    const double top = sigma.maxCoeff();
    if (top == 0.0) return 0.0;
    if (p.is_infinite()) return top;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        sum += std::pow(sigma(i) / top, p.value());
    }
    return top * std::pow(sum, 1.0 / p.value());
}

double schatten_norm(const Matrix& A, SchattenOrder p) {
    return schatten_from_singular_values(singular_values(A), p);
}

long double schatten_norm_extended(const Matrix& A, SchattenOrder p) {
    const auto sigma = singular_values_extended(A);
    const long double top = sigma.size() ? sigma.maxCoeff() : 0.0L;
    if (top == 0.0L) return 0.0L;
    if (p.is_infinite()) return top;
    const long double pv = p.value();
    long double sum = 0.0L;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        sum += std::pow(sigma(i) / top, pv);
    }
    return top * std::pow(sum, 1.0L / pv);
}

double ky_fan_norm(const Matrix& A, int k) {
    const Eigen::Index rank_bound = std::min(A.rows(), A.cols());
    if (k < 1 || k > rank_bound) {
        throw InvalidArgument("ky_fan_norm: k must lie in [1, min(rows, cols)]");
    }
    const RealVector sigma = singular_values(A);
    return sigma.head(k).sum();
}

double ui_norm(const Matrix& A, const UnitarilyInvariantNorm& norm) {
    if (const auto* kf = std::get_if<KyFan>(&norm)) return ky_fan_norm(A, kf->k);
    return schatten_norm(A, std::get<SchattenOrder>(norm));
}

Matrix hadamard_power(const Matrix& B, double r) {
    require_finite(B, "hadamard_power");
    Matrix out(B.rows(), B.cols());
    if (is_nonneg_integer(r)) {
        const int n = static_cast<int>(r);
        for (Eigen::Index j = 0; j < B.cols(); ++j)
            for (Eigen::Index i = 0; i < B.rows(); ++i)
                out(i, j) = integer_power(B(i, j), n);
        return out;
    }
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
        for (Eigen::Index i = 0; i < B.rows(); ++i) {
            const Complex z = B(i, j);
            if (z.imag() != 0.0 || z.real() < 0.0) {
                throw DomainError("hadamard_power: fractional power of a negative or complex entry");
            }
            out(i, j) = real_power(z.real(), r);
        }
    }
    return out;
}

RealMatrix hadamard_power(const RealMatrix& B, double r) {
    if (B.rows() < 1 || B.cols() < 1 || !B.allFinite()) {
        throw InvalidArgument("hadamard_power: empty or non-finite matrix");
    }
    RealMatrix out(B.rows(), B.cols());
    const bool integral = is_nonneg_integer(r);
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
        for (Eigen::Index i = 0; i < B.rows(); ++i) {
            const double x = B(i, j);
            if (integral) {
                out(i, j) = integer_power(Complex{x, 0.0}, static_cast<int>(r)).real();
            } else if (x < 0.0) {
                throw DomainError("hadamard_power: fractional power of a negative entry");
            } else {
                out(i, j) = real_power(x, r);
            }
        }
    }
    return out;
}

Matrix polar_power(const Matrix& B, double r) {
    if (!(r >= 0.0)) throw InvalidArgument("polar_power: exponent must be >= 0");
    const SvdFactors f = svd(B);
    const double cutoff = singular_cutoff(f.sigma, B.rows(), B.cols());
    RealVector powered(f.sigma.size());
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
        powered(i) = f.sigma(i) > cutoff ? std::pow(f.sigma(i), r) : 0.0;
    }
    return f.U * powered.asDiagonal() * f.V.adjoint();
}

RealMatrix polar_power(const RealMatrix& B, double r) {
    return polar_power(to_complex(B), r).real();
}

Matrix hermitian_power(const Matrix& H, double r) {
    require_finite(H, "hermitian_power");
    if (H.rows() != H.cols()) throw InvalidArgument("hermitian_power: matrix must be square");
    const Matrix sym = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) {
        throw NumericalFailure("hermitian_power: eigensolver did not converge");
    }
    const RealVector& lambda = eig.eigenvalues();
    const double top = std::max(std::abs(lambda.minCoeff()), std::abs(lambda.maxCoeff()));
    const double cutoff = top * static_cast<double>(H.rows()) * std::numeric_limits<double>::epsilon();
    RealVector powered(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double l = lambda(i) > cutoff ? lambda(i) : 0.0;
        if (l == 0.0) {
            if (r < 0.0) throw DomainError("hermitian_power: singular matrix raised to a negative power");
            powered(i) = r == 0.0 ? 1.0 : 0.0;
        } else {
            powered(i) = std::pow(l, r);
        }
    }
    return eig.eigenvectors() * powered.asDiagonal() * eig.eigenvectors().adjoint();
}

DualWitness dual_witness(const Matrix& T, SchattenOrder p) {
    if (p.is_infinite() || p.value() <= 1.0) {
        throw UnsupportedExponent("dual_witness: requires 1 < p < inf (witness not unique otherwise)");
    }
    const SvdFactors f = svd(T);
    if (f.sigma(0) == 0.0) throw InvalidArgument("dual_witness: T is zero");

    const SchattenOrder dual = p.conjugate();
    RealVector w(f.sigma.size());
    const double top = f.sigma(0);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w(i) = std::pow(f.sigma(i) / top, p.value() - 1.0);
    }
    w /= schatten_from_singular_values(w, dual);

    DualWitness out{f.U * w.asDiagonal() * f.V.adjoint(), 0.0, dual};
    out.attained = (T.array() * out.Y.array().conjugate()).sum().real();
    return out;
}

bool is_psd(const Matrix& A, double tol) {
    require_finite(A, "is_psd");
    if (A.rows() != A.cols()) throw InvalidArgument("is_psd: matrix must be square");
    const Matrix sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const RealVector& lambda = eig.eigenvalues();
    const double scale =
        std::max({1.0, std::abs(lambda.minCoeff()), std::abs(lambda.maxCoeff())});
    if ((A - A.adjoint()).norm() > tol * scale) return false;
    return lambda.minCoeff() >= -tol * scale;
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Matrix to_complex(const RealMatrix& A) { return A.cast<Complex>(); }

RealMatrix to_real(const Matrix& A, double tol) {
    if (A.imag().cwiseAbs().maxCoeff() > tol) {
        throw DomainError("expected a real matrix");
    }
    return A.real();
}

}  // namespace ncilab
