#include "ncilab/rng.hpp"

#include <cmath>
#include <numbers>

#include "ncilab/errors.hpp"

namespace ncilab {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
    : key_(splitmix64(splitmix64(splitmix64(seed + kGamma) ^ stream) + substream * kGamma)) {}

CounterRng::result_type CounterRng::operator()() {
    ++counter_;
    return splitmix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::size_t CounterRng::index(std::size_t n) {
    if (n == 0) throw InvalidArgument("CounterRng::index: empty range");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Complex CounterRng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex{re, im} * std::sqrt(0.5);
}

Matrix random_ginibre(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.complex_normal();
    return out;
}

RealMatrix random_gaussian(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.normal();
    return out;
}

RealMatrix random_uniform(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.uniform();
    return out;
}

Matrix random_psd(CounterRng& rng, Eigen::Index n, Eigen::Index rank) {
    const Matrix G = random_ginibre(rng, n, rank);
    return G * G.adjoint();
}

Matrix random_isometry(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
    if (rows < cols) throw InvalidArgument("random_isometry: rows must be >= cols");
    const Matrix G = random_ginibre(rng, rows, cols);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < cols; ++k) {
        const double mag = std::abs(R(k, k));
        if (mag > 0.0) Q.col(k) *= R(k, k) / mag;
    }
    return Q;
}

Matrix random_unitary(CounterRng& rng, Eigen::Index n) { return random_isometry(rng, n, n); }

}  // namespace ncilab
