#pragma once

#include <cstdint>
#include <limits>

#include "ncilab/schatten.hpp"

namespace ncilab {

/// Counter-based generator: output n is a SplitMix64 finalizer applied to
/// key + n * golden-gamma, with the key derived from (seed, stream,
/// substream). Streams for different trial indices are independent of the
/// order in which they are consumed.
///
/// Satisfies UniformRandomBitGenerator. Gaussian draws use Box-Muller on
/// top of uniform(), so sequences are identical across standard libraries.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform index in [0, n).
    std::size_t index(std::size_t n);
    double normal();
    /// Standard complex Gaussian, E|z|^2 = 1.
    Complex complex_normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

Matrix random_ginibre(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);
RealMatrix random_gaussian(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);
RealMatrix random_uniform(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);

/// G G* with G an n x rank Ginibre matrix.
Matrix random_psd(CounterRng& rng, Eigen::Index n, Eigen::Index rank);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(CounterRng& rng, Eigen::Index n);

/// rows x cols matrix with orthonormal columns (rows >= cols).
Matrix random_isometry(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace ncilab
