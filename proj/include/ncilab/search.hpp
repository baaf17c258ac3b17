#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ncilab/blockmat.hpp"
#include "ncilab/ineq.hpp"
#include "ncilab/rng.hpp"

namespace ncilab {

enum class Ensemble {
    GeneralComplex,    // standard complex Gaussian entries
    Real,              // real Gaussian entries
    PsdGram,           // T = G* G, square grid of square blocks
    DiagonalBlocks,    // diagonal blocks with non-negative entries
    ScalarBlocks,      // real 1x1 blocks
    Rank1Blocks,       // A_ij = alpha_ij u_ij*
    ProportionalRows,  // every block in grid row i is a multiple of X_i
    Rank1Compression,  // C_p(T) has rank one at the normalizing exponent
};

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(std::string_view name);

/// Structured starting points for an ensemble.
enum class Construction {
    None,
    /// Diagonal blocks whose first diagonal carries the 3x3 C(eps) matrix and
    /// whose second diagonal carries a small (1,1) bump.
    CMatrix,
};

std::string to_string(Construction c);
Construction construction_from_string(std::string_view name);

struct GridShape {
    Eigen::Index block_rows = 2;
    Eigen::Index block_cols = 3;
    Eigen::Index block_height = 2;
    Eigen::Index block_width = 2;
};

struct SearchConfig {
    Ensemble ensemble = Ensemble::GeneralComplex;
    GridShape shape;
    std::vector<SchattenOrder> p_grid;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::size_t refine_steps = 500;
    Construction construction = Construction::None;
    unsigned jobs = 1;  // worker threads; 0 = hardware concurrency

    /// Throws InvalidArgument on an inconsistent configuration.
    void validate() const;
};

/// Deterministic in (config.seed, trial_index). `normalize_at` fixes the
/// exponent at which Rank1Compression instances have rank-one compression
/// (defaults to the first exponent of the grid); other ensembles ignore it.
BlockMatrix random_instance(const SearchConfig& config, std::size_t trial_index,
                            std::optional<SchattenOrder> normalize_at = std::nullopt);

struct RefineResult {
    BlockMatrix instance;
    IneqReport report;
    std::vector<double> accepted_margins;  // margin after each accepted step
};

/// Hill-climb on check_nci's margin: multiplicative perturbation of one
/// entry at a time, relative size 1e-2, halved after 20 consecutive
/// rejections. A step is kept only if it strictly lowers the margin.
RefineResult refine_violation(const BlockMatrix& start, SchattenOrder p, std::size_t steps, CounterRng& rng,
                              double tol = 1e-8);

/// check_nci margin recomputed with long double SVDs.
double extended_nci_margin(const BlockMatrix& T, SchattenOrder p);

struct ViolationCertificate {
    SearchConfig config;
    std::size_t trial_index;
    SchattenOrder p;
    BlockMatrix instance;
    double lhs;
    double rhs;
    double margin;
    double extended_margin;
};

/// Runs check_nci for every trial and exponent; raw violations are refined
/// and certified when the extended-precision margin is below
/// -tol * max(1, |lhs|, |rhs|). Sorted by margin, most negative first.
/// The result does not depend on config.jobs.
std::vector<ViolationCertificate> search_violations(const SearchConfig& config, double tol = 1e-8);

/// Re-runs check_nci on the stored instance.
IneqReport reverify(const ViolationCertificate& cert, double tol = 1e-8);

/// True when the stored instance still violates and reproduces the stored
/// margin to 1e-12 relative.
bool certificate_reverifies(const ViolationCertificate& cert, double tol = 1e-8);

struct VariationalProbe {
    IneqReport report;  // lhs: empirical extremum, rhs: closed form
    Matrix best_Q;
    Matrix best_R;
};

/// Empirical max (q >= 1) or min (q < 1) of ||Q + R||_q over PSD block
/// matrices Q, R with ||Q_(kk)||_q = q_vals[k], ||R_(kk)||_q = r_vals[k],
/// against ||[[sum q_k, sum sqrt(q_k r_k)], [., sum r_k]]||_q.
///
/// Off-diagonal blocks come from Q = V* V with V = [W_1 D_1^(1/2), ...] and
/// isometries W_k; with probability 1/2 the W_k are square (unitary K).
VariationalProbe probe_variational(const std::vector<double>& q_vals, const std::vector<double>& r_vals,
                                   SchattenOrder q, std::size_t trials, std::uint64_t seed,
                                   Eigen::Index block_dim = 1, std::size_t refine_steps = 300);

/// Hard-coded reproductions of the printed examples.
struct ReproReport {
    std::string name;
    nlohmann::json data;
    bool violation;  // a checker ran and reported a violation
};

/// Cases: counterexample-4x4, duality, limit-0p11669, hanner-reduction,
/// gp-nonconvex. Unknown names throw InvalidArgument.
ReproReport repro(std::string_view case_name);

std::vector<std::string> repro_cases();

/// The printed 4x4 PSD matrix whose absolute-value compression beats it at p = 1.5.
RealMatrix counterexample_4x4();

}  // namespace ncilab
