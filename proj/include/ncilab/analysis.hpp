#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncilab/ineq.hpp"
#include "ncilab/schatten.hpp"

namespace ncilab {

/// g_p(B) = ||B^(o 1/p)||_p^p on entrywise non-negative B. Homogeneous of
/// degree one.
struct GpEvaluation {
    RealMatrix B;
    SchattenOrder p;
    double value;
};

/// Throws DomainError for negative entries, UnsupportedExponent for p = inf.
GpEvaluation g_p(const RealMatrix& B, SchattenOrder p);

/// Directional derivative of g_p at B along Delta:
///   Tr Delta^T ((B^(o 1/p))^[p-1] o B^(o (1-p)/p)).
/// B must be strictly positive (BoundarySingularity on a zero entry), Delta
/// non-negative, 1 <= p < inf.
double g_p_frechet(const RealMatrix& B, const RealMatrix& Delta, SchattenOrder p);

/// g_p_frechet(B, Delta) against the central difference
/// (g_p(B + h Delta) - g_p(B - h Delta)) / 2h, as an equality with relative
/// tolerance tol. B - h Delta must stay strictly positive.
IneqReport derivative_check(const RealMatrix& B, const RealMatrix& Delta, SchattenOrder p, double h = 1e-6,
                            double tol = 1e-5);

/// Tr (A^(o p))^T (C^[p-1] o C^(o 1-p)) <= Tr|A|^p for 1 <= p <= 2, A >= 0,
/// C > 0 entrywise. Equality when A is proportional to C.
IneqReport check_AC(const RealMatrix& A, const RealMatrix& C, SchattenOrder p, double tol = kDefaultTol);

/// [[e, 1, e], [1, e, 1], [e, 1, 1]].
RealMatrix c_matrix(double epsilon);

/// 1e-1, 1e-2, ..., 1e-7.
std::vector<double> default_epsilon_schedule();

struct EpsilonStudy {
    SchattenOrder p;
    std::vector<double> epsilons;
    std::vector<double> entries_11;   // (C^[p-1])_11
    std::vector<double> combined_11;  // (C^[p-1] o C^(o 1-p))_11
    bool stabilized;                  // |last - previous| <= 1e-4
};

/// Requires 1 < p < 2 and a strictly decreasing positive schedule.
EpsilonStudy epsilon_limit_study(SchattenOrder p,
                                 const std::vector<double>& schedule = default_epsilon_schedule());

/// For every zero entry C_ij, checks (C^[p-1])_ij <= tol. Reports the largest
/// such entry as lhs against rhs = 0. Scope is "theorem" for 2 x N inputs and
/// "outside-lemma-scope" otherwise.
IneqReport check_zero_entry_lemma(const RealMatrix& C, SchattenOrder p, double tol = 1e-12);

/// A = lambda P + mu (1 - P), P = [[t, s], [s, 1-t]], s = sqrt(t (1-t)).
struct Psd2Param {
    double lambda;
    double mu;
    double t;

    /// Throws InvalidArgument unless lambda >= mu >= 0 and 0 <= t <= 1.
    void validate() const;
    double s() const;
    RealMatrix projector() const;
    RealMatrix materialize() const;
    /// lambda^p P + mu^p (1 - P).
    RealMatrix closed_form_power(double p) const;
};

struct Psd2PowerCheck {
    /// Sign of (A^p)_12: >= 0 for p >= 0, <= 0 for p < 0.
    IneqReport sign;
    RealMatrix closed_form;
    RealMatrix generic;
    double identity_residual;  // max |closed - generic| / max(1, max |closed|)
    bool identity_holds;       // residual <= 1e-10
};

/// mu = 0 with p < 0 is a DomainError.
Psd2PowerCheck psd2_power_identity(const Psd2Param& param, double p, double tol = 1e-12);

struct GpViolation {
    RealMatrix A;
    RealMatrix B;
    double g_sum;   // g_p(A + B)
    double g_a;
    double g_b;
    double margin;  // g_p(A + B) - g_p(A) - g_p(B)
    std::size_t trial;
};

struct NonconvexityProbe {
    SchattenOrder p;
    std::size_t trials;
    std::optional<GpViolation> convexity_violation;  // g(A+B) > g(A) + g(B)
    std::optional<GpViolation> concavity_violation;  // g(A+B) < g(A) + g(B)
};

/// Random non-negative 2x2 pairs; keeps the largest violation in each
/// direction that exceeds tol * max(1, g(A) + g(B)).
NonconvexityProbe g_p_nonconvexity_probe(SchattenOrder p, std::size_t trials, std::uint64_t seed,
                                         double tol = kDefaultTol);

}  // namespace ncilab
