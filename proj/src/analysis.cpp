#include "ncilab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ncilab/errors.hpp"
#include "ncilab/rng.hpp"

namespace ncilab {

namespace {

void require_nonneg(const RealMatrix& B, const char* what) {
    if (B.rows() < 1 || B.cols() < 1 || !B.allFinite()) {
        throw InvalidArgument(std::string(what) + ": empty or non-finite matrix");
    }
    if (B.minCoeff() < 0.0) throw DomainError(std::string(what) + ": entries must be non-negative");
}

void require_positive(const RealMatrix& B, const char* what) {
    require_nonneg(B, what);
    if (B.minCoeff() == 0.0) {
        throw BoundarySingularity(std::string(what) +
                                  ": zero entry on the boundary; use epsilon_limit_study");
    }
}

}  // namespace

GpEvaluation g_p(const RealMatrix& B, SchattenOrder p) {
    require_nonneg(B, "g_p");
    if (p.is_infinite()) throw UnsupportedExponent("g_p: requires finite p");
    const RealMatrix root = hadamard_power(B, 1.0 / p.value());
    const double value = std::pow(schatten_norm(to_complex(root), p), p.value());
    return {B, p, value};
}

double g_p_frechet(const RealMatrix& B, const RealMatrix& Delta, SchattenOrder p) {
    require_positive(B, "g_p_frechet");
    require_nonneg(Delta, "g_p_frechet");
    if (B.rows() != Delta.rows() || B.cols() != Delta.cols()) throw ShapeError("g_p_frechet: shape mismatch");
    if (p.is_infinite() || p.value() < 1.0) throw InvalidArgument("g_p_frechet: requires 1 <= p < inf");

    const double pv = p.value();
    const RealMatrix C = hadamard_power(B, 1.0 / pv);
    const RealMatrix polar = polar_power(C, pv - 1.0);
    const RealMatrix weight = hadamard_power(B, (1.0 - pv) / pv);
    return (Delta.array() * polar.array() * weight.array()).sum();
}

IneqReport derivative_check(const RealMatrix& B, const RealMatrix& Delta, SchattenOrder p, double h,
                            double tol) {
    const double analytic = g_p_frechet(B, Delta, p);
    if (!(h > 0.0)) throw InvalidArgument("derivative_check: step must be positive");
    const RealMatrix lower = B - h * Delta;
    if (lower.minCoeff() <= 0.0) throw DomainError("derivative_check: B - h Delta leaves the positive cone");
    const double fd = (g_p(B + h * Delta, p).value - g_p(lower, p).value) / (2.0 * h);
    return make_report("derivative", p, analytic, fd, Direction::Equality, tol, "theorem");
}

IneqReport check_AC(const RealMatrix& A, const RealMatrix& C, SchattenOrder p, double tol) {
    require_nonneg(A, "check_AC");
    require_positive(C, "check_AC");
    if (A.rows() != C.rows() || A.cols() != C.cols()) throw ShapeError("check_AC: shape mismatch");
    if (p.value() < 1.0 || p.value() > 2.0) throw InvalidArgument("check_AC: requires 1 <= p <= 2");

    const double pv = p.value();
    const RealMatrix weight = polar_power(C, pv - 1.0).array() * hadamard_power(C, 1.0 - pv).array();
    const double lhs = (hadamard_power(A, pv).array() * weight.array()).sum();
    const double rhs = std::pow(schatten_norm(to_complex(A), p), pv);
    return make_report("ac", p, lhs, rhs, Direction::LhsLeRhs, tol, "open");
}

RealMatrix c_matrix(double epsilon) {
    RealMatrix C(3, 3);
    C << epsilon, 1.0, epsilon,
         1.0, epsilon, 1.0,
         epsilon, 1.0, 1.0;
    return C;
}

std::vector<double> default_epsilon_schedule() {
    std::vector<double> out;
    for (int k = 1; k <= 7; ++k) out.push_back(std::pow(10.0, -k));
    return out;
}

EpsilonStudy epsilon_limit_study(SchattenOrder p, const std::vector<double>& schedule) {
    if (!(p.value() > 1.0 && p.value() < 2.0)) throw InvalidArgument("epsilon_limit_study: requires 1 < p < 2");
    if (schedule.empty()) throw InvalidArgument("epsilon_limit_study: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
            throw InvalidArgument("epsilon_limit_study: schedule must be positive and strictly decreasing");
        }
    }

    EpsilonStudy study{p, schedule, {}, {}, false};
    for (const double eps : schedule) {
        const double entry = polar_power(c_matrix(eps), p.value() - 1.0)(0, 0);
        study.entries_11.push_back(entry);
        study.combined_11.push_back(entry * std::pow(eps, 1.0 - p.value()));
    }
    const auto n = study.entries_11.size();
    study.stabilized = n >= 2 && std::abs(study.entries_11[n - 1] - study.entries_11[n - 2]) <= 1e-4;
    return study;
}

IneqReport check_zero_entry_lemma(const RealMatrix& C, SchattenOrder p, double tol) {
    require_nonneg(C, "check_zero_entry_lemma");
    if (p.value() < 1.0 || p.value() > 2.0) throw InvalidArgument("check_zero_entry_lemma: requires 1 <= p <= 2");
    if ((C.array() == 0.0).count() == 0) throw InvalidArgument("check_zero_entry_lemma: C has no zero entry");

    const RealMatrix polar = polar_power(C, p.value() - 1.0);
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < C.cols(); ++j)
        for (Eigen::Index i = 0; i < C.rows(); ++i)
            if (C(i, j) == 0.0) worst = std::max(worst, polar(i, j));

    IneqReport r = make_report("zero-entry-lemma", p, worst, 0.0, Direction::LhsLeRhs, tol,
                               C.rows() == 2 ? "theorem" : "outside-lemma-scope");
    return r;
}

void Psd2Param::validate() const {
    if (!(lambda >= mu && mu >= 0.0)) throw InvalidArgument("Psd2Param: requires lambda >= mu >= 0");
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("Psd2Param: requires 0 <= t <= 1");
}

double Psd2Param::s() const { return std::sqrt(t * (1.0 - t)); }

RealMatrix Psd2Param::projector() const {
    RealMatrix P(2, 2);
    P << t, s(), s(), 1.0 - t;
    return P;
}

RealMatrix Psd2Param::materialize() const {
    validate();
    const RealMatrix P = projector();
    return lambda * P + mu * (RealMatrix::Identity(2, 2) - P);
}

RealMatrix Psd2Param::closed_form_power(double p) const {
    validate();
    const auto power = [p](double x) {
        if (x == 0.0) {
            if (p < 0.0) throw DomainError("Psd2Param: zero eigenvalue raised to a negative power");
            return p == 0.0 ? 1.0 : 0.0;
        }
        return std::pow(x, p);
    };
    const RealMatrix P = projector();
    return power(lambda) * P + power(mu) * (RealMatrix::Identity(2, 2) - P);
}

Psd2PowerCheck psd2_power_identity(const Psd2Param& param, double p, double tol) {
    param.validate();
    if (param.mu == 0.0 && p < 0.0) throw DomainError("psd2_power_identity: mu = 0 with p < 0");

    Psd2PowerCheck out;
    out.closed_form = param.closed_form_power(p);
    if (param.lambda == param.mu) {
        // A is a multiple of the identity; the eigenbasis is arbitrary.
        out.generic = std::pow(param.lambda, p) * RealMatrix::Identity(2, 2);
    } else {
        out.generic = hermitian_power(to_complex(param.materialize()), p).real();
    }
    out.identity_residual = (out.closed_form - out.generic).cwiseAbs().maxCoeff() /
                            std::max(1.0, out.closed_form.cwiseAbs().maxCoeff());
    out.identity_holds = out.identity_residual <= 1e-10;
    const Direction dir = p >= 0.0 ? Direction::LhsGeRhs : Direction::LhsLeRhs;
    out.sign = make_report("psd2-offdiag-sign", "entry12", out.closed_form(0, 1), 0.0, dir, tol, "theorem");
    return out;
}

NonconvexityProbe g_p_nonconvexity_probe(SchattenOrder p, std::size_t trials, std::uint64_t seed, double tol) {
    NonconvexityProbe probe{p, trials, std::nullopt, std::nullopt};
    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, trial, 0x67700000);
        const RealMatrix A = random_uniform(rng, 2, 2);
        const RealMatrix B = random_uniform(rng, 2, 2);
        const double ga = g_p(A, p).value;
        const double gb = g_p(B, p).value;
        const double gs = g_p(A + B, p).value;
        const double margin = gs - ga - gb;
        const double threshold = tol * std::max(1.0, ga + gb);

        GpViolation v{A, B, gs, ga, gb, margin, trial};
        if (margin > threshold &&
            (!probe.convexity_violation || margin > probe.convexity_violation->margin)) {
            probe.convexity_violation = v;
        }
        if (margin < -threshold &&
            (!probe.concavity_violation || margin < probe.concavity_violation->margin)) {
            probe.concavity_violation = v;
        }
    }
    return probe;
}

}  // namespace ncilab
