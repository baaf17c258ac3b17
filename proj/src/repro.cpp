#include <cmath>

#include "ncilab/analysis.hpp"
#include "ncilab/errors.hpp"
#include "ncilab/io.hpp"
#include "ncilab/search.hpp"

namespace ncilab {

RealMatrix counterexample_4x4() {
    RealMatrix A(4, 4);
    A << 3, 0, -2, -2,
         0, 3, 2, -1,
         -2, 2, 4, 0,
         -2, -1, 0, 3;
    return A;
}

std::vector<std::string> repro_cases() {
    return {"counterexample-4x4", "duality", "limit-0p11669", "hanner-reduction", "gp-nonconvex"};
}

namespace {

ReproReport counterexample_case() {
    const SchattenOrder p(1.5);
    const IneqReport r = check_nci(BlockMatrix::from_scalars(to_complex(counterexample_4x4())), p);
    return {"counterexample-4x4",
            {{"matrix", matrix_to_json(counterexample_4x4())}, {"report", report_to_json(r)}},
            !r.satisfied};
}

ReproReport duality_case() {
    const SchattenOrder p(1.5);
    RealMatrix T(2, 2);
    T << 1.0, 2.0, -0.1, 1.0;
    const DualityRoundtrip d = duality_roundtrip(BlockMatrix::from_scalars(to_complex(T)), p);
    json g = json::array();
    json h = json::array();
    for (std::size_t k = 0; k < d.G_hat.size(); ++k) {
        g.push_back(round_report(d.G_hat[k](0, 0).real()));
        h.push_back(round_report(d.H_hat[k](0, 0).real()));
    }
    const json data = {
        {"p", 1.5},
        {"T", matrix_to_json(T)},
        {"compression", matrix_to_json(compress(BlockMatrix::from_scalars(to_complex(T)), p).values)},
        {"X_hat", matrix_to_json(d.X_hat.unaryExpr([](double x) { return round_report(x); }).eval())},
        {"x_norm", round_report(d.x_norm)},
        {"G_hat", std::move(g)},
        {"H_hat", std::move(h)},
        {"Y", matrix_to_json(assemble(d.Y).real().unaryExpr([](double x) { return round_report(x); }).eval())},
        {"y_norm", round_report(d.y_norm)},
        {"trace_TY", round_report(d.trace_TY)},
        {"trace_TX", round_report(d.trace_TX.value_or(std::nan("")))},
        {"norm_T", round_report(d.lhs_value)},
        {"norm_compression", round_report(d.rhs_value)},
    };
    return {"duality", data, false};
}

ReproReport limit_case() {
    const EpsilonStudy s = epsilon_limit_study(SchattenOrder(1.5));
    const json data = {
        {"p", 1.5},
        {"rows", epsilon_study_to_json(s)},
        {"limit_entry11", round_report(s.entries_11.back())},
        {"stabilized", s.stabilized},
    };
    return {"limit-0p11669", data, false};
}

ReproReport hanner_case() {
    const SchattenOrder p(1.5);
    CounterRng rng(2024, 0);
    const Matrix A = random_ginibre(rng, 3, 3);
    const Matrix B = random_ginibre(rng, 3, 3);
    const HannerReduction h = hanner_from_nci(A, B, p);
    const json data = {
        {"p", 1.5},
        {"nci", report_to_json(h.nci)},
        {"hanner", report_to_json(h.hanner)},
        {"conjugated_gap", round_report(h.conjugated_gap)},
        {"lhs_gap", round_report(h.lhs_gap)},
        {"rhs_gap", round_report(h.rhs_gap)},
        {"identity_holds", h.identity_holds},
    };
    return {"hanner-reduction", data, !h.nci.satisfied || !h.hanner.satisfied};
}

ReproReport gp_case() {
    const NonconvexityProbe probe = g_p_nonconvexity_probe(SchattenOrder(0.5), 10000, 42);
    json data = {{"p", 0.5}, {"trials", probe.trials}, {"seed", 42}};
    data["convexity_violation"] = probe.convexity_violation ? gp_violation_to_json(*probe.convexity_violation)
                                                            : json(nullptr);
    data["concavity_violation"] = probe.concavity_violation ? gp_violation_to_json(*probe.concavity_violation)
                                                            : json(nullptr);
    return {"gp-nonconvex", data, probe.convexity_violation.has_value() || probe.concavity_violation.has_value()};
}

}  // namespace

ReproReport repro(std::string_view case_name) {
    if (case_name == "counterexample-4x4") return counterexample_case();
    if (case_name == "duality") return duality_case();
    if (case_name == "limit-0p11669") return limit_case();
    if (case_name == "hanner-reduction") return hanner_case();
    if (case_name == "gp-nonconvex") return gp_case();
    throw InvalidArgument("unknown repro case '" + std::string(case_name) + "'");
}

}  // namespace ncilab
