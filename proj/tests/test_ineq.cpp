#include <cmath>

#include <gtest/gtest.h>

#include "ncilab/errors.hpp"
#include "ncilab/ineq.hpp"
#include "ncilab/rng.hpp"
#include "oracles.hpp"

using namespace ncilab;

namespace {

BlockMatrix random_blocks(CounterRng& rng, Eigen::Index M, Eigen::Index N, Eigen::Index h, Eigen::Index w) {
    std::vector<std::vector<Matrix>> g(M);
    for (auto& row : g)
        for (Eigen::Index j = 0; j < N; ++j) row.push_back(random_ginibre(rng, h, w));
    return BlockMatrix(std::move(g));
}

RealMatrix printed_4x4() {
    RealMatrix A(4, 4);
    A << 3, 0, -2, -2, 0, 3, 2, -1, -2, 2, 4, 0, -2, -1, 0, 3;
    return A;
}

Matrix diag(const std::vector<double>& v) {
    Matrix D = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
    return D;
}

}  // namespace

TEST(Report, MarginConvention) {
    const IneqReport le = make_report("x", SchattenOrder(2.0), 1.0, 2.0, Direction::LhsLeRhs, 1e-9, "s");
    EXPECT_DOUBLE_EQ(le.margin, 1.0);
    EXPECT_TRUE(le.satisfied);
    const IneqReport ge = make_report("x", SchattenOrder(2.0), 1.0, 2.0, Direction::LhsGeRhs, 1e-9, "s");
    EXPECT_DOUBLE_EQ(ge.margin, -1.0);
    EXPECT_FALSE(ge.satisfied);
    const IneqReport eq = make_report("x", SchattenOrder(2.0), 1e6, 1e6 + 1e-4, Direction::Equality, 1e-9, "s");
    EXPECT_TRUE(eq.satisfied);  // relative tolerance
    const IneqReport kf = make_report("x", KyFan{2}, 1.0, 1.0, Direction::Equality, 1e-9, "s");
    EXPECT_FALSE(kf.exponent.has_value());
    EXPECT_EQ(kf.norm, "kyfan(2)");
}

TEST(NciDirection, FlipsAtTwo) {
    EXPECT_EQ(nci_direction(SchattenOrder(1.5)), Direction::LhsGeRhs);
    EXPECT_EQ(nci_direction(SchattenOrder(0.5)), Direction::LhsGeRhs);
    EXPECT_EQ(nci_direction(SchattenOrder(2.0)), Direction::Equality);
    EXPECT_EQ(nci_direction(SchattenOrder(3.0)), Direction::LhsLeRhs);
    EXPECT_EQ(nci_direction(SchattenOrder::infinity()), Direction::LhsLeRhs);
}

TEST(CheckNci, EqualityAtTwo) {
    CounterRng rng(1, 0);
    const IneqReport r = check_nci(random_blocks(rng, 2, 3, 2, 3), SchattenOrder(2.0));
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-10 * std::max(1.0, r.lhs));
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.scope, "conjecture");
}

TEST(CheckNci, PrintedCounterexample) {
    const IneqReport r = check_nci(BlockMatrix::from_scalars(to_complex(printed_4x4())), SchattenOrder(1.5));
    EXPECT_NEAR(r.lhs, 9.49929, 1e-4);
    EXPECT_NEAR(r.rhs, 9.63184, 1e-4);
    EXPECT_FALSE(r.satisfied);
    EXPECT_EQ(r.scope, "outside-conjecture-scope");
}

TEST(CheckNci, Scopes) {
    CounterRng rng(2, 0);
    const BlockMatrix T = random_blocks(rng, 2, 2, 2, 2);
    EXPECT_EQ(check_nci(T, SchattenOrder(0.5)).scope, "extension");
    EXPECT_EQ(check_nci(T, SchattenOrder(0.5)).direction, Direction::LhsGeRhs);
}

TEST(CheckNci, RandomLargeExponentSatisfied) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        CounterRng rng(3, s);
        EXPECT_TRUE(check_nci(random_blocks(rng, 2, 3, 4, 4), SchattenOrder(3.0)).satisfied);
    }
}

TEST(CheckNciGram, AgreesWithNciAtDoubledExponent) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        CounterRng rng(4, s);
        const BlockMatrix T = random_blocks(rng, 2, 3, 2, 2);
        for (double q : {0.75, 1.5}) {
            const IneqReport g = check_nci_gram(T, SchattenOrder(q), 1e-8);
            const IneqReport n = check_nci(T, SchattenOrder(2.0 * q), 1e-8);
            EXPECT_EQ(g.satisfied, n.satisfied);
            EXPECT_NEAR(g.lhs, n.lhs * n.lhs, 1e-9 * g.lhs);
            EXPECT_NEAR(g.rhs, n.rhs * n.rhs, 1e-9 * g.rhs);
        }
    }
}

TEST(CheckNciGram, SingleColumnIsTriangleInequality) {
    CounterRng rng(5, 0);
    const BlockMatrix T = random_blocks(rng, 2, 1, 3, 3);
    const IneqReport r = check_nci_gram(T, SchattenOrder(2.0));
    EXPECT_TRUE(r.satisfied);
}

TEST(CheckNciGram, TraceEqualityAtOne) {
    CounterRng rng(6, 0);
    const IneqReport r = check_nci_gram(random_blocks(rng, 2, 3, 2, 2), SchattenOrder(1.0));
    EXPECT_EQ(r.direction, Direction::Equality);
    EXPECT_TRUE(r.satisfied);
    EXPECT_THROW(check_nci_gram(random_blocks(rng, 2, 3, 2, 2), SchattenOrder(0.4)), InvalidArgument);
    EXPECT_THROW(check_nci_gram(random_blocks(rng, 3, 3, 2, 2), SchattenOrder(1.0)), ShapeError);
}

TEST(Hanner, EqualOperands) {
    CounterRng rng(7, 0);
    const Matrix A = random_ginibre(rng, 3, 3);
    const IneqReport r = check_hanner(A, A, SchattenOrder(1.5));
    EXPECT_NEAR(r.lhs, std::pow(2.0, 1.5) * std::pow(schatten_norm(A, SchattenOrder(1.5)), 1.5), 1e-10 * r.lhs);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.lhs);
}

TEST(Hanner, ParallelogramLaw) {
    CounterRng rng(8, 0);
    const IneqReport r = check_hanner(random_ginibre(rng, 3, 2), random_ginibre(rng, 3, 2), SchattenOrder(2.0));
    EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.lhs);
    EXPECT_EQ(r.direction, Direction::Equality);
}

TEST(Hanner, DiagonalMatchesScalarOracle) {
    CounterRng rng(9, 0);
    for (double p : {1.2, 1.5, 3.0}) {
        std::vector<double> a, b;
        for (int i = 0; i < 4; ++i) {
            a.push_back(rng.normal());
            b.push_back(rng.normal());
        }
        const IneqReport r = check_hanner(diag(a), diag(b), SchattenOrder(p));
        const oracle::HannerSides s = oracle::scalar_hanner(a, b, p);
        EXPECT_NEAR(r.lhs, s.lhs, 1e-10 * s.lhs);
        EXPECT_NEAR(r.rhs, s.rhs, 1e-10 * s.rhs);
        EXPECT_TRUE(r.satisfied);
    }
}

TEST(Hanner, Errors) {
    EXPECT_THROW(check_hanner(Matrix::Ones(2, 2), Matrix::Ones(2, 3), SchattenOrder(1.5)), ShapeError);
    EXPECT_THROW(check_hanner(Matrix::Ones(2, 2), Matrix::Ones(2, 2), SchattenOrder(0.5)), InvalidArgument);
}

TEST(HannerFromNci, IdentityHolds) {
    CounterRng rng(10, 0);
    for (double p : {1.5, 4.0}) {
        const HannerReduction h = hanner_from_nci(random_ginibre(rng, 3, 3), random_ginibre(rng, 3, 3), SchattenOrder(p));
        EXPECT_TRUE(h.identity_holds);
        EXPECT_TRUE(h.hanner.satisfied);
        EXPECT_TRUE(h.nci.satisfied);
    }
    const Matrix A = random_ginibre(rng, 2, 2);
    const HannerReduction same = hanner_from_nci(A, A, SchattenOrder(1.5));
    EXPECT_NEAR(same.hanner.margin, 0.0, 1e-9 * same.hanner.lhs);
    EXPECT_NEAR(same.nci.margin, 0.0, 1e-9 * same.nci.lhs);
}

TEST(KingTensor, SingleTermAndEqualB) {
    CounterRng rng(11, 0);
    const Matrix A = random_psd(rng, 2, 2);
    const Matrix B = random_psd(rng, 3, 3);
    for (double q : {0.5, 2.0}) {
        const IneqReport r = check_king_tensor({A}, {B}, SchattenOrder(q));
        EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.lhs);
        const IneqReport e = check_king_tensor({A, random_psd(rng, 2, 2)}, {B, B}, SchattenOrder(q));
        EXPECT_NEAR(e.lhs, e.rhs, 1e-10 * e.lhs);
    }
}

TEST(KingTensor, RandomBothRegimes) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        CounterRng rng(12, s);
        std::vector<Matrix> A, B;
        for (int k = 0; k < 3; ++k) {
            A.push_back(random_psd(rng, 2, 2));
            B.push_back(random_psd(rng, 2, 2));
        }
        const IneqReport hi = check_king_tensor(A, B, SchattenOrder(3.0));
        const IneqReport lo = check_king_tensor(A, B, SchattenOrder(0.5));
        EXPECT_TRUE(hi.satisfied);
        EXPECT_TRUE(lo.satisfied);
        EXPECT_EQ(lo.direction, Direction::LhsGeRhs);
    }
}

TEST(KingTensor, RejectsNonPsd) {
    EXPECT_THROW(check_king_tensor({diag({1, -1})}, {diag({1, 1})}, SchattenOrder(2.0)), DomainError);
}

TEST(ScaledTensor, UnitNormsReduceToKing) {
    CounterRng rng(13, 0);
    std::vector<Matrix> A, B;
    for (int k = 0; k < 3; ++k) {
        A.push_back(random_psd(rng, 2, 2));
        Matrix b = random_psd(rng, 2, 2);
        B.push_back(b / schatten_norm(b, SchattenOrder(2.0)));
    }
    const IneqReport s = check_scaled_tensor(A, B, SchattenOrder(2.0));
    const IneqReport k = check_king_tensor(A, B, SchattenOrder(2.0));
    EXPECT_NEAR(s.rhs, k.rhs, 1e-10 * k.rhs);
}

TEST(ScaledTensor, RandomBothRegimes) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        CounterRng rng(14, s);
        std::vector<Matrix> A, B;
        for (int k = 0; k < 3; ++k) {
            A.push_back(random_psd(rng, 2, 2));
            B.push_back(random_psd(rng, 3, 2));
        }
        EXPECT_TRUE(check_scaled_tensor(A, B, SchattenOrder(2.0)).satisfied);
        const IneqReport lo = check_scaled_tensor(A, B, SchattenOrder(0.7));
        EXPECT_TRUE(lo.satisfied);
        EXPECT_EQ(lo.direction, Direction::LhsGeRhs);
    }
}

TEST(Rank1PsdBound, ScalarIsEquality) {
    CounterRng rng(15, 0);
    const Matrix Z = random_psd(rng, 3, 3);
    const std::vector<Matrix> X(3, Matrix::Ones(1, 1));
    const IneqReport r = check_rank1_psd_bound(X, Z, SchattenOrder(1.5));
    EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.rhs);
}

TEST(Rank1PsdBound, RandomBothRegimes) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        CounterRng rng(16, s);
        const Matrix Z = random_psd(rng, 3, 3);
        for (double q : {1.5, 0.5}) {
            std::vector<Matrix> X;
            for (int k = 0; k < 3; ++k) {
                Matrix x = random_ginibre(rng, 2, 2);
                X.push_back(x / std::sqrt(schatten_norm(x * x.adjoint(), SchattenOrder(q))));
            }
            EXPECT_TRUE(check_rank1_psd_bound(X, Z, SchattenOrder(q)).satisfied);
        }
    }
}

TEST(Rank1PsdBound, RequiresNormalization) {
    const std::vector<Matrix> X(2, 2.0 * Matrix::Ones(1, 1));
    EXPECT_THROW(check_rank1_psd_bound(X, Matrix::Identity(2, 2), SchattenOrder(1.5)), InvalidArgument);
}

TEST(Mono2x2, Examples) {
    Matrix A(2, 2);
    A << 2, 1, 1, 1;
    EXPECT_NEAR(check_mono_2x2(A, A, SchattenOrder(1.5)).margin, 0.0, 1e-14);
    const double delta = 1e-3;
    for (const UnitarilyInvariantNorm& n :
         {UnitarilyInvariantNorm{SchattenOrder(1.0)}, UnitarilyInvariantNorm{SchattenOrder(3.0)},
          UnitarilyInvariantNorm{SchattenOrder::infinity()}, UnitarilyInvariantNorm{KyFan{1}},
          UnitarilyInvariantNorm{KyFan{2}}}) {
        const IneqReport r = check_mono_2x2(Matrix::Identity(2, 2), (1.0 + delta) * Matrix::Ones(2, 2), n);
        EXPECT_TRUE(r.satisfied);
        // Eigenvalues of the dominating matrix are 2(1+delta) and 0.
        const Eigen::Vector2d ev(2.0 * (1.0 + delta), 0.0);
        if (const auto* kf = std::get_if<KyFan>(&n)) {
            EXPECT_NEAR(r.rhs, kf->k == 1 ? ev(0) : ev.sum(), 1e-12);
        }
    }
}

TEST(Mono2x2, Errors) {
    Matrix neg(2, 2);
    neg << 1, -0.5, -0.5, 1;
    EXPECT_THROW(check_mono_2x2(neg, Matrix::Ones(2, 2), SchattenOrder(2.0)), DomainError);
    Matrix notpsd(2, 2);
    notpsd << 1, 2, 2, 1;
    EXPECT_THROW(check_mono_2x2(Matrix::Identity(2, 2), notpsd, SchattenOrder(2.0)), DomainError);
    EXPECT_THROW(check_mono_2x2(Matrix::Ones(2, 2), Matrix::Identity(2, 2), SchattenOrder(2.0)), InvalidArgument);
}

TEST(KyFanCompression, ZeroR) {
    CounterRng rng(17, 0);
    const Matrix Q = random_psd(rng, 4, 2);
    const Matrix R = Matrix::Zero(4, 4);
    const IneqReport r = check_kyfan_compression(Q, R, {2, 2}, KyFan{2});
    EXPECT_NEAR(r.lhs, Q.trace().real(), 1e-10);
    EXPECT_NEAR(r.rhs, Q.trace().real(), 1e-10);
}

TEST(KyFanCompression, KyFanTwoIsTotalTrace) {
    CounterRng rng(18, 0);
    const Matrix Q = random_psd(rng, 3, 3);
    const Matrix R = random_psd(rng, 3, 3);
    const IneqReport r = check_kyfan_compression(Q, R, {1, 1, 1}, KyFan{2});
    EXPECT_NEAR(r.rhs, Q.trace().real() + R.trace().real(), 1e-10 * r.rhs);
    EXPECT_TRUE(r.satisfied);
}

TEST(KyFanCompression, OperatorNormAttainedByRankOne) {
    CounterRng rng(19, 0);
    RealVector q(3), r(3);
    for (int i = 0; i < 3; ++i) {
        q(i) = rng.uniform();
        r(i) = rng.uniform();
    }
    const Matrix Q = to_complex(q.cwiseSqrt() * q.cwiseSqrt().transpose());
    const Matrix R = to_complex(r.cwiseSqrt() * r.cwiseSqrt().transpose());
    const IneqReport rep = check_kyfan_compression(Q, R, {1, 1, 1}, SchattenOrder::infinity());
    EXPECT_NEAR(rep.lhs, rep.rhs, 1e-10);
    EXPECT_NEAR(rep.lhs, max_opnorm_prescribed_diag({q, r}), 1e-10);

    const Matrix Qd = to_complex(RealMatrix(q.asDiagonal()));
    const Matrix Rd = to_complex(RealMatrix(r.asDiagonal()));
    EXPECT_TRUE(check_kyfan_compression(Qd, Rd, {1, 1, 1}, SchattenOrder::infinity()).satisfied);
}

TEST(KyFanCompression, RejectsBadInput) {
    EXPECT_THROW(check_kyfan_compression(diag({1, -1}), diag({1, 1}), {1, 1}, KyFan{1}), DomainError);
    EXPECT_THROW(check_kyfan_compression(diag({1, 1}), diag({1, 1}), {1, 2}, KyFan{1}), ShapeError);
}

TEST(PrescribedDiag, ClosedForms) {
    RealVector q(3);
    q << 0.5, 1.0, 2.0;
    EXPECT_NEAR(max_opnorm_prescribed_diag({q}), 3.5, 1e-12);
    RealVector a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    EXPECT_NEAR(max_opnorm_prescribed_diag({a, b}), 1.0, 1e-12);
    RealVector n(2);
    n << -1, 1;
    EXPECT_THROW(max_opnorm_prescribed_diag({n}), DomainError);
}

TEST(CauchySchwarzChain, Random) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        CounterRng rng(20, s);
        const BlockMatrix T = random_blocks(rng, 2, 3, 2, 3);
        for (double q : {1.0, 1.5, 3.0}) EXPECT_TRUE(check_cauchy_schwarz_chain(T, SchattenOrder(q)).satisfied);
    }
}

TEST(DualityRoundtrip, PrintedExample) {
    Matrix T(2, 2);
    T << 1, 2, -0.1, 1;
    const DualityRoundtrip d = duality_roundtrip(BlockMatrix::from_scalars(T), SchattenOrder(1.5));
    RealMatrix X(2, 2);
    X << 0.488, 0.774, -0.153, 0.488;
    EXPECT_LE((d.X_hat - X).cwiseAbs().maxCoeff(), 5e-3);
    EXPECT_NEAR(d.x_norm, 1.0, 1e-9);
    EXPECT_NEAR(d.y_norm, 1.0426, 1e-3);
    EXPECT_NEAR(d.rhs_value, oracle::schatten(RealMatrix(T.cwiseAbs()), 1.5), 1e-9);
    ASSERT_TRUE(d.trace_TX.has_value());
    EXPECT_LE(d.trace_TY, *d.trace_TX + 1e-9);
    EXPECT_LE(*d.trace_TX, d.lhs_value + 1e-9);
    EXPECT_NEAR(d.H_hat[0](0, 0).real(), -1.0, 1e-12);
}

TEST(DualityRoundtrip, NonNegativeBlocksStayInBall) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        CounterRng rng(21, s);
        const Matrix T = to_complex(random_uniform(rng, 2, 3));
        const DualityRoundtrip d = duality_roundtrip(BlockMatrix::from_scalars(T), SchattenOrder(1.5));
        EXPECT_LE(d.y_norm, 1.0 + 1e-9);
    }
}

TEST(DualityRoundtrip, ZeroBlockGetsZeroWitness) {
    Matrix T(2, 2);
    T << 1, 0, 0.5, 1;
    const DualityRoundtrip d = duality_roundtrip(BlockMatrix::from_scalars(T), SchattenOrder(1.5));
    EXPECT_EQ(d.G_hat[1](0, 0), Complex(0.0, 0.0));
    EXPECT_THROW(duality_roundtrip(BlockMatrix::from_scalars(T), SchattenOrder(2.5)), InvalidArgument);
}
