#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "msl/operator.hpp"

using namespace msl;

namespace {

CMat diag(const std::vector<cplx> &d) {
    CMat m = CMat::Zero(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMat jordan_block(int n, cplx l) {
    CMat m = l * CMat::Identity(n, n);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
    return m;
}

CMat with_condition(std::mt19937_64 &rng, int d, double cond) {
    CMat u = fixture::random_unitary(rng, d), v = fixture::random_unitary(rng, d);
    std::vector<cplx> s;
    for (int i = 0; i < d; ++i) s.push_back(1.0 - (1.0 - 1.0 / cond) * i / std::max(1, d - 1));
    return u * diag(s) * v.adjoint();
}

CMat random_contraction(std::mt19937_64 &rng, int d) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = complex_normal(rng);
    return 0.95 * a / linalg::op_norm(a);
}

} // namespace

TEST(OperatorMatrix, ContractionFlag) {
    EXPECT_TRUE(OperatorMatrix::from(CMat::Identity(3, 3)).contraction);
    EXPECT_FALSE(OperatorMatrix::from(1.01 * CMat::Identity(3, 3)).contraction);
    EXPECT_THROW(OperatorMatrix::from(CMat::Zero(2, 3)), Error);
}

TEST(ApplyBlaschke, ScalarMatrixAtItsZero) {
    cplx l(0.3, -0.4);
    EXPECT_LE(linalg::op_norm(apply_blaschke(l * CMat::Identity(3, 3), BlaschkeProduct({l}))), 1e-15);
}

TEST(ApplyBlaschke, DiagonalOfZeros) {
    std::vector<cplx> z{0.0, cplx(0.5, 0.1), cplx(-0.2, 0.7)};
    EXPECT_LE(linalg::op_norm(apply_blaschke(diag(z), BlaschkeProduct(z))), 1e-10);
}

TEST(ApplyBlaschke, MultiplicativeOnContractions) {
    std::mt19937_64 rng(71);
    for (int it = 0; it < 20; ++it) {
        CMat t = random_contraction(rng, 5);
        BlaschkeProduct b1 = fixture::random_blaschke(rng, 2), b2 = fixture::random_blaschke(rng, 3);
        CMat lhs = apply_blaschke(t, b1 * b2);
        EXPECT_LE(linalg::op_norm(lhs - apply_blaschke(t, b1) * apply_blaschke(t, b2)), 1e-8);
        EXPECT_LE(linalg::op_norm(lhs), 1.0 + 5e-8);
    }
}

TEST(ApplyBlaschke, SingularResolventRejected) {
    try {
        apply_blaschke(2.0 * CMat::Identity(2, 2), BlaschkeProduct({0.5}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), "resolvent-failure");
    }
}

TEST(EigenspaceDims, DiagonalWithRepeat) {
    cplx l(0.2, 0.1), m(-0.5, 0.0);
    auto k = eigenspace_dims(diag({l, l, m}), {l, m});
    EXPECT_EQ(k, (std::vector<int>{2, 1}));
}

TEST(EigenspaceDims, NilpotentBlock) { EXPECT_EQ(eigenspace_dims(jordan_block(4, 0.0), {0.0}), std::vector<int>{1}); }

TEST(EigenspaceDims, SurvivesConjugation) {
    std::mt19937_64 rng(73);
    cplx l(0.3, 0.3), m(-0.4, 0.2);
    CMat x = fixture::random_invertible(rng, 5);
    CMat t = x * diag({l, l, m, m, m}) * x.inverse();
    EXPECT_EQ(eigenspace_dims(t, {l, m}), (std::vector<int>{2, 3}));
}

TEST(Multiplicity, ScalarBlock) {
    auto r = multiplicity(cplx(0.4, 0.0) * CMat::Identity(2, 2));
    EXPECT_EQ(r.mu, 2);
    ASSERT_EQ(r.weyr.size(), 1u);
    EXPECT_EQ(r.weyr[0], std::vector<int>{2});
}

TEST(Multiplicity, SingleJordanBlockIsCyclic) {
    for (int n : {1, 3, 6}) EXPECT_EQ(multiplicity(jordan_block(n, 0.25)).mu, 1);
    auto r = multiplicity(jordan_block(3, 0.0));
    EXPECT_EQ(r.weyr[0], (std::vector<int>{1, 1, 1}));
}

TEST(Multiplicity, DistinctDiagonalAgainstKrylovOracle) {
    std::mt19937_64 rng(79);
    CMat t = diag({0.1, cplx(0.3, 0.5), -0.6});
    EXPECT_EQ(multiplicity(t).mu, 1);
    CVec v(3);
    for (auto &c : v) c = complex_normal(rng);
    CMat k(3, 3);
    k.col(0) = v;
    k.col(1) = t * v;
    k.col(2) = t * t * v;
    EXPECT_EQ(linalg::numerical_rank(k, 1e-10), 3);
}

TEST(Multiplicity, ClusteredSpectrumWarns) {
    EXPECT_TRUE(multiplicity(diag({0.3, 0.3 + 1e-8})).clustered_warning);
    EXPECT_FALSE(multiplicity(diag({0.3, 0.5})).clustered_warning);
}

TEST(Defects, Unitary) {
    std::mt19937_64 rng(83);
    DefectReport r = defects(fixture::random_unitary(rng, 4));
    EXPECT_EQ(r.d_t, 0);
    EXPECT_EQ(r.d_t_star, 0);
}

TEST(Defects, ZeroMatrix) {
    DefectReport r = defects(CMat::Zero(3, 3));
    EXPECT_EQ(r.d_t, 3);
    EXPECT_EQ(r.d_t_star, 3);
}

TEST(Defects, TruncatedShift) {
    DefectReport r = defects(jordan_block(6, 0.0));
    EXPECT_EQ(r.d_t, 1);
    EXPECT_EQ(r.d_t_star, 1);
}

TEST(Defects, NonContractionRejected) {
    try {
        defects(1.5 * CMat::Identity(2, 2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), "not-a-contraction");
    }
}

TEST(Defects, SquareInnerShiftsAreBalanced) {
    std::mt19937_64 rng(89);
    for (int it = 0; it < 10; ++it) {
        BlaschkeProduct b1 = fixture::random_blaschke(rng, 3, 0.8), b2 = fixture::random_blaschke(rng, 2, 0.8);
        DefectReport r = defects(diagonal_theta_shift({b1, b2}));
        EXPECT_EQ(r.d_t, r.d_t_star);
    }
}

TEST(IntertwinerSpace, IdentityGivesEverything) {
    EXPECT_EQ(intertwiner_space(CMat::Identity(3, 3), CMat::Identity(3, 3)).size(), 9u);
}

TEST(IntertwinerSpace, DistinctScalarsGiveNothing) {
    CMat t(1, 1), r(1, 1);
    t(0, 0) = 0.5;
    r(0, 0) = 1.0 / 3.0;
    EXPECT_TRUE(intertwiner_space(t, r).empty());
}

TEST(IntertwinerSpace, KnownIntertwinerInSpan) {
    std::mt19937_64 rng(97);
    CMat t = random_contraction(rng, 4);
    CMat x0 = fixture::random_invertible(rng, 4);
    CMat r = x0 * t * x0.inverse();
    auto basis = intertwiner_space(t, r);
    ASSERT_FALSE(basis.empty());
    CMat b(16, basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) b.col(i) = Eigen::Map<const CVec>(basis[i].data(), 16);
    CVec v = Eigen::Map<const CVec>(x0.data(), 16);
    CVec proj = b * (b.adjoint() * v);
    EXPECT_LE((v - proj).norm(), 1e-8 * v.norm());
}

TEST(FindSimilarity, RecoversWellConditionedConjugate) {
    std::mt19937_64 rng(101);
    CMat t = diag({0.1, cplx(0.2, 0.4), -0.5, cplx(0, -0.3)});
    CMat x0 = with_condition(rng, 4, 10.0);
    auto c = find_similarity(t, x0 * t * x0.inverse());
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->accepted);
    EXPECT_GE(c->sigma_min, 0.1 * 1e-3);
}

TEST(FindSimilarity, DifferentSpectraGiveNone) {
    EXPECT_FALSE(find_similarity(diag({0.1, 0.2}), diag({0.3, 0.4})));
}

TEST(FindSimilarity, EqualOperatorsAccepted) {
    CMat t = jordan_block(3, 0.2);
    auto c = find_similarity(t, t);
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->accepted);
}

TEST(FindSimilarity, RandomConjugates) {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> lc(0.0, 3.0);
    for (int it = 0; it < 100; ++it) {
        auto pts = fixture::separated_points(rng, 4, 0.9, 0.2);
        CMat t = diag(pts);
        CMat x0 = with_condition(rng, 4, std::pow(10.0, lc(rng)));
        auto c = find_similarity(t, x0 * t * x0.inverse(), static_cast<std::uint64_t>(it));
        ASSERT_TRUE(c);
        EXPECT_TRUE(c->accepted);
    }
}

TEST(JordanModel, DiagonalInput) {
    std::vector<cplx> lam{0.0, cplx(0.5, 0.2), cplx(-0.3, -0.5)};
    CMat t = diag({lam[0], lam[1], lam[1], lam[2]});
    JordanModel jm = jordan_model(t, lam);
    EXPECT_EQ(jm.m, 2);
    ASSERT_EQ(jm.blocks.size(), 2u);
    EXPECT_EQ(jm.blocks[0].degree(), 3);
    EXPECT_EQ(jm.blocks[1].degree(), 1);
    EXPECT_EQ(jm.blocks[1].zeros()[0], lam[1]);
    EXPECT_TRUE(jm.cert.accepted);
    EXPECT_LE(jm.cert.residual, 1e-8);
}

TEST(JordanModel, OneDimensional) {
    CMat t(1, 1);
    t(0, 0) = cplx(0.3, 0.1);
    JordanModel jm = jordan_model(t, {t(0, 0)});
    EXPECT_EQ(jm.m, 1);
    EXPECT_EQ(jm.theta.rows(), 1);
    EXPECT_NEAR(std::abs(jm.t_theta(0, 0) - t(0, 0)), 0.0, 1e-15);
}

TEST(JordanModel, RandomConjugateWithTwoDoubles) {
    std::mt19937_64 rng(107);
    auto lam = fixture::separated_points(rng, 6, 0.7, 0.5);
    std::vector<cplx> d = lam;
    d.push_back(lam[1]);
    d.push_back(lam[4]);
    CMat x = fixture::random_invertible(rng, 8);
    JordanModel jm = jordan_model(x * diag(d) * x.inverse(), lam);
    EXPECT_EQ(jm.m, 2);
    EXPECT_EQ(jm.blocks[0].degree(), 6);
    EXPECT_EQ(jm.blocks[1].degree(), 2);
    EXPECT_TRUE(jm.cert.accepted);
    Eigen::ComplexEigenSolver<CMat> es(jm.t_theta);
    for (cplx l : lam) {
        int hits = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) hits += std::abs(es.eigenvalues()(i) - l) < 1e-8;
        EXPECT_EQ(hits, (l == lam[1] || l == lam[4]) ? 2 : 1);
    }
}

TEST(JordanModel, NonDiagonalizableRejected) {
    try {
        jordan_model(jordan_block(2, 0.2), {0.2});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::precondition);
    }
}

TEST(JordanModel, DuplicatePointsRejected) { EXPECT_THROW(jordan_model(diag({0.2}), {0.2, 0.2}), Error); }

TEST(Triangulate, BlockDiagonalInput) {
    BlaschkeProduct b1({0.1, cplx(0, 0.4)}), b2({-0.5});
    CMat t = CMat::Zero(3, 3);
    t.topLeftCorner(2, 2) = diag({0.1, cplx(0, 0.4)});
    t(2, 2) = -0.5;
    TriangulationResult r = triangulate(t, {b1, b2});
    EXPECT_EQ(r.sizes, (std::vector<int>{2, 1}));
    for (double v : r.residuals) EXPECT_LE(v, 1e-8);
}

TEST(Triangulate, CompressedShiftOfProduct) {
    std::mt19937_64 rng(109);
    for (int it = 0; it < 10; ++it) {
        auto pts = fixture::separated_points(rng, 7, 0.8, 0.3);
        BlaschkeProduct b1(std::vector<cplx>(pts.begin(), pts.begin() + 4), 1.0, true);
        BlaschkeProduct b2(std::vector<cplx>(pts.begin() + 4, pts.end()), 1.0, true);
        CMat t = compressed_shift_matrix(b1 * b2);
        TriangulationResult r = triangulate(t, {b1, b2});
        EXPECT_EQ(r.sizes, (std::vector<int>{4, 3}));
        for (double v : r.residuals) EXPECT_LE(v, 1e-8);
        EXPECT_LE(r.reassembly_error, 1e-10);
        EXPECT_LE((r.u.adjoint() * r.u - CMat::Identity(7, 7)).norm(), 1e-10);
    }
}

TEST(Triangulate, FullAnnihilatorFirstLeavesEmptyBlock) {
    BlaschkeProduct b({0.2, -0.3});
    TriangulationResult r = triangulate(diag({0.2, -0.3}), {b, BlaschkeProduct({0.5})});
    EXPECT_EQ(r.sizes, (std::vector<int>{2, 0}));
}

TEST(Triangulate, AnnihilationFailure) {
    try {
        triangulate(diag({0.2, 0.6}), {BlaschkeProduct({0.2})});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), "annihilation-failure");
    }
}

TEST(TakahashiLift, ZeroCouplingGivesZero) {
    CMat t1 = diag({0.5}), t2 = diag({0.25}), y2 = CMat::Identity(1, 1);
    LiftResult r = takahashi_lift(t1, CMat::Zero(1, 1), t2, y2, t2);
    EXPECT_EQ(r.z.norm(), 0.0);
}

TEST(TakahashiLift, HandComputedScalar) {
    // Z (1/4) - (1/2) Z = 1 gives Z = -4
    CMat t1 = diag({0.5}), t2 = diag({0.25}), a = CMat::Ones(1, 1), y2 = CMat::Identity(1, 1);
    LiftResult r = takahashi_lift(t1, a, t2, y2, t2);
    EXPECT_NEAR(std::abs(r.z(0, 0) + 4.0), 0.0, 1e-10);
}

TEST(TakahashiLift, DisjointSpectraAgainstDenseSolve) {
    std::mt19937_64 rng(113);
    CMat t1 = diag({0.1, cplx(0.2, 0.3)});
    CMat s = compressed_shift_matrix(BlaschkeProduct({-0.5, cplx(0, -0.6), 0.7}));
    CMat y2 = fixture::random_invertible(rng, 3);
    CMat t2 = y2 * s * y2.inverse();
    CMat a(2, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = complex_normal(rng);
    LiftResult r = takahashi_lift(t1, a, t2, y2, s);
    EXPECT_LE(r.residual, 1e-10);
    CMat l = linalg::kron(s.transpose(), CMat::Identity(2, 2)) - linalg::kron(CMat::Identity(3, 3), t1);
    CMat rhs = a * y2;
    CVec z = l.partialPivLu().solve(Eigen::Map<const CVec>(rhs.data(), 6));
    EXPECT_LE((Eigen::Map<const CVec>(r.z.data(), 6) - z).norm(), 1e-10);
}

TEST(TakahashiLift, NonIntertwiningRejected) {
    CMat t = diag({0.5});
    EXPECT_THROW(takahashi_lift(t, CMat::Ones(1, 1), t, CMat::Identity(1, 1), diag({0.25})), Error);
}

TEST(Pipeline, CompressedShiftOfCarlesonProduct) {
    std::mt19937_64 rng(127);
    BlaschkeProduct b(fixture::separated_points(rng, 8, 0.8, 0.4), 1.0, true);
    CMat t = compressed_shift_matrix(b);
    FiniteDefectResult r = similar_to_finite_defect(t, {b});
    EXPECT_TRUE(r.cert.accepted);
    EXPECT_LE(r.cert.residual, 1e-6);
    EXPECT_LE(linalg::op_norm(r.r), 1.0 + 1e-8);
    EXPECT_EQ(r.defects.d_t, 1);
    EXPECT_EQ(r.defects.d_t_star, 1);
}

TEST(Pipeline, DiagonalReducesToJordanModel) {
    std::vector<cplx> lam{0.1, cplx(-0.4, 0.3)};
    FiniteDefectResult r = similar_to_finite_defect(diag({lam[0], lam[1], lam[1]}), {BlaschkeProduct(lam, 1.0, true)});
    EXPECT_EQ(r.tri.sizes, std::vector<int>{3});
    EXPECT_EQ(r.blocks.size(), 1u);
    EXPECT_EQ(r.blocks[0].m, 2);
    EXPECT_TRUE(r.cert.accepted);
}

TEST(Pipeline, CoupledTwoBlockInstances) {
    std::mt19937_64 rng(131);
    for (int it = 0; it < 5; ++it) {
        auto inst = fixture::coupled_instance(rng);
        FiniteDefectResult r = similar_to_finite_defect(inst.t, inst.factors);
        EXPECT_TRUE(r.cert.accepted);
        EXPECT_LE(linalg::op_norm(r.r), 1.0 + 1e-8);
        EXPECT_LE(r.defects.d_t_star, r.r.rows());
    }
}
