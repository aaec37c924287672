// Acceptance suite: one line per criterion, non-zero exit when any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "msl/cli.hpp"
#include "msl/unicellular.hpp"

using namespace msl;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Lowest running infimum of the corona scan over Blaschke examples; recorded from a first
// run of this suite with the same seeds and pinned here.
constexpr double kBlaschkeFloor = 0.84318816978267419;

double blaschke_scan_floor() {
    auto rng = make_rng(0, 10);
    std::uniform_int_distribution<int> deg(1, 3);
    double floor = 1e300;
    for (int i = 0; i < 20; ++i) {
        const DiscFunction v1 = DiscFunction::blaschke(fixture::random_blaschke(rng, deg(rng), 0.9));
        const DiscFunction v2 = DiscFunction::blaschke(fixture::random_blaschke(rng, deg(rng), 0.9));
        floor = std::min(floor, corona_infimum_scan(example_theta(v1, v2), corona_path(20)).running_inf.back());
    }
    return floor;
}

Outcome inner_certification() {
    auto rng = make_rng(0, 1);
    std::uniform_int_distribution<int> deg(1, 4);
    const BoundaryGrid grid(4096);
    double iso = 0.0, det = 0.0;
    for (int it = 0; it < 50; ++it) {
        const BlaschkeProduct b1 = fixture::random_blaschke(rng, deg(rng)), b2 = fixture::random_blaschke(rng, deg(rng));
        const DiscFunction t1 = DiscFunction::blaschke(b1), t2 = DiscFunction::blaschke(b2);
        const MatrixInnerFunction theta = example_theta(t1, t2);
        iso = std::max(iso, certify_isometry(theta, grid).deviation);
        const auto ts = theta.sample(grid);
        const CVec p = (t1 * t2).sample(grid);
        for (int j = 0; j < grid.size(); ++j)
            det = std::max(det, std::abs(ts[0](j) * ts[3](j) - ts[1](j) * ts[2](j) + p(j)));
    }
    return {iso <= 1e-6 && det <= 1e-8, "isometry " + fmt(iso) + ", det " + fmt(det)};
}

ArcSet random_set(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> count(1, 3), den(1, 64);
    std::vector<Arc> arcs;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
        const int d = den(rng);
        std::uniform_int_distribution<int> num(0, d - 1), len(1, d);
        Rational s(num(rng), d);
        Rational e = s + Rational(len(rng), d) / 2;
        if (e > 1) e -= 1;
        if (e == s) e = s + Rational(1, 128);
        arcs.push_back({s, e});
    }
    return ArcSet::from_arcs(arcs);
}

Outcome refinement_exactness() {
    auto rng = make_rng(0, 2);
    std::uniform_int_distribution<int> count(1, 5);
    int bad = 0;
    for (int it = 0; it < 1000; ++it) {
        std::vector<ArcSet> tau;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) tau.push_back(random_set(rng));
        const auto sigma = refine_disjoint(tau);
        bool ok = sigma.size() == tau.size();
        ArcSet ut, us;
        for (int i = 0; ok && i < n; ++i) {
            ok = sigma[i].subset_of(tau[i]) && sigma[i].measure() > 0;
            for (int j = i + 1; ok && j < n; ++j) ok = sigma[i].intersect(sigma[j]).is_empty();
            ut = ut.unite(tau[i]);
            us = us.unite(sigma[i]);
        }
        ok = ok && us == ut;
        bad += !ok;
    }
    return {bad == 0, std::to_string(1000 - bad) + "/1000 instances exact"};
}

std::vector<PsiMatrix> &built_psis() {
    static std::vector<PsiMatrix> v;
    return v;
}

Outcome kappa_certificates() {
    auto rng = make_rng(0, 3);
    const auto interior = halton_disc(500);
    double worst_interior = 1e300, worst_row = 1e300;
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + it % 2;
        const ColumnData col = make_column(fixture::random_column(rng, n), BoundaryGrid(4096));
        PsiMatrix psi = build_psi(col);
        const KappaReport rep = verify_kappa_bounds(psi, interior, 1e-6);
        const double a = psi.params.a, b = psi.params.b;
        double fact = 1.0;
        for (int k = 2; k <= n; ++k) fact *= k;
        worst_interior = std::min(worst_interior, rep.interior_min - (std::pow(a, n - 1) - fact * b - 1e-6));
        for (double r : rep.row_min) worst_row = std::min(worst_row, r - (psi.params.delta_min - a - (n - 2) * b - 1e-6));
        built_psis().push_back(std::move(psi));
    }
    return {worst_interior >= 0.0 && worst_row >= 0.0,
            "interior margin " + fmt(worst_interior) + ", row margin " + fmt(worst_row)};
}

Outcome psi_identity() {
    if (built_psis().empty()) kappa_certificates();
    const auto pair = fixture::worked_pair(4096);
    const auto nc = normalize_column({pair.phi.at(0, 0), pair.phi.at(0, 1)}, pair.grid);
    built_psis().push_back(build_psi(make_column(nc.reduced, pair.grid, 1e-9)));
    double worst = 0.0;
    for (const auto &p : built_psis()) worst = std::max(worst, p.identity_residual);
    return {worst <= 1e-5, std::to_string(built_psis().size()) + " matrices, sup " + fmt(worst)};
}

Outcome model_space_oracle() {
    auto rng = make_rng(0, 5);
    const BoundaryGrid grid(4096);
    double single = 0.0;
    for (int it = 0; it < 20; ++it) {
        const cplx l = fixture::random_disc_point(rng, 0.9);
        cplx q = 0.0;
        for (int j = 0; j < grid.size(); ++j) {
            const cplx z = grid.point(j);
            const double e = (1.0 - std::norm(l)) / std::norm(1.0 - std::conj(l) * z);
            q += z * e;
        }
        q /= static_cast<double>(grid.size());
        single = std::max(single, std::abs(compressed_shift_matrix(BlaschkeProduct({l}))(0, 0) - q));
    }
    std::uniform_int_distribution<int> deg(1, 10);
    double ann = 0.0;
    for (int it = 0; it < 50; ++it) {
        const BlaschkeProduct b(fixture::separated_points(rng, deg(rng), 0.9, 0.05), 1.0, true);
        ann = std::max(ann, linalg::op_norm(apply_blaschke(compressed_shift_matrix(b), b)));
    }
    return {single <= 1e-10 && ann <= 1e-8, "single zero " + fmt(single) + ", annihilation " + fmt(ann)};
}

Outcome jordan_recovery() {
    auto rng = make_rng(0, 6);
    std::uniform_int_distribution<int> npts(1, 6), mult(1, 3);
    int bad = 0;
    double worst_res = 0.0, worst_sigma = 1.0;
    for (int it = 0; it < 100; ++it) {
        const auto lam = fixture::separated_points(rng, npts(rng), 0.8, 0.3);
        std::vector<int> k;
        std::vector<cplx> diag;
        for (cplx l : lam) {
            int m = mult(rng);
            if (static_cast<int>(diag.size()) + m > 12) m = 1;
            k.push_back(m);
            for (int i = 0; i < m; ++i) diag.push_back(l);
        }
        const int d = static_cast<int>(diag.size());
        CMat dm = CMat::Zero(d, d);
        for (int i = 0; i < d; ++i) dm(i, i) = diag[i];
        const CMat x = fixture::random_invertible(rng, d);
        const JordanModel jm = jordan_model(x * dm * x.inverse(), lam);
        const int mmax = *std::max_element(k.begin(), k.end());
        bool ok = jm.m == mmax && jm.cert.residual <= 1e-8 && jm.cert.sigma_min >= 1e-8;
        for (int n = 1; ok && n <= mmax; ++n) {
            int expected = 0;
            for (int kk : k) expected += kk >= n;
            ok = jm.blocks[n - 1].degree() == expected;
        }
        worst_res = std::max(worst_res, jm.cert.residual);
        worst_sigma = std::min(worst_sigma, jm.cert.sigma_min);
        bad += !ok;
    }
    return {bad == 0, std::to_string(100 - bad) + "/100 recovered, residual " + fmt(worst_res) + ", sigma_min " +
                          fmt(worst_sigma)};
}

Outcome triangulation() {
    auto rng = make_rng(0, 7);
    std::uniform_int_distribution<int> deg(1, 5);
    int bad = 0;
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
        const int d1 = deg(rng), d2 = deg(rng);
        const auto pts = fixture::separated_points(rng, d1 + d2, 0.8, 0.3);
        const BlaschkeProduct b1(std::vector<cplx>(pts.begin(), pts.begin() + d1), 1.0, true);
        const BlaschkeProduct b2(std::vector<cplx>(pts.begin() + d1, pts.end()), 1.0, true);
        const TriangulationResult r = triangulate(compressed_shift_matrix(b1 * b2), {b1, b2});
        bool ok = r.sizes == std::vector<int>{d1, d2};
        for (double v : r.residuals) {
            ok = ok && v <= 1e-8;
            worst = std::max(worst, v);
        }
        bad += !ok;
    }
    return {bad == 0, std::to_string(50 - bad) + "/50 instances, max block residual " + fmt(worst)};
}

Outcome pipeline() {
    auto rng = make_rng(0, 8);
    int bad = 0;
    double worst_res = 0.0, worst_norm = 0.0;
    for (int it = 0; it < 20; ++it) {
        const auto inst = fixture::coupled_instance(rng);
        try {
            const FiniteDefectResult r = similar_to_finite_defect(inst.t, inst.factors);
            const double nr = linalg::op_norm(r.r);
            const bool finite = r.defects.d_t <= r.r.rows() && r.defects.d_t_star <= r.r.rows();
            const bool ok = nr <= 1.0 + 1e-8 && r.cert.accepted && r.cert.residual <= 1e-6 && finite;
            worst_res = std::max(worst_res, r.cert.residual);
            worst_norm = std::max(worst_norm, nr);
            bad += !ok;
        } catch (const Error &e) {
            ++bad;
        }
    }
    return {bad == 0, std::to_string(20 - bad) + "/20 certified, residual " + fmt(worst_res) + ", max ||R|| " +
                          fmt(worst_norm)};
}

Outcome worked_instance() {
    const InnerPair pair = fixture::worked_pair(4096);
    CVec x = CVec::Zero(2);
    x(0) = 1.0;
    const ShiftSubspaces s128 = build_shift_subspaces(pair, 128, 0, 200);
    double lb = 1e300;
    for (const auto &sub : s128.subspaces) lb = std::min(lb, sub.lower_bound);
    const double r128 = decompose_vector(embed_coefficients(s128, x, 1), s128).residual;
    const ShiftSubspaces s256 = build_shift_subspaces(pair, 256, 0, 200);
    const double r256 = decompose_vector(embed_coefficients(s256, x, 1), s256).residual;
    const bool ok = lb >= 1.0 - 1e-4 && r128 <= 1e-6 && r256 < r128;
    return {ok, "lower bound " + fmt(lb) + ", residual K=128 " + fmt(r128) + " (needs <= 1e-06), K=256 " + fmt(r256)};
}

Outcome unicellular() {
    const UnicellularReport demo = demo_unicellular(1.0, 1.0, 20);
    const bool decays = demo.scan.decays_below_threshold;
    const double floor = blaschke_scan_floor();
    const bool above = floor > 0.0 && floor >= kBlaschkeFloor * (1.0 - 1e-9);

    auto rng = make_rng(0, 12);
    int agree = 0, total = 0;
    for (int it = 0; it < 10; ++it) {
        const auto pts = fixture::separated_points(rng, 4, 0.7, 0.4);
        const BlaschkeProduct b1({pts[0], pts[1]}), b2({pts[2], pts[3]});
        agree += quasisimilarity_criterion(diagonal_theta({b1, b2}), b1 * b2).verdict;
        ++total;
        const BlaschkeProduct c1({pts[0], pts[1]}), c2({pts[0], pts[3]});
        agree += !quasisimilarity_criterion(diagonal_theta({c1, c2}), c1 * c2).verdict;
        ++total;
    }
    return {decays && above && agree == total,
            "scan at l=20 " + fmt(demo.scan.running_inf.back()) + ", Blaschke floor " + fmt(floor) + " (pinned " +
                fmt(kBlaschkeFloor) + "), quasisimilarity " + std::to_string(agree) + "/" + std::to_string(total)};
}

Outcome carleson() {
    auto rng = make_rng(0, 13);
    std::uniform_int_distribution<int> count(1, 12);
    int exact = 0, monotone = 0;
    for (int it = 0; it < 100; ++it) {
        std::vector<cplx> z;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) z.push_back(fixture::random_disc_point(rng, 0.95));
        const double c = carleson_constant(z);
        exact += c == fixture::brute_carleson(z);
        bool mono = true;
        for (int i = 0; i < n && n > 1; ++i) {
            std::vector<cplx> w = z;
            w.erase(w.begin() + i);
            mono = mono && carleson_constant(w) >= c;
        }
        monotone += mono;
    }
    return {exact == 100 && monotone == 100,
            std::to_string(exact) + "/100 exact, " + std::to_string(monotone) + "/100 monotone"};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "msl_acceptance";
    fs::create_directories(dir);
    const fs::path m = dir / "t.json", f = dir / "f.json";
    std::ofstream(m) << R"({"matrix": [[0.5, 0.1, 0], [0, [0, 0.5], 0.1], [0, 0, [-0.3, -0.3]]]})";
    std::ofstream(f) << R"({"factors": [[0.5, [0, 0.5]], [[-0.3, -0.3]]]})";
    const std::vector<std::vector<std::string>> commands{
        {"decompose", "build", "--seed", "0"},
        {"demo", "unicellular", "--a1", "1", "--a2", "1", "--seed", "0"},
        {"op", "similar-fd", "--matrix", m.string(), "--factors", f.string(), "--seed", "0"}};
    int same = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string reports[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = dir / ("r" + std::to_string(i) + "_" + std::to_string(rep) + ".json");
            auto args = commands[i];
            args.insert(args.end(), {"--out", out.string()});
            std::ostringstream o, e;
            cli::run(args, o, e);
            std::ifstream in(out, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            reports[rep] = ss.str();
        }
        same += !reports[0].empty() && reports[0] == reports[1];
    }
    return {same == static_cast<int>(commands.size()),
            std::to_string(same) + "/" + std::to_string(commands.size()) + " reports byte-identical"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"inner certification", inner_certification},
        {"disjoint refinement", refinement_exactness},
        {"kappa certificates", kappa_certificates},
        {"psi identity", psi_identity},
        {"model-space oracle", model_space_oracle},
        {"jordan model", jordan_recovery},
        {"triangulation", triangulation},
        {"finite-defect pipeline", pipeline},
        {"worked decomposition", worked_instance},
        {"unicellular demo", unicellular},
        {"carleson constant", carleson},
        {"determinism", determinism}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
                  << o.detail << ", " << fmt(sec) << " s)" << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
