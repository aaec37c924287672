#include "commands.hpp"

#include <fstream>

#include "msl/unicellular.hpp"

namespace msl::cli {

bool Report::check_at_most(const std::string &name, double value, double default_tol) {
    const double tol = cfg_.tol.value_or(default_tol);
    const bool ok = value <= tol;
    checks_.push_back({{"name", name}, {"value", value}, {"relation", "<="}, {"tolerance", tol}, {"passed", ok}});
    passed_ = passed_ && ok;
    return ok;
}

bool Report::check_at_least(const std::string &name, double value, double bound, double slack) {
    const double tol = cfg_.tol.value_or(slack);
    const bool ok = value >= bound - tol;
    checks_.push_back({{"name", name},
                       {"value", value},
                       {"relation", ">="},
                       {"bound", bound},
                       {"tolerance", tol},
                       {"passed", ok}});
    passed_ = passed_ && ok;
    return ok;
}

void Report::check_flag(const std::string &name, bool ok, const std::string &detail) {
    checks_.push_back({{"name", name}, {"detail", detail}, {"passed", ok}});
    passed_ = passed_ && ok;
}

namespace {

const std::string &need(const std::string &v, const char *flag) {
    if (v.empty()) throw Error(Errc::input, "missing-option", std::string("this command needs ") + flag);
    return v;
}

json certificate_json(const SimilarityCertificate &c) {
    return {{"residual", c.residual}, {"sigma_min", c.sigma_min}, {"condition", c.condition}, {"accepted", c.accepted}};
}

json defects_json(const DefectReport &d) {
    return {{"d_T", d.d_t}, {"d_T_star", d.d_t_star}, {"cut", d.cut},
            {"singular_values_T", from_real(d.sv_t)}, {"singular_values_T_star", from_real(d.sv_t_star)}};
}

json isometry_json(const IsometryCertificate &c) {
    return {{"deviation", c.deviation}, {"excluded_cells", c.excluded_cells}, {"checked_points", c.checked_points}};
}

json strings(const std::vector<ArcSet> &sets) {
    json a = json::array();
    for (const ArcSet &s : sets) a.push_back(s.to_string());
    return a;
}

void check_similarity(Report &rep, const std::string &name, const SimilarityCertificate &c, double residual_tol) {
    rep.check_at_most(name + ".residual", c.residual, residual_tol);
    rep.check_at_least(name + ".sigma_min", c.sigma_min, 1e-8, 0.0);
}

InnerPair load_pair(const RunConfig &cfg, const Inputs &in) {
    BoundaryGrid grid(cfg.grid);
    if (in.pair.empty()) {
        const double r = 1.0 / std::sqrt(2.0);
        MatrixInnerFunction theta(2, 1, {r * DiscFunction::chi(), DiscFunction::constant(r)});
        MatrixInnerFunction phi(1, 2, {DiscFunction::constant(r), cplx(-r) * DiscFunction::chi()});
        return make_inner_pair(theta, phi, grid);
    }
    const json j = read_json_file(in.pair);
    return make_inner_pair(to_matrix_inner(j.at("theta")), to_matrix_inner(j.at("phi")), grid);
}

json subspaces_json(const ShiftSubspaces &s) {
    json a = json::array();
    for (const auto &sub : s.subspaces)
        a.push_back({{"index", sub.index},
                     {"lower_bound", sub.lower_bound},
                     {"sigma_min", sub.sigma_min},
                     {"intertwining", sub.intertwining},
                     {"intertwining_window", sub.intertwining_window},
                     {"structure_residual", sub.structure_residual}});
    return a;
}

} // namespace

void blaschke_carleson(const RunConfig &, const Inputs &in, Report &rep) {
    const auto zeros = to_points(read_json_file(need(in.zeros, "--zeros")), "zeros");
    rep.results["degree"] = zeros.size();
    rep.results["constant"] = carleson_constant(zeros);
}

void blaschke_eval(const RunConfig &, const Inputs &in, Report &rep) {
    const BlaschkeProduct b = to_blaschke(read_json_file(need(in.zeros, "--zeros")));
    const auto pts = to_points(read_json_file(need(in.points, "--points")), "points");
    json values = json::array(), moduli = json::array();
    for (cplx z : pts) {
        const cplx v = b(z);
        values.push_back(from_complex(v));
        moduli.push_back(std::abs(v));
    }
    rep.results["values"] = values;
    rep.results["moduli"] = moduli;
}

void outer_cmd(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const json j = read_json_file(need(in.levels, "--levels"));
    BoundaryGrid grid(cfg.grid);
    std::vector<std::pair<ArcSet, double>> levels;
    for (const json &l : j.value("levels", json::array())) levels.emplace_back(to_arcset(l.at("arcs")), l.at("level").get<double>());
    const RVec w = modulus_from_levels(grid, j.value("base", 1.0), levels);
    const DiscFunction f = outer_from_log_modulus(grid, w);
    const CVec s = f.sample(grid);
    double gap = 0.0, mean_log = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        gap = std::max(gap, std::abs(std::abs(s(k)) - w(k)));
        mean_log += std::log(std::max(w(k), OuterFunction::kClamp));
    }
    mean_log /= grid.size();
    rep.results["value_at_zero"] = from_complex(f(0.0));
    rep.results["geometric_mean"] = std::exp(mean_log);
    rep.results["clamped_points"] = f.outer_function()->clamped_points();
    json taylor = json::array();
    const CVec t = taylor_coefficients(f, 8, grid);
    for (Eigen::Index k = 0; k < t.size(); ++k) taylor.push_back(from_complex(t(k)));
    rep.results["taylor"] = taylor;
    rep.check_at_most("boundary_modulus", gap, 1e-10);
    rep.check_at_most("value_at_zero_vs_geometric_mean", std::abs(std::abs(f(0.0)) - std::exp(mean_log)), 1e-10);
}

void psi_build(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const json j = read_json_file(need(in.column, "--column"));
    const json &entries = j.is_object() ? j.at("entries") : j;
    std::vector<DiscFunction> phi;
    for (const json &e : entries) phi.push_back(to_disc_function(e));
    const ColumnData col = make_column(phi, BoundaryGrid(cfg.grid));
    const PsiMatrix psi = build_psi(col);
    const ParameterCheck pc = check_parameters(col, psi.params);
    const KappaReport kr = verify_kappa_bounds(psi, halton_disc(500), cfg.tol.value_or(1e-6));
    rep.results["n"] = psi.n;
    rep.results["parameters"] = {{"delta", psi.params.delta}, {"delta_min", psi.params.delta_min},
                                 {"a", psi.params.a}, {"b", psi.params.b}};
    rep.results["tau"] = strings(psi.tau);
    rep.results["sigma"] = strings(psi.sigma);
    rep.results["near_threshold_cells"] = psi.near_threshold_cells;
    rep.results["det_lower_bound"] = psi.det_lower_bound;
    rep.results["kappa"] = {{"interior_min", kr.interior_min}, {"interior_bound", kr.interior_bound},
                            {"row_min", kr.row_min}, {"row_bound", kr.row_bound}};
    rep.check_flag("parameters", pc.all(), "0 < delta_n < sup, energy, kappa margin, row margin");
    rep.check_at_least("kappa.interior", kr.interior_min, kr.interior_bound, 1e-6);
    double row_min = kr.row_min.empty() ? 0.0 : *std::min_element(kr.row_min.begin(), kr.row_min.end());
    rep.check_at_least("kappa.row_sum", row_min, kr.row_bound, 1e-6);
    rep.check_at_most("psi.identity", psi.identity_residual, 1e-5);
}

void model_shift(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const BlaschkeProduct b = to_blaschke(read_json_file(need(in.zeros, "--zeros")));
    const FiniteModelSpace space = model_space(b, BoundaryGrid(cfg.grid));
    const CompressedShiftOperator op = compressed_shift(space);
    rep.results["dim"] = space.dim;
    rep.results["matrix"] = from_matrix(op.matrix);
    rep.results["norm"] = op.norm;
    rep.results["warnings"] = space.warnings;
    rep.check_at_most("gram_residual", space.gram_residual, 1e-8);
    rep.check_at_most("annihilation", op.annihilation, 1e-8);
}

void theta_example(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const DiscFunction t1 = to_disc_function(read_json_file(need(in.t1, "--t1")));
    const DiscFunction t2 = to_disc_function(read_json_file(need(in.t2, "--t2")));
    const BoundaryGrid grid(cfg.grid);
    const MatrixInnerFunction theta = example_theta(t1, t2);
    const IsometryCertificate cert = certify_isometry(theta, grid, 1);
    const auto ts = theta.sample(grid);
    const CVec prod = (t1 * t2).sample(grid);
    double det_res = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const cplx det = ts[0](k) * ts[3](k) - ts[1](k) * ts[2](k);
        const double r = std::abs(det + prod(k));
        if (std::isfinite(r)) det_res = std::max(det_res, r);
    }
    rep.results["theta_at_zero"] = from_matrix(theta(0.0));
    rep.results["isometry"] = isometry_json(cert);
    rep.check_at_most("isometry", cert.deviation, 1e-6);
    rep.check_at_most("determinant", det_res, 1e-8);
}

void theta_diag(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const auto blocks = to_blaschke_list(read_json_file(need(in.blocks, "--blocks")), "blocks");
    const MatrixInnerFunction theta = diagonal_theta(blocks);
    const IsometryCertificate cert = certify_isometry(theta, BoundaryGrid(cfg.grid), 1);
    rep.results["shift"] = from_matrix(diagonal_theta_shift(blocks));
    rep.results["isometry"] = isometry_json(cert);
    rep.check_at_most("isometry", cert.deviation, 1e-6);
}

void op_apply(const RunConfig &, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    const BlaschkeProduct b = to_blaschke(read_json_file(need(in.zeros, "--zeros")));
    const CMat bt = apply_blaschke(t, b);
    rep.results["matrix"] = from_matrix(bt);
    rep.results["norm"] = linalg::op_norm(bt);
}

void op_defects(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    rep.results = defects_json(defects(t, cfg.tol.value_or(1e-8)));
}

void op_multiplicity(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    const MultiplicityReport m = multiplicity(t, cfg.tol.value_or(1e-8));
    rep.results["mu"] = m.mu;
    rep.results["eigenvalues"] = from_points(m.eigenvalues);
    rep.results["weyr"] = m.weyr;
    rep.results["clustered_warning"] = m.clustered_warning;
}

void op_triangulate(const RunConfig &, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    const auto factors = to_blaschke_list(read_json_file(need(in.factors, "--factors")), "factors");
    const TriangulationResult r = triangulate(t, factors);
    rep.results["sizes"] = r.sizes;
    rep.results["t_tri"] = from_matrix(r.t_tri);
    rep.results["zeroed_block_norm"] = r.zeroed_block_norm;
    for (std::size_t i = 0; i < r.residuals.size(); ++i)
        rep.check_at_most("block_annihilation." + std::to_string(i + 1), r.residuals[i], 1e-8);
    rep.check_at_most("reassembly", r.reassembly_error, 1e-10);
}

void op_jordan_model(const RunConfig &, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    const auto lambdas = to_points(read_json_file(need(in.zeros, "--zeros")), "zeros");
    const JordanModel jm = jordan_model(t, lambdas);
    json degrees = json::array();
    for (const auto &b : jm.blocks) degrees.push_back(b.degree());
    rep.results["m"] = jm.m;
    rep.results["lambdas"] = from_points(jm.lambdas);
    rep.results["k"] = jm.k;
    rep.results["block_degrees"] = degrees;
    rep.results["carleson"] = jm.carleson;
    rep.results["certificate"] = certificate_json(jm.cert);
    rep.check_at_most("annihilation", jm.annihilation, 1e-6);
    check_similarity(rep, "similarity", jm.cert, 1e-8);
}

void op_similar_fd(const RunConfig &, const Inputs &in, Report &rep) {
    const CMat t = to_matrix(read_json_file(need(in.matrix, "--matrix")));
    const auto factors = to_blaschke_list(read_json_file(need(in.factors, "--factors")), "factors");
    const FiniteDefectResult r = similar_to_finite_defect(t, factors);
    rep.results["r"] = from_matrix(r.r);
    rep.results["defects"] = defects_json(r.defects);
    rep.results["certificate"] = certificate_json(r.cert);
    rep.results["model_dim"] = r.model_dim;
    rep.results["kernel_dim"] = r.kernel_dim;
    rep.results["block_sizes"] = r.tri.sizes;
    rep.results["lift_residuals"] = r.lift_residuals;
    rep.results["warnings"] = r.warnings;
    rep.check_at_most("contraction", linalg::op_norm(r.r) - 1.0, 1e-8);
    rep.check_at_most("intertwining", r.intertwining_residual, 1e-8);
    check_similarity(rep, "similarity", r.cert, 1e-6);
}

void decompose_build(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const ShiftSubspaces s = build_shift_subspaces(load_pair(cfg, in), cfg.trunc, cfg.seed);
    rep.results["k"] = s.k;
    rep.results["det_min"] = s.det_min;
    rep.results["tests"] = s.test_count;
    rep.results["subspaces"] = subspaces_json(s);
    for (const auto &sub : s.subspaces) {
        const std::string p = "Y" + std::to_string(sub.index);
        rep.check_at_least(p + ".lower_bound", sub.lower_bound, 1.0, 1e-4);
        rep.check_at_most(p + ".structure", sub.structure_residual, 1e-8);
        rep.check_at_most(p + ".intertwining_window", sub.intertwining_window, 1e-6);
    }
}

void decompose_vector_cmd(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const json j = read_json_file(need(in.x, "--x"));
    const int degree = j.at("degree").get<int>();
    const CVec x = to_cvec(j.at("coefficients"));
    const ShiftSubspaces s = build_shift_subspaces(load_pair(cfg, in), cfg.trunc, cfg.seed);
    const DecompositionReport r = decompose_vector(embed_coefficients(s, x, degree), s);
    rep.results["k"] = r.k;
    rep.results["route"] = r.route;
    rep.results["component_norms"] = r.component_norms;
    rep.results["constructive_residual"] = r.constructive_residual;
    rep.results["least_squares_residual"] = r.least_squares_residual;
    rep.check_at_most("residual", r.residual, 1e-6);
}

void decompose_assemble(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const ShiftSubspaces s = build_shift_subspaces(load_pair(cfg, in), cfg.trunc, cfg.seed);
    const TruncatedAssembly ta = assemble_truncated(s);
    rep.results["k"] = s.k;
    rep.results["rank"] = ta.result.rank;
    rep.results["kernel_dim"] = ta.result.kernel_dim;
    rep.results["defects"] = {{"d_R", ta.result.defects.d_t}, {"d_R_star", ta.result.defects.d_t_star}};
    rep.results["norm_r"] = linalg::op_norm(ta.result.r);
    rep.results["restricted_intertwining"] = ta.restricted_intertwining;
    rep.results["certificate"] = certificate_json(ta.result.cert);
    rep.check_at_most("contraction", linalg::op_norm(ta.result.r) - 1.0, 1e-8);
    check_similarity(rep, "similarity", ta.result.cert, 1e-6);
}

void decompose_c0(const RunConfig &, const Inputs &in, Report &rep) {
    const json j = read_json_file(need(in.input, "--input"));
    const auto varthetas = to_blaschke_list(j, "varthetas");
    std::vector<CMat> ys;
    for (const json &y : j.at("ys")) ys.push_back(to_matrix(y));
    const C0Assembly c = assemble_c0_similarity(varthetas, ys, to_matrix(j.at("t")));
    rep.results["r"] = from_matrix(c.result.r);
    rep.results["m"] = c.m;
    rep.results["kernel_dim"] = c.result.kernel_dim;
    rep.results["defects"] = defects_json(c.result.defects);
    rep.results["certificate"] = certificate_json(c.result.cert);
    rep.check_at_most("annihilation", c.annihilation, 1e-8);
    check_similarity(rep, "similarity", c.result.cert, 1e-6);
}

void demo_unicellular_cmd(const RunConfig &cfg, const Inputs &in, Report &rep) {
    const UnicellularReport r = demo_unicellular(in.a1, in.a2, in.depth, BoundaryGrid(cfg.grid));
    json scan = json::array();
    for (std::size_t i = 0; i < r.scan.path.size(); ++i)
        scan.push_back({{"l", i + 1},
                        {"z", r.scan.path[i].real()},
                        {"value", r.scan.values[i]},
                        {"running_inf", r.scan.running_inf[i]},
                        {"abs_theta11", r.theta11_abs[i]}});
    rep.results["a1"] = r.a1;
    rep.results["a2"] = r.a2;
    rep.results["isometry"] = isometry_json(r.isometry);
    rep.results["det_excluded_cells"] = r.det_excluded_cells;
    rep.results["scan"] = scan;
    rep.results["narrative"] = {
        {"isometry", "Theta* Theta = I on the grid, cells next to zeta = 1 excluded"},
        {"determinant", "det Theta = -alpha_{a1+a2} on the grid off the cells at zeta = 1"},
        {"product_identity", "alpha_{a1} alpha_{a2} = alpha_{a1+a2} at interior points"},
        {"corona_scan", "sum of |adjugate entries| along z_l = 1 - 2^-l; decay below the threshold "
                        "is the sampled evidence that the corona-type infimum vanishes"},
        {"gcd", "the common inner divisor of the adjugate entries is not decided numerically; "
                "|theta_11(z_l)| is attached as evidence only"}};
    rep.check_at_most("isometry", r.isometry.deviation, 1e-6);
    rep.check_at_most("determinant", r.det_residual, 1e-6);
    rep.check_at_most("product_identity", r.product_identity, 1e-12);
    rep.check_at_most("adjugate", r.adjugate_residual, 1e-10);
    rep.check_at_most("corona_scan.running_inf", r.scan.running_inf.back(), r.scan.threshold);

    std::string csv_path = in.csv;
    if (csv_path.empty() && !cfg.out.empty()) {
        csv_path = cfg.out;
        const auto dot = csv_path.rfind('.');
        const auto slash = csv_path.rfind('/');
        if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) csv_path.resize(dot);
        csv_path += ".csv";
    }
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error(Errc::input, "unwritable-output", "cannot write " + csv_path);
        f << corona_csv(r.scan);
    }
}

} // namespace msl::cli
