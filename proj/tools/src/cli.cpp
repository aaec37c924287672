#include "msl/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace msl::cli {

namespace {

int grid_from_env() {
    const char *v = std::getenv("MSL_DEFAULT_GRID");
    if (!v || !*v) return 4096;
    char *end = nullptr;
    const long long g = std::strtoll(v, &end, 10);
    if (*end != '\0' || !BoundaryGrid::valid_size(g))
        throw Error(Errc::input, "bad-config", "MSL_DEFAULT_GRID must be a power of two >= 16");
    return static_cast<int>(g);
}

struct Leaf {
    std::string name;
    Command fn = nullptr;
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    Inputs in;
    Leaf chosen;
    int grid = 0;
    double tol = 0.0;

    CLI::App app{"Model spaces, compressed shifts and similarity certificates", "msl"};
    app.require_subcommand(1);
    app.add_option("--grid", grid, "boundary grid size, power of two >= 16");
    app.add_option("--trunc", cfg.trunc, "truncation degree K >= 8")->check(CLI::Range(8, 1 << 20));
    app.add_option("--tol", tol, "tolerance override for every certified check")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "64-bit seed");
    app.add_option("--out", cfg.out, "report path (stdout when absent)");
    app.add_flag("--timing", cfg.timing, "add wall-clock timing to the report");

    auto leaf = [&](CLI::App *parent, const std::string &name, const std::string &full, Command fn,
                    const std::string &help) {
        CLI::App *c = parent->add_subcommand(name, help);
        c->fallthrough();
        c->callback([&chosen, full, fn] { chosen = {full, fn}; });
        return c;
    };
    auto group = [&](const std::string &name, const std::string &help) {
        CLI::App *g = app.add_subcommand(name, help);
        g->fallthrough();
        g->require_subcommand(1);
        return g;
    };

    CLI::App *blaschke = group("blaschke", "finite Blaschke products");
    leaf(blaschke, "carleson", "blaschke carleson", blaschke_carleson, "interpolation constant")
        ->add_option("--zeros", in.zeros, "JSON zeros")->required();
    CLI::App *beval = leaf(blaschke, "eval", "blaschke eval", blaschke_eval, "evaluate at points");
    beval->add_option("--zeros", in.zeros, "JSON zeros")->required();
    beval->add_option("--points", in.points, "JSON points")->required();

    leaf(&app, "outer", "outer", outer_cmd, "outer function from a piecewise-constant modulus")
        ->add_option("--levels", in.levels, "JSON base level and arc levels")->required();

    CLI::App *psi = group("psi", "unimodular completion of a column");
    leaf(psi, "build", "psi build", psi_build, "build Psi and its certificates")
        ->add_option("--column", in.column, "JSON column of disc functions")->required();

    CLI::App *model = group("model", "scalar model spaces");
    leaf(model, "shift", "model shift", model_shift, "compressed shift of a Blaschke product")
        ->add_option("--zeros", in.zeros, "JSON zeros")->required();

    CLI::App *theta = group("theta", "matrix inner functions");
    CLI::App *tex = leaf(theta, "example", "theta example", theta_example, "2x2 example from two inner functions");
    tex->add_option("--t1", in.t1, "JSON disc function")->required();
    tex->add_option("--t2", in.t2, "JSON disc function")->required();
    leaf(theta, "diag", "theta diag", theta_diag, "diagonal Blaschke matrix")
        ->add_option("--blocks", in.blocks, "JSON list of zero lists")->required();

    CLI::App *op = group("op", "finite-dimensional operators");
    CLI::App *apply = leaf(op, "apply", "op apply", op_apply, "B(T) by functional calculus");
    apply->add_option("--matrix", in.matrix, "JSON matrix")->required();
    apply->add_option("--zeros", in.zeros, "JSON zeros of B")->required();
    leaf(op, "defects", "op defects", op_defects, "defect indices")
        ->add_option("--matrix", in.matrix, "JSON matrix")->required();
    leaf(op, "multiplicity", "op multiplicity", op_multiplicity, "multiplicity and Weyr characteristic")
        ->add_option("--matrix", in.matrix, "JSON matrix")->required();
    CLI::App *tri = leaf(op, "triangulate", "op triangulate", op_triangulate, "block triangular form");
    tri->add_option("--matrix", in.matrix, "JSON matrix")->required();
    tri->add_option("--factors", in.factors, "JSON list of zero lists")->required();
    CLI::App *jm = leaf(op, "jordan-model", "op jordan-model", op_jordan_model, "Jordan model and similarity");
    jm->add_option("--matrix", in.matrix, "JSON matrix")->required();
    jm->add_option("--zeros", in.zeros, "JSON candidate eigenvalues")->required();
    CLI::App *sfd = leaf(op, "similar-fd", "op similar-fd", op_similar_fd, "similarity to a finite-defect contraction");
    sfd->add_option("--matrix", in.matrix, "JSON matrix")->required();
    sfd->add_option("--factors", in.factors, "JSON list of zero lists")->required();

    CLI::App *dec = group("decompose", "shift-type subspaces of a model space");
    leaf(dec, "build", "decompose build", decompose_build, "build Y_n and their certificates")
        ->add_option("--pair", in.pair, "JSON Theta/Phi pair (worked pair when absent)");
    CLI::App *dv = leaf(dec, "vector", "decompose vector", decompose_vector_cmd, "split a vector along Y_n");
    dv->add_option("--pair", in.pair, "JSON Theta/Phi pair (worked pair when absent)");
    dv->add_option("--x", in.x, "JSON degree and channel-major coefficients")->required();
    leaf(dec, "assemble", "decompose assemble", decompose_assemble, "similarity at truncation scale")
        ->add_option("--pair", in.pair, "JSON Theta/Phi pair (worked pair when absent)");
    leaf(dec, "c0", "decompose c0", decompose_c0, "similarity for an annihilated operator")
        ->add_option("--input", in.input, "JSON varthetas, ys and t")->required();

    CLI::App *demo = group("demo", "worked demonstrations");
    CLI::App *uni = leaf(demo, "unicellular", "demo unicellular", demo_unicellular_cmd, "singular inner example");
    uni->add_option("--a1", in.a1, "first exponent")->check(CLI::PositiveNumber);
    uni->add_option("--a2", in.a2, "second exponent")->check(CLI::PositiveNumber);
    uni->add_option("--path-depth", in.depth, "number of path points")->check(CLI::Range(1, 60));
    uni->add_option("--csv", in.csv, "CSV path (next to --out when absent)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        const bool unknown = dynamic_cast<const CLI::ExtrasError *>(&e) || dynamic_cast<const CLI::RequiredError *>(&e);
        err << (unknown ? "unknown-command: " : "bad-arguments: ") << e.what() << "\n";
        return 1;
    }
    for (CLI::App *sub : app.get_subcommands())
        for (CLI::App *s : sub->get_subcommands())
            if (s->count_all() && s->get_help_ptr() && s->get_help_ptr()->count()) {
                out << s->help();
                return 0;
            }
    if (!chosen.fn) {
        err << "unknown-command: no command selected\n";
        return 1;
    }

    try {
        cfg.grid = app.count("--grid") ? grid : grid_from_env();
        if (!BoundaryGrid::valid_size(cfg.grid)) throw Error(Errc::input, "bad-config", "--grid must be a power of two >= 16");
        if (app.count("--tol")) cfg.tol = tol;

        Report rep(cfg);
        const auto t0 = std::chrono::steady_clock::now();
        chosen.fn(cfg, in, rep);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json env;
        env["schema"] = "msl/1";
        env["command"] = chosen.name;
        env["config"] = {{"grid", cfg.grid}, {"trunc", cfg.trunc}, {"seed", cfg.seed},
                         {"tol", cfg.tol ? json(*cfg.tol) : json(nullptr)}};
        env["results"] = rep.results;
        env["checks"] = rep.checks();
        env["verdict"] = rep.passed() ? "pass" : "fail";
        if (cfg.timing) env["timing"] = {{"seconds", seconds}};
        const std::string text = env.dump(2) + "\n";
        if (cfg.out.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) throw Error(Errc::input, "unwritable-output", "cannot write " + cfg.out);
            f << text;
        }
        if (!rep.passed()) {
            err << "certificate-failure: " << chosen.name << " has failing checks\n";
            return 2;
        }
        return 0;
    } catch (const Error &e) {
        err << e.what() << "\n";
        return e.code() == Errc::certificate ? 2 : 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace msl::cli
