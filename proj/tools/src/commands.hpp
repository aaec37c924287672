#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "io.hpp"

namespace msl::cli {

struct RunConfig {
    int grid = 4096;
    int trunc = 128;
    std::optional<double> tol; // overrides every check tolerance when set
    std::uint64_t seed = 0;
    std::string out;
    bool timing = false;
};

struct Inputs {
    std::string zeros, points, levels, column, matrix, factors, t1, t2, blocks, pair, x, input, csv;
    double a1 = 1.0;
    double a2 = 1.0;
    int depth = 20;
};

class Report {
public:
    explicit Report(const RunConfig &cfg) : cfg_(cfg) {}
    json results = json::object();
    // Records value <= tolerance (or >= for lower bounds); --tol replaces the default tolerance.
    bool check_at_most(const std::string &name, double value, double default_tol);
    bool check_at_least(const std::string &name, double value, double bound, double slack);
    void check_flag(const std::string &name, bool ok, const std::string &detail);
    const json &checks() const { return checks_; }
    bool passed() const { return passed_; }

private:
    const RunConfig &cfg_;
    json checks_ = json::array();
    bool passed_ = true;
};

using Command = void (*)(const RunConfig &, const Inputs &, Report &);

void blaschke_carleson(const RunConfig &, const Inputs &, Report &);
void blaschke_eval(const RunConfig &, const Inputs &, Report &);
void outer_cmd(const RunConfig &, const Inputs &, Report &);
void psi_build(const RunConfig &, const Inputs &, Report &);
void model_shift(const RunConfig &, const Inputs &, Report &);
void theta_example(const RunConfig &, const Inputs &, Report &);
void theta_diag(const RunConfig &, const Inputs &, Report &);
void op_apply(const RunConfig &, const Inputs &, Report &);
void op_defects(const RunConfig &, const Inputs &, Report &);
void op_multiplicity(const RunConfig &, const Inputs &, Report &);
void op_triangulate(const RunConfig &, const Inputs &, Report &);
void op_jordan_model(const RunConfig &, const Inputs &, Report &);
void op_similar_fd(const RunConfig &, const Inputs &, Report &);
void decompose_build(const RunConfig &, const Inputs &, Report &);
void decompose_vector_cmd(const RunConfig &, const Inputs &, Report &);
void decompose_assemble(const RunConfig &, const Inputs &, Report &);
void decompose_c0(const RunConfig &, const Inputs &, Report &);
void demo_unicellular_cmd(const RunConfig &, const Inputs &, Report &);

} // namespace msl::cli
