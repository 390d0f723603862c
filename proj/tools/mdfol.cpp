// Command-line front end: verification suites over the algebra families,
// orbit charts, the foliation action, and the K-theoretic index, with
// machine-readable JSON/CSV reports.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed,
// 2 usage or validation error.

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdfol/coadjoint.hpp"
#include "mdfol/foliation.hpp"
#include "mdfol/ktheory.hpp"
#include "mdfol/md5.hpp"

using nlohmann::ordered_json;
using namespace mdfol;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string family_text;
    int samples = 1000;
    std::uint64_t seed = 0;
    Tolerances tol;
    std::string out;
    std::string format = "json";
};

void add_sampling_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--samples", o.samples, "number of random samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed (env MDFOL_SEED used when omitted)")
        ->envname("MDFOL_SEED")
        ->capture_default_str();
}

void add_tolerance_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol-rank", o.tol.rank_threshold, "relative singular value cutoff for rank")
        ->capture_default_str();
    cmd->add_option("--tol-quad,--quad-tol", o.tol.quad_abs_tol, "absolute quadrature tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-match", o.tol.match_tol, "orbit matching residual tolerance")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonOpts& o, bool csv_capable) {
    cmd->add_option("--out", o.out, "write the payload to this file instead of stdout");
    if (csv_capable)
        cmd->add_option("--format", o.format, "payload format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
}

ordered_json tolerances_json(const Tolerances& t) {
    return {{"rank_threshold", t.rank_threshold},
            {"quad_abs_tol", t.quad_abs_tol},
            {"match_tol", t.match_tol},
            {"algebra_tol", t.algebra_tol}};
}

ordered_json report_head(const std::string& command, const CommonOpts& o) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["seed"] = o.seed;
    j["tolerances"] = tolerances_json(o.tol);
    return j;
}

// Reports print to stdout; --out duplicates the same bytes to a file.
int emit_report(const ordered_json& report, const CommonOpts& o, bool pass) {
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!o.out.empty() && o.format == "json") {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open output file: " << o.out << "\n";
            return kExitUsage;
        }
        f << text;
    }
    return pass ? kExitPass : kExitMathFailure;
}

int write_csv(const std::string& header, const std::vector<std::string>& rows,
              const CommonOpts& o) {
    std::ostream* sink = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::binary);
        if (!file) {
            std::cerr << "cannot open output file: " << o.out << "\n";
            return kExitUsage;
        }
        sink = &file;
    }
    *sink << header << "\n";
    for (const auto& r : rows) *sink << r << "\n";
    return kExitPass;
}

int run_check_algebra(const CommonOpts& o) {
    const MD5Family fam = parse_family(o.family_text);

    const auto jacobi = jacobi_check(fam, o.samples, o.seed, o.tol);
    const auto svals = singular_values(ad_matrix(fam));
    const bool invertible = svals.back() > 0.0 && numeric_rank(ad_matrix(fam), o.tol) == 4;

    ordered_json j = report_head("check-algebra", o);
    j["family"] = format_family(fam);
    j["checks"] = ordered_json::array();
    j["checks"].push_back({{"name", "jacobi_identity"},
                           {"max_residual", jacobi.max_residual},
                           {"triples_checked", jacobi.triples_checked},
                           {"pass", jacobi.pass}});
    j["checks"].push_back({{"name", "ad_matrix_invertible"},
                           {"min_singular_value", svals.back()},
                           {"pass", invertible}});
    const bool pass = jacobi.pass && invertible;
    j["verdict"] = pass ? "PASS" : "FAIL";
    return emit_report(j, o, pass);
}

int run_md_verify(const CommonOpts& o) {
    const MD5Family fam = parse_family(o.family_text);

    Rng rng(o.seed, "cli/md-verify");
    long rank0 = 0, rank2 = 0, forced = 0;
    std::optional<ordered_json> violation;
    for (int n = 0; n < o.samples; ++n) {
        Covector f;
        f.alpha = rng.next_uniform(-5.0, 5.0);
        f.beta = rng.next_uniform(-5.0, 5.0);
        f.gamma = rng.next_uniform(-5.0, 5.0);
        f.delta = rng.next_uniform(-5.0, 5.0);
        f.sigma = rng.next_uniform(-5.0, 5.0);
        if (n % 10 == 0) {
            f.beta = f.gamma = f.delta = f.sigma = 0.0;
            ++forced;
        }
        const int rank = orbit_dimension(fam, f, o.tol);
        const bool tail_zero = f.beta == 0.0 && f.gamma == 0.0 && f.delta == 0.0 && f.sigma == 0.0;
        const int expected = tail_zero ? 0 : 2;
        if (rank == 0) ++rank0;
        else if (rank == 2) ++rank2;
        if (rank != expected && !violation) {
            violation = ordered_json{{"covector", format_covector(f)},
                                     {"rank", rank},
                                     {"expected", expected}};
        }
    }

    ordered_json j = report_head("md-verify", o);
    j["family"] = format_family(fam);
    j["samples"] = o.samples;
    j["forced_degenerate"] = forced;
    j["rank_histogram"] = {{"0", rank0}, {"2", rank2}};
    const bool pass = !violation && rank0 + rank2 == o.samples;
    if (violation) j["violation"] = *violation;
    j["verdict"] = pass ? "PASS" : "FAIL";
    return emit_report(j, o, pass);
}

int run_orbit(const CommonOpts& o, const std::string& base_text, int grid, double range) {
    const MD5Family fam = parse_family(o.family_text);
    const Covector base = parse_covector(base_text);
    if (!base.is_finite()) throw std::invalid_argument("base covector must be finite");

    const int dim = orbit_dimension(fam, base, o.tol);
    std::vector<std::string> rows;
    auto push_row = [&rows](double x, double a, const Covector& f) {
        rows.push_back(format_double(x) + "," + format_double(a) + "," + format_covector(f));
    };
    if (dim == 0) {
        push_row(base.alpha, 0.0, base);
    } else {
        for (int i = 0; i < grid; ++i) {
            const double x = grid == 1 ? 0.0 : -range + 2.0 * range * i / (grid - 1);
            for (int k = 0; k < grid; ++k) {
                const double a = grid == 1 ? 0.0 : -range + 2.0 * range * k / (grid - 1);
                push_row(x, a, orbit_point(fam, base, x, a));
            }
        }
    }

    // cross-check the chart against the flow oracle on random group elements
    double max_residual = 0.0;
    long matched = 0;
    Rng rng(o.seed, "cli/orbit-match");
    if (dim == 2) {
        for (int n = 0; n < o.samples; ++n) {
            LieElement u;
            for (double& c : u.c) c = rng.next_uniform(-1.0, 1.0);
            const auto flowed = coadjoint_flow(fam, base, u, rng.next_uniform(-3.0, 3.0));
            const auto m = match_orbit(fam, base, flowed, o.tol);
            if (!m) break;
            max_residual = std::max(max_residual, m->residual);
            ++matched;
        }
    }
    const bool pass = dim == 0 || (matched == o.samples && max_residual < o.tol.match_tol);

    if (o.format == "csv") return write_csv("x,a,alpha,beta,gamma,delta,sigma", rows, o);

    ordered_json j = report_head("orbit", o);
    j["family"] = format_family(fam);
    j["base"] = format_covector(base);
    j["orbit_dimension"] = dim;
    j["grid"] = grid;
    j["range"] = range;
    j["rows"] = rows.size();
    if (dim == 2)
        j["match"] = {{"samples", o.samples}, {"matched", matched}, {"max_residual", max_residual}};
    j["verdict"] = pass ? "PASS" : "FAIL";
    return emit_report(j, o, pass);
}

int run_foliation_verify(const CommonOpts& o, const std::string& point_text, int grid,
                         double range) {
    const MD5Family fam = foliation_family();

    std::optional<FoliationPoint> probe;
    if (!point_text.empty()) {
        const Covector c = parse_covector(point_text);
        const FoliationPoint p = to_point(c);
        if (!in_V(p)) throw std::domain_error("not in V");
        probe = p;
    }

    if (o.format == "csv") {
        // orbit samples of the probe point for plotting
        if (!probe) throw std::invalid_argument("--format csv requires --point");
        std::vector<std::string> rows;
        for (int i = 0; i < grid; ++i) {
            const double r = grid == 1 ? 0.0 : -range + 2.0 * range * i / (grid - 1);
            for (int k = 0; k < grid; ++k) {
                const double a = grid == 1 ? 0.0 : -range + 2.0 * range * k / (grid - 1);
                const auto q = apply_action({r, a}, *probe);
                rows.push_back(format_double(r) + "," + format_double(a) + "," +
                               format_covector(to_covector(q)));
            }
        }
        return write_csv("r,a,x,y,z,t,s", rows, o);
    }

    Rng rng(o.seed, "cli/foliation-verify");
    long strata_ok = 0, invariant_ok = 0, chart_ok = 0, frame_ok = 0, separation_ok = 0;
    std::optional<ordered_json> counterexample;
    double worst_invariant = 0.0, worst_chart = 0.0;

    for (int n = 0; n < o.samples; ++n) {
        FoliationPoint v{rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0),
                         rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0),
                         rng.next_uniform(-2.0, 2.0)};
        if (n % 3 == 1) v.s = 0.0;
        if (n % 3 == 2) v.s = v.t = 0.0;
        if (!in_V(v)) continue;
        const ActionParam g{rng.next_uniform(-3.0, 3.0), rng.next_uniform(-3.0, 3.0)};
        const auto moved = apply_action(g, v);

        const bool strata = classify_stratum(moved) == classify_stratum(v);

        const auto inv_here = leaf_invariant(v);
        const auto inv_there = leaf_invariant(moved);
        const bool invariant = invariants_match(inv_here, inv_there, 1e-9);
        for (std::size_t i = 0; i < inv_here.continuous.size(); ++i)
            worst_invariant = std::max(
                worst_invariant, std::fabs(inv_here.continuous[i] - inv_there.continuous[i]));

        const auto via_chart = orbit_point(fam, to_covector(v), v.x + g.r, g.a);
        const double scale =
            std::max({1.0, std::fabs(via_chart.delta), std::fabs(via_chart.sigma)});
        const double chart_diff = max_abs_diff(to_covector(moved), via_chart) / scale;
        const bool chart = chart_diff < 1e-12;
        worst_chart = std::max(worst_chart, chart_diff);

        const auto frame = leaf_tangent_frame(v);
        Mat fm(5, 2);
        for (int i = 0; i < 5; ++i) {
            fm(i, 0) = frame.d_r[i];
            fm(i, 1) = frame.d_a[i];
        }
        const bool frame_full = numeric_rank(fm, o.tol) == 2;

        // dropping to the next stratum must change the leaf invariant
        FoliationPoint cross = v;
        if (v.s != 0.0) cross.s = 0.0;
        else cross.t = 0.0;
        const bool crossed = (v.s != 0.0 || v.t != 0.0) && in_V(cross);
        const bool separated =
            !crossed || !invariants_match(leaf_invariant(v), leaf_invariant(cross), 1e-9);

        strata_ok += strata;
        invariant_ok += invariant;
        chart_ok += chart;
        frame_ok += frame_full;
        separation_ok += separated;
        if (!(strata && invariant && chart && frame_full && separated) && !counterexample) {
            counterexample = ordered_json{{"point", format_covector(to_covector(v))},
                                          {"param_r", g.r},
                                          {"param_a", g.a}};
        }
    }

    ordered_json j = report_head("foliation-verify", o);
    j["family"] = format_family(fam);
    j["samples"] = o.samples;
    j["checks"] = {{"stratum_invariance", strata_ok},
                   {"leaf_invariant_constancy", invariant_ok},
                   {"chart_identity", chart_ok},
                   {"frame_rank", frame_ok},
                   {"stratum_separation", separation_ok}};
    j["worst_invariant_drift"] = worst_invariant;
    j["worst_chart_residual"] = worst_chart;
    if (probe) {
        const auto inv = leaf_invariant(*probe);
        j["point"] = {{"coordinates", format_covector(to_covector(*probe))},
                      {"stratum", stratum_name(inv.stratum)},
                      {"invariant_continuous", inv.continuous},
                      {"invariant_signs", inv.discrete}};
    }
    const bool pass = !counterexample;
    if (counterexample) j["counterexample"] = *counterexample;
    j["verdict"] = pass ? "PASS" : "FAIL";
    return emit_report(j, o, pass);
}

int run_index(const CommonOpts& o) {
    ordered_json j = report_head("index", o);
    j["samples"] = o.samples;
    bool pass = false;
    try {
        const IndexSystem sys = assemble_index(o.samples, o.seed, o.tol);
        const auto g1 = sys.gamma1();
        const auto g2 = sys.gamma2();
        j["gamma1"] = {{g1[0][0], g1[0][1]}, {g1[1][0], g1[1][1]}};
        j["gamma2"] = {g2[0], g2[1]};
        j["bases"] = {{"K0_B1", {sys.gamma1_columns[0].generator, sys.gamma1_columns[1].generator}},
                      {"K1_J1", loop_class_basis()},
                      {"K1_B2", {sys.gamma2_column.generator}},
                      {"K0_J2", loop_class_basis()}};
        j["windings"] = {
            {sys.gamma1_columns[0].generator, sys.gamma1_columns[0].raw},
            {sys.gamma1_columns[1].generator, sys.gamma1_columns[1].raw},
            {sys.gamma2_column.generator, sys.gamma2_column.raw},
        };
        const std::array<std::array<long, 2>, 2> want_g1{{{0, 1}, {0, 1}}};
        const std::array<long, 2> want_g2{1, 1};
        pass = g1 == want_g1 && g2 == want_g2;
    } catch (const WindingError& e) {
        j["error"] = e.what();
    }
    j["verdict"] = pass ? "PASS" : "FAIL";
    return emit_report(j, o, pass);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification tool for solvable Lie algebra orbit foliations"};
    app.require_subcommand(1);

    CommonOpts check_o, md_o, orbit_o, fol_o, index_o;
    std::string orbit_base, fol_point;
    int orbit_grid = 11, fol_grid = 11;
    double orbit_range = 2.0, fol_range = 2.0;

    auto* check = app.add_subcommand("check-algebra", "validate structure constants of a family");
    check->add_option("descriptor", check_o.family_text, "family descriptor");
    check->add_option("--family", check_o.family_text, "family descriptor");
    add_sampling_flags(check, check_o);
    add_tolerance_flags(check, check_o);
    add_output_flags(check, check_o, false);

    auto* md = app.add_subcommand("md-verify", "orbit dimension dichotomy over random covectors");
    md->add_option("descriptor", md_o.family_text, "family descriptor");
    md->add_option("--family", md_o.family_text, "family descriptor");
    add_sampling_flags(md, md_o);
    add_tolerance_flags(md, md_o);
    add_output_flags(md, md_o, false);

    auto* orbit = app.add_subcommand("orbit", "sample an orbit chart and cross-check the flow");
    orbit->add_option("--family", orbit_o.family_text, "family descriptor");
    orbit->add_option("--base", orbit_base, "base covector a,b,c,d,e")->required();
    orbit->add_option("--grid", orbit_grid, "grid points per axis")->check(CLI::PositiveNumber);
    orbit->add_option("--range", orbit_range, "half width of the (x, a) grid");
    add_sampling_flags(orbit, orbit_o);
    add_tolerance_flags(orbit, orbit_o);
    add_output_flags(orbit, orbit_o, true);

    auto* fol = app.add_subcommand("foliation-verify", "action, strata and leaf invariant checks");
    fol->add_option("--point", fol_point, "probe point x,y,z,t,s");
    fol->add_option("--grid", fol_grid, "grid points per axis for csv output")
        ->check(CLI::PositiveNumber);
    fol->add_option("--range", fol_range, "half width of the (r, a) grid");
    add_sampling_flags(fol, fol_o);
    add_tolerance_flags(fol, fol_o);
    add_output_flags(fol, fol_o, true);

    auto* index = app.add_subcommand("index", "compute the extension invariants");
    add_sampling_flags(index, index_o);
    add_tolerance_flags(index, index_o);
    add_output_flags(index, index_o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) {
            if (check_o.family_text.empty()) throw std::invalid_argument("missing family descriptor");
            check_o.tol.validate();
            return run_check_algebra(check_o);
        }
        if (md->parsed()) {
            if (md_o.family_text.empty()) throw std::invalid_argument("missing family descriptor");
            md_o.tol.validate();
            return run_md_verify(md_o);
        }
        if (orbit->parsed()) {
            if (orbit_o.family_text.empty()) throw std::invalid_argument("missing family descriptor");
            orbit_o.tol.validate();
            return run_orbit(orbit_o, orbit_base, orbit_grid, orbit_range);
        }
        if (fol->parsed()) {
            fol_o.tol.validate();
            return run_foliation_verify(fol_o, fol_point, fol_grid, fol_range);
        }
        if (index->parsed()) {
            index_o.tol.validate();
            return run_index(index_o);
        }
    } catch (const FamilyError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMathFailure;
    }
    return kExitUsage;
}
