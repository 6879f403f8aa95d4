// alphamod: build/validate alpha-coverings, compute alpha-modulation norms,
// apply pseudo-differential operators and run the verification suites.
//
// Exit codes: 0 success, 1 usage/config error, 2 a verification pass flag
// came back false.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alphamod/covering.hpp"
#include "alphamod/grid.hpp"
#include "alphamod/io.hpp"
#include "alphamod/operators.hpp"
#include "alphamod/spaces.hpp"
#include "alphamod/synthesize.hpp"
#include "alphamod/verify.hpp"

namespace am = alphamod;

namespace {

struct GridOptions {
    int dim = 1;
    int n = 128;
    double period = 16.0 * am::kPi;
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--dim", g.dim, "dimension n (1 or 2)");
    cmd->add_option("--grid", g.n, "points per axis N (power of two, >= 16)");
    cmd->add_option("--period", g.period, "spatial period L (default 16 pi)");
}

std::vector<double> parse_alphas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw CLI::ValidationError("--alpha", "empty alpha list");
    return out;
}

double parse_pq(const std::string& text) {
    if (text == "inf" || text == "Inf") return std::numeric_limits<double>::infinity();
    return std::stod(text);
}

void print_admissibility(const am::AdmissibilityReport& r) {
    std::printf("alpha             %s\n", am::fmt17(r.alpha).c_str());
    std::printf("grid N            %d\n", r.grid_n);
    std::printf("pieces            %d\n", r.piece_count);
    std::printf("n0                %d\n", r.n0);
    std::printf("n0_enlarged(1)    %d\n", r.n0_enlarged_1);
    std::printf("n0_enlarged(2)    %d\n", r.n0_enlarged_2);
    std::printf("K = max R/r       %s\n", am::fmt17(r.k_bound).c_str());
    std::printf("|Q|/<xi>^an       [%s, %s]\n", am::fmt17(r.measure_ratio_lo).c_str(),
                am::fmt17(r.measure_ratio_hi).c_str());
    std::printf("|Q|/r^n           [%s, %s]\n", am::fmt17(r.ratio24_r_lo).c_str(),
                am::fmt17(r.ratio24_r_hi).c_str());
    std::printf("|Q|/R^n           [%s, %s]\n", am::fmt17(r.ratio24_R_lo).c_str(),
                am::fmt17(r.ratio24_R_hi).c_str());
    std::printf("kappa (within)    %s\n", am::fmt17(r.kappa_within).c_str());
    std::printf("kappa (neighbor)  %s\n", am::fmt17(r.kappa_neighbor).c_str());
    std::printf("s_n               %s\n", am::fmt17(r.unit_ball_volume).c_str());
    std::printf("partition resid   %s\n", am::fmt17(r.partition_residual).c_str());
}

struct VerifyOptions {
    GridOptions grid;
    std::string alphas = "0,0.5,1";
    int trials = 10;
    std::uint64_t seed = 42;
    std::string out_dir;
    int jobs = am::default_jobs();
    bool no_refine = false;
    double refinement_tol = 0.20;
};

void add_verify_options(CLI::App* cmd, VerifyOptions& v) {
    add_grid_options(cmd, v.grid);
    cmd->add_option("--alpha", v.alphas, "comma-separated alpha list");
    cmd->add_option("--trials", v.trials, "trials per check");
    cmd->add_option("--seed", v.seed, "master seed");
    cmd->add_option("--out", v.out_dir, "report directory (CSV + JSON summary)");
    cmd->add_option("--jobs", v.jobs, "parallel trial evaluation degree");
    cmd->add_flag("--no-refine", v.no_refine, "skip the doubled-grid leg");
    cmd->add_option("--refinement-tol", v.refinement_tol, "allowed max-ratio drift under N->2N");
}

am::VerifyConfig to_config(const VerifyOptions& v) {
    am::VerifyConfig cfg;
    cfg.trials = v.trials;
    cfg.seed = v.seed;
    cfg.refine = !v.no_refine;
    cfg.refinement_tol = v.refinement_tol;
    cfg.jobs = v.jobs;
    return cfg;
}

int emit_reports(const std::vector<am::BoundReport>& reports, const std::string& out_dir,
                 const std::string& stem) {
    nlohmann::json summary = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& rep : reports) {
        summary.push_back(am::report_summary_json(rep));
        all_pass = all_pass && rep.pass;
        std::printf("%-22s alpha=%-6s max_ratio=%-12.6g drift=%-8.4g %s\n", rep.check.c_str(),
                    rep.has_alpha ? am::fmt17(rep.alpha).substr(0, 5).c_str() : "-", rep.max_ratio,
                    rep.refinement_drift, rep.pass ? "pass" : "FAIL");
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        am::write_file(out_dir + "/" + stem + ".csv", am::reports_to_csv(reports));
        am::write_file(out_dir + "/" + stem + ".json", summary.dump(2) + "\n");
    }
    return all_pass ? 0 : 2;
}

std::vector<am::BoundReport> run_verify(const std::string& what, const VerifyOptions& opt) {
    am::GridSpec grid = am::make_grid(opt.grid.dim, opt.grid.n, opt.grid.period);
    am::VerifyConfig cfg = to_config(opt);
    std::vector<double> alphas = parse_alphas(opt.alphas);
    std::vector<am::BoundReport> reports;

    if (what == "thm11" || what == "all")
        for (double a : alphas) reports.push_back(am::check_thm11(a, grid, cfg));
    if (what == "thm12" || what == "all") {
        for (double a : alphas) reports.push_back(am::check_thm12(a, grid, cfg));
        reports.push_back(am::check_commutator_identity(grid, cfg));
    }
    if (what == "lemmas" || what == "all") {
        reports.push_back(am::check_lemma32(grid, cfg));
        auto bl = am::check_band_limited_bounds(grid, cfg);
        reports.push_back(bl.l2);
        reports.push_back(bl.pointwise);
        // three sines landing in distinct dyadic annuli
        am::SampledFunction a3(grid, am::Domain::Space);
        {
            long base = std::max<long>(1, long(std::llround(1.5 / grid.dxi())));
            for (long mult : {1L, 2L, 4L}) {
                am::SampledFunction s = am::synth_lipschitz_sine(grid, 1.0 / double(mult),
                                                                 base * mult, 0, 0.4 * mult);
                for (std::size_t i = 0; i < a3.values.size(); ++i) a3.values[i] += s.values[i];
            }
        }
        reports.push_back(am::check_highfreq_decay(am::make_lipschitz(a3), grid));
        for (double al : alphas) reports.push_back(am::check_mollify_bound(al, grid, cfg));
        reports.push_back(am::check_regularize_bound(grid, cfg));
    }
    if (what == "appendix" || what == "all") {
        const double inf = std::numeric_limits<double>::infinity();
        for (auto [p, q] : {std::pair<double, double>{2, 2}, {inf, 1}}) {
            auto rep = am::check_appendix_inclusions(p, q, grid, cfg);
            reports.push_back(rep.into_modulation);
            reports.push_back(rep.from_modulation);
        }
    }
    return reports;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-modulation space toolkit"};
    app.require_subcommand(1);

    // covering build / validate
    auto* covering = app.add_subcommand("covering", "build or validate alpha-coverings");
    covering->require_subcommand(1);
    struct {
        GridOptions grid;
        double alpha = 0;
        std::string out;
        double max_residual = 1e-8;
    } cov_opt;
    auto* cov_build = covering->add_subcommand("build", "construct covering + BAPU");
    add_grid_options(cov_build, cov_opt.grid);
    cov_build->add_option("--alpha", cov_opt.alpha, "alpha in [0,1]")->required();
    cov_build->add_option("--out", cov_opt.out, "write covering JSON here");
    auto* cov_validate = covering->add_subcommand("validate", "print the admissibility report");
    add_grid_options(cov_validate, cov_opt.grid);
    cov_validate->add_option("--alpha", cov_opt.alpha, "alpha in [0,1]")->required();
    cov_validate->add_option("--out", cov_opt.out, "write report JSON here");
    cov_validate->add_option("--max-residual", cov_opt.max_residual,
                             "partition-of-unity ceiling for exit status");

    // norm function / symbol
    auto* norm = app.add_subcommand("norm", "compute alpha-modulation norms");
    norm->require_subcommand(1);
    struct {
        std::string input;
        double alpha = 0;
        std::string p = "2", q = "2";
        double s = 0, s1 = 0, s2 = 0;
        std::string out;
        bool strict = false;
    } norm_opt;
    auto* norm_fun = norm->add_subcommand("function", "function norm from a JSON envelope");
    norm_fun->add_option("--input", norm_opt.input, "sampled_function JSON")->required();
    norm_fun->add_option("--alpha", norm_opt.alpha)->required();
    norm_fun->add_option("--p", norm_opt.p, "1, 2 or inf");
    norm_fun->add_option("--q", norm_opt.q, "1, 2 or inf");
    norm_fun->add_option("--s", norm_opt.s, "weight exponent");
    norm_fun->add_option("--out", norm_opt.out, "write the CSV breakdown here");
    norm_fun->add_flag("--strict-band", norm_opt.strict, "error out on band violations");
    auto* norm_sym = norm->add_subcommand("symbol", "product symbol norm from a JSON envelope");
    norm_sym->add_option("--input", norm_opt.input, "sampled_symbol JSON")->required();
    norm_sym->add_option("--alpha", norm_opt.alpha)->required();
    norm_sym->add_option("--s1", norm_opt.s1, "x-side weight exponent");
    norm_sym->add_option("--s2", norm_opt.s2, "xi-side weight exponent");
    norm_sym->add_option("--out", norm_opt.out, "write the CSV breakdown here");
    norm_sym->add_flag("--strict-band", norm_opt.strict, "error out on band violations");

    // op apply / commutator / norm-estimate
    auto* op = app.add_subcommand("op", "apply operators");
    op->require_subcommand(1);
    struct {
        std::string sigma, input, a, out;
        bool twisted = false;
        double tol = 1e-6;
        int max_iter = 500;
    } op_opt;
    auto* op_apply = op->add_subcommand("apply", "sigma(X,D) f");
    op_apply->add_option("--sigma", op_opt.sigma)->required();
    op_apply->add_option("--input", op_opt.input)->required();
    op_apply->add_option("--out", op_opt.out, "output JSON envelope");
    auto* op_comm = op->add_subcommand("commutator", "[sigma(X,D), a] f");
    op_comm->add_option("--sigma", op_opt.sigma)->required();
    op_comm->add_option("--a", op_opt.a, "Lipschitz function JSON")->required();
    op_comm->add_option("--input", op_opt.input)->required();
    op_comm->add_option("--out", op_opt.out, "output JSON envelope");
    op_comm->add_flag("--twisted", op_opt.twisted, "use the oscillatory-integral route");
    auto* op_norm = op->add_subcommand("norm-estimate", "power-iteration operator norm");
    op_norm->add_option("--sigma", op_opt.sigma)->required();
    op_norm->add_option("--tol", op_opt.tol);
    op_norm->add_option("--max-iter", op_opt.max_iter);

    // synth: produce JSON envelopes for the families
    auto* synth = app.add_subcommand("synth", "generate test functions/symbols");
    synth->require_subcommand(1);
    struct {
        GridOptions grid;
        std::string family = "band-limited-random";
        double width = 1.0;
        long k0 = 1, k1 = 0;
        double band = 0;
        std::uint64_t seed = 42;
        double amplitude = 1.0;
        int index = 3;
        std::string out;
    } sy;
    auto* synth_fun = synth->add_subcommand("function", "gaussian | plane-wave | band-limited-random | lipschitz-sine");
    add_grid_options(synth_fun, sy.grid);
    synth_fun->add_option("--family", sy.family)->required();
    synth_fun->add_option("--width", sy.width);
    synth_fun->add_option("--k0", sy.k0);
    synth_fun->add_option("--k1", sy.k1);
    synth_fun->add_option("--band", sy.band, "band half-width (default 0.4 Nyquist)");
    synth_fun->add_option("--seed", sy.seed);
    synth_fun->add_option("--amplitude", sy.amplitude);
    synth_fun->add_option("--out", sy.out)->required();
    auto* synth_sym = synth->add_subcommand("symbol", "suite symbol by index (0 identity, 1 multiplier, 2 multiplication, 3+ random)");
    add_grid_options(synth_sym, sy.grid);
    synth_sym->add_option("--index", sy.index);
    synth_sym->add_option("--seed", sy.seed);
    synth_sym->add_option("--out", sy.out)->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->require_subcommand(1);
    VerifyOptions vopt;
    std::vector<CLI::App*> verify_cmds;
    for (const char* name : {"thm11", "thm12", "lemmas", "appendix", "all"}) {
        auto* c = verify->add_subcommand(name, std::string("verify ") + name);
        add_verify_options(c, vopt);
        verify_cmds.push_back(c);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (covering->parsed()) {
            am::GridSpec grid = am::make_grid(cov_opt.grid.dim, cov_opt.grid.n, cov_opt.grid.period);
            am::Covering cov = am::build_covering(cov_opt.alpha, grid);
            if (cov_build->parsed()) {
                if (!cov_opt.out.empty())
                    am::write_file(cov_opt.out, am::covering_to_json(cov).dump(2) + "\n");
                std::printf("built alpha=%s covering: %zu pieces, partition residual %s\n",
                            am::fmt17(cov_opt.alpha).c_str(), cov.pieces.size(),
                            am::fmt17(cov.admissibility.partition_residual).c_str());
                return 0;
            }
            print_admissibility(cov.admissibility);
            if (!cov_opt.out.empty())
                am::write_file(cov_opt.out,
                               am::admissibility_to_json(cov.admissibility).dump(2) + "\n");
            return cov.admissibility.partition_residual <= cov_opt.max_residual ? 0 : 2;
        }

        if (norm->parsed()) {
            nlohmann::json j = nlohmann::json::parse(am::read_file(norm_opt.input));
            if (norm_fun->parsed()) {
                am::SampledFunction f = am::function_from_json(j);
                if (f.domain == am::Domain::Frequency) f = am::inverse_ft(f);
                am::Covering cov = am::build_covering(norm_opt.alpha, f.grid);
                am::NormParams params;
                params.alpha = norm_opt.alpha;
                params.p = parse_pq(norm_opt.p);
                params.q = parse_pq(norm_opt.q);
                params.s = norm_opt.s;
                auto b = am::alpha_modulation_norm(f, params, cov, norm_opt.strict);
                std::printf("%s\n", am::fmt17(b.total).c_str());
                if (!norm_opt.out.empty()) am::write_file(norm_opt.out, am::breakdown_to_csv(b));
            } else {
                am::SampledSymbol s = am::symbol_from_json(j);
                am::Covering cov = am::build_covering(norm_opt.alpha, s.grid);
                am::NormParams params;
                params.alpha = norm_opt.alpha;
                params.s1 = norm_opt.s1;
                params.s2 = norm_opt.s2;
                auto b = am::product_symbol_norm(s, params, cov, norm_opt.strict);
                std::printf("%s\n", am::fmt17(b.total).c_str());
                if (!norm_opt.out.empty()) am::write_file(norm_opt.out, am::breakdown_to_csv(b));
            }
            return 0;
        }

        if (op->parsed()) {
            am::SampledSymbol sigma =
                am::symbol_from_json(nlohmann::json::parse(am::read_file(op_opt.sigma)));
            if (op_norm->parsed()) {
                auto est = am::operator_norm_estimate(sigma, op_opt.tol, op_opt.max_iter);
                std::printf("%s (iterations %d%s)\n", am::fmt17(est.norm).c_str(), est.iterations,
                            est.converged ? "" : ", NOT converged");
                return 0;
            }
            am::SampledFunction f =
                am::function_from_json(nlohmann::json::parse(am::read_file(op_opt.input)));
            if (f.domain == am::Domain::Frequency) f = am::inverse_ft(f);
            am::SampledFunction result;
            if (op_apply->parsed()) {
                result = am::quantize_apply(sigma, f);
            } else {
                am::LipschitzFunction a = am::make_lipschitz(am::function_from_json(
                    nlohmann::json::parse(am::read_file(op_opt.a))));
                result = op_opt.twisted ? am::commutator_twisted(sigma, a, f)
                                        : am::commutator_apply(sigma, a, f);
            }
            if (!op_opt.out.empty())
                am::write_file(op_opt.out, am::function_to_json(result).dump() + "\n");
            std::printf("L2 norm of result: %s\n", am::fmt17(am::lp_norm(result, 2.0)).c_str());
            return 0;
        }

        if (synth->parsed()) {
            am::GridSpec grid = am::make_grid(sy.grid.dim, sy.grid.n, sy.grid.period);
            if (synth_fun->parsed()) {
                am::SampledFunction f;
                if (sy.family == "gaussian") {
                    f = am::synth_gaussian(grid, sy.width);
                } else if (sy.family == "plane-wave") {
                    f = am::synth_plane_wave(grid, sy.k0, sy.k1);
                } else if (sy.family == "band-limited-random") {
                    double band = sy.band > 0 ? sy.band : 0.4 * grid.nyquist();
                    f = am::synth_band_limited_random(grid, band, sy.seed);
                } else if (sy.family == "lipschitz-sine") {
                    f = am::synth_lipschitz_sine(grid, sy.amplitude, sy.k0, sy.k1);
                } else {
                    throw std::invalid_argument("unknown family: " + sy.family);
                }
                am::write_file(sy.out, am::function_to_json(f).dump() + "\n");
            } else {
                am::SampledSymbol s =
                    am::suite_symbol(grid, sy.index, sy.seed, 0.8 * grid.nyquist(), grid.dx());
                am::write_file(sy.out, am::symbol_to_json(s).dump() + "\n");
            }
            return 0;
        }

        if (verify->parsed()) {
            const char* names[] = {"thm11", "thm12", "lemmas", "appendix", "all"};
            for (std::size_t i = 0; i < verify_cmds.size(); ++i) {
                if (!verify_cmds[i]->parsed()) continue;
                auto t0 = std::chrono::steady_clock::now();
                auto reports = run_verify(names[i], vopt);
                int rc = emit_reports(reports, vopt.out_dir, names[i]);
                auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
                std::fprintf(stderr, "verify %s finished in %.1f s\n", names[i], dt.count());
                return rc;
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "alphamod: error: %s\n", e.what());
        return 1;
    }
    return 1;
}
