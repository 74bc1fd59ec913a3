// Batch CLI for the generalized copolymer laboratory: bound curves, the
// weak-coupling quadrature, free-energy estimation, localization and
// delocalization certificates, phase scans, renewal diagnostics, and the two
// strategy experiments. Emits CSV or JSON; exit code 0 covers Undecided and
// Inconclusive verdicts, nonzero is reserved for errors.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "copoly/copoly.hpp"

using nlohmann::json;
using namespace copoly;

namespace {

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<std::int64_t> parse_int_grid(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoll(tok));
    }
    return out;
}

ReturnLaw make_law(const std::string& spec, double alpha, std::int64_t nmax, std::int64_t head_n0) {
    if (spec == "srw") return ReturnLaw::srw(nmax);
    if (spec == "zipf") return ReturnLaw::zipf(alpha, nmax);
    if (spec == "heavyhead") return ReturnLaw::heavy_head(alpha, head_n0, nmax);
    if (spec.rfind("custom:", 0) == 0) return ReturnLaw::load_custom_table(spec.substr(7), nmax);
    throw CLI::ValidationError("--law", "unknown law '" + spec + "'");
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

std::string csv_line_estimate(const MCEstimate& e) {
    std::ostringstream os;
    os.precision(17);
    os << e.mean << ',' << e.stderr_ << ',' << e.n_samples << ',' << e.confidence;
    return os.str();
}

struct LawOpts {
    std::string law = "srw";
    double alpha = 0.5;
    std::string disorder = "gaussian";
    std::int64_t nmax = ReturnLaw::kDefaultHorizon;
    std::int64_t head_n0 = 256;

    void attach(CLI::App* cmd) {
        cmd->add_option("--law", law, "return law: srw|zipf|heavyhead|custom:FILE");
        cmd->add_option("--alpha", alpha, "tail exponent alpha");
        cmd->add_option("--disorder", disorder, "disorder law: gaussian|rademacher");
        cmd->add_option("--nmax", nmax, "precomputation horizon for the return law");
        cmd->add_option("--head-n0", head_n0, "head size for --law heavyhead");
    }

    ReturnLaw build_law() const { return make_law(law, alpha, nmax, head_n0); }
    DisorderLaw build_disorder() const { return parse_disorder(disorder); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized copolymer phase-diagram laboratory"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h; --h is a model flag
    app.set_config("--config", "", "flat key=value config file; flags override");

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "output file (default stdout)")->capture_default_str();
    app.add_option("--format", format, "csv|json")->capture_default_str();

    int exit_code = 0;

    // ---------------------------------------------------------------- bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "deterministic bound curves per lambda");
    {
        static LawOpts law_opts;
        static std::string lambda_grid = "0.25,0.5,1.0";
        static std::int64_t neutral_samples = 0, neutral_n = 512;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_bounds);
        cmd_bounds->add_option("--lambda-grid", lambda_grid, "comma-separated lambdas");
        cmd_bounds->add_option("--neutral-samples", neutral_samples,
                               "if > 0, Monte Carlo F(lambda,0) for the neutral-stretch bound");
        cmd_bounds->add_option("--neutral-n", neutral_n, "system size for the neutral estimate");
        cmd_bounds->add_option("--seed", seed, "RNG seed for the neutral estimate");
        cmd_bounds->callback([&] {
            const auto dis = law_opts.build_disorder();
            const auto grid = parse_grid(lambda_grid);
            const double alpha =
                law_opts.law == "srw" ? 0.5 : law_opts.alpha;  // srw pins alpha = 1/2
            const double slope = slope_lower_bound(alpha);
            std::optional<ReturnLaw> law;
            if (neutral_samples > 0) law = law_opts.build_law();
            json rows = json::array();
            std::ostringstream csv;
            csv.precision(17);
            csv << "lambda,h_lower_old,h_upper,h_lower_neutral,slope_lower,slope_upper\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double lambda = grid[i];
                std::optional<MCEstimate> f0;
                if (law) {
                    const ModelSpec m0(*law, dis, {lambda, 0.0});
                    f0 = free_energy_estimate(m0, neutral_n, neutral_samples,
                                              detail::derive_seed(seed, i, 0xB0), 0.99);
                }
                BoundCurves c;
                c.lambda = lambda;
                c.h_lower_old = h_m_curve(dis, 1.0 / (1.0 + alpha), lambda);
                c.h_upper = h_m_curve(dis, 1.0, lambda);
                c.slope_lower = slope;
                if (f0) c.h_lower_neutral = neutral_stretch_hc_lower(alpha, *f0);
                const double neutral = c.h_lower_neutral
                                           ? *c.h_lower_neutral
                                           : std::numeric_limits<double>::quiet_NaN();
                csv << detail::fmt_double(lambda) << ',' << detail::fmt_double(c.h_lower_old)
                    << ',' << detail::fmt_double(c.h_upper) << ',' << detail::fmt_double(neutral)
                    << ',' << detail::fmt_double(c.slope_lower) << ','
                    << detail::fmt_double(c.slope_upper) << '\n';
                json r{{"lambda", lambda},       {"h_lower_old", c.h_lower_old},
                       {"h_upper", c.h_upper},   {"slope_lower", c.slope_lower},
                       {"slope_upper", c.slope_upper}};
                if (c.h_lower_neutral) r["h_lower_neutral"] = *c.h_lower_neutral;
                rows.push_back(r);
            }
            emit(out_path, format == "json" ? rows.dump(2) + "\n" : csv.str());
        });
    }

    // ------------------------------------------------------------- quasiexpl
    auto* cmd_qe = app.add_subcommand("quasiexpl", "weak-coupling quadrature A(alpha, kappa)");
    {
        static double alpha = 0.5;
        static double kappa = -1.0;
        static bool optimize = false, thresholds = false;
        cmd_qe->add_option("--alpha", alpha, "alpha in (0,1)")->required();
        cmd_qe->add_option("--kappa", kappa, "evaluate at this kappa");
        cmd_qe->add_flag("--optimize", optimize, "maximize over kappa");
        cmd_qe->add_flag("--thresholds", thresholds, "also report both alpha-threshold roots");
        cmd_qe->callback([&] {
            json j{{"alpha", alpha}};
            if (kappa > 0.0) {
                j["kappa"] = kappa;
                j["value"] = quasiexpl_value(alpha, kappa);
                j["closed_form_lower"] = quasiexpl_closed_lower(alpha, kappa);
            }
            if (optimize || kappa <= 0.0) {
                const auto [ks, as] = optimize_kappa(alpha);
                j["kappa_star"] = ks;
                j["a_star"] = as;
            }
            if (thresholds) {
                j["alpha0_closed_form"] = alpha_threshold(ThresholdKind::ClosedForm);
                j["alpha0_quadrature"] = alpha_threshold(ThresholdKind::Quadrature);
            }
            emit(out_path, j.dump(2) + "\n");
        });
    }

    // ----------------------------------------------------------- free-energy
    auto* cmd_fe = app.add_subcommand("free-energy", "(1/N) E log Zc_N by Monte Carlo");
    {
        static LawOpts law_opts;
        static double lambda = 1.0, h = 0.0, confidence = 0.99;
        static std::int64_t n = 512, samples = 2000;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_fe);
        cmd_fe->add_option("--lambda", lambda, "coupling lambda")->required();
        cmd_fe->add_option("--h", h, "asymmetry h");
        cmd_fe->add_option("--N", n, "system size");
        cmd_fe->add_option("--samples", samples, "disorder samples");
        cmd_fe->add_option("--confidence", confidence, "confidence level");
        cmd_fe->add_option("--seed", seed, "RNG seed");
        cmd_fe->callback([&] {
            const ModelSpec model(law_opts.build_law(), law_opts.build_disorder(), {lambda, h});
            const auto est = free_energy_estimate(model, n, samples, seed, confidence);
            const double annealed = annealed_constrained_logZ(model, n) / static_cast<double>(n);
            if (format == "json") {
                json j{{"lambda", lambda},       {"h", h},
                       {"N", n},                 {"mean", est.mean},
                       {"stderr", est.stderr_},  {"n_samples", est.n_samples},
                       {"confidence", est.confidence}, {"lower", est.lower()},
                       {"annealed_per_site", annealed}};
                emit(out_path, j.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "mean,stderr,n_samples,confidence,lower,annealed_per_site\n";
                os.precision(17);
                os << csv_line_estimate(est) << ',' << est.lower() << ',' << annealed << '\n';
                emit(out_path, os.str());
            }
        });
    }

    // ----------------------------------------------------------- certify-loc
    auto* cmd_loc = app.add_subcommand("certify-loc", "finite-volume localization certificate");
    {
        static LawOpts law_opts;
        static double lambda = 1.0, h = 0.0, confidence = 0.99;
        static std::string schedule = "64,128,256,512,1024,2048,4096";
        static std::int64_t samples = 2000;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_loc);
        cmd_loc->add_option("--lambda", lambda)->required();
        cmd_loc->add_option("--h", h);
        cmd_loc->add_option("--schedule", schedule, "increasing N schedule");
        cmd_loc->add_option("--samples", samples);
        cmd_loc->add_option("--confidence", confidence);
        cmd_loc->add_option("--seed", seed);
        cmd_loc->callback([&] {
            const ModelSpec model(law_opts.build_law(), law_opts.build_disorder(), {lambda, h});
            const auto v = localization_certificate(model, parse_int_grid(schedule), samples,
                                                    confidence, seed);
            json j{{"lambda", lambda},
                   {"h", h},
                   {"verdict", v.verdict == Localization::Localized ? "Localized" : "Undecided"},
                   {"n_used", v.n_used},
                   {"estimate_mean", v.estimate.mean},
                   {"estimate_stderr", v.estimate.stderr_},
                   {"estimate_lower", v.estimate.lower()},
                   {"confidence", confidence},
                   {"n_samples", samples}};
            emit(out_path, j.dump(2) + "\n");
        });
    }

    // --------------------------------------------------------- certify-deloc
    auto* cmd_del = app.add_subcommand("certify-deloc", "fractional-moment delocalization certificate");
    {
        static LawOpts law_opts;
        static double lambda = 1.0, h = 1.0, confidence = 0.99;
        static double gamma = -1.0, rho = -1.0, c_knob = -1.0;
        static std::int64_t k = -1, samples = 10000;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_del);
        cmd_del->add_option("--lambda", lambda)->required();
        cmd_del->add_option("--h", h)->required();
        cmd_del->add_option("--gamma", gamma, "explicit gamma (with --k)");
        cmd_del->add_option("--k", k, "explicit cut index (with --gamma)");
        cmd_del->add_option("--rho", rho, "alpha > 1 recipe knob");
        cmd_del->add_option("--c", c_knob, "alpha <= 1 recipe knob");
        cmd_del->add_option("--samples", samples);
        cmd_del->add_option("--confidence", confidence);
        cmd_del->add_option("--seed", seed);
        cmd_del->callback([&] {
            const auto law = law_opts.build_law();
            const ModelSpec model(law, law_opts.build_disorder(), {lambda, h});
            FracParams params;
            if (gamma > 0.0 && k > 0) {
                params = FracParams{gamma, k, RecipeOrigin::Manual};
            } else {
                const double knob = law.alpha() > 1.0 ? rho : c_knob;
                if (knob <= 0.0)
                    throw CLI::ValidationError(
                        "certify-deloc", "need either --gamma/--k or the recipe knob (--rho/--c)");
                params = parameter_recipe(law.alpha(), lambda, knob);
            }
            const auto cert = delocalization_certificate(model, params, samples, confidence, seed);
            emit(out_path, deloc_certificate_to_json(cert).dump(2) + "\n");
        });
    }

    // ------------------------------------------------------------------ scan
    auto* cmd_scan = app.add_subcommand("scan", "phase-diagram scan over a lambda grid");
    {
        static LawOpts law_opts;
        static std::string lambda_grid = "0.25,0.5,1.0";
        static SearchBudgets budgets;
        static std::string loc_schedule = "64,128,256,512,1024,2048,4096";
        static std::string rho_grid = "0.8,0.9,0.95", c_grid = "0.05,0.1,0.2";
        static std::string records_dir;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_scan);
        cmd_scan->add_option("--lambda-grid", lambda_grid);
        cmd_scan->add_option("--loc-schedule", loc_schedule);
        cmd_scan->add_option("--loc-samples", budgets.loc_samples);
        cmd_scan->add_option("--deloc-samples", budgets.deloc_samples);
        cmd_scan->add_option("--rho-grid", rho_grid);
        cmd_scan->add_option("--c-grid", c_grid);
        cmd_scan->add_option("--max-loc-probes", budgets.max_loc_probes);
        cmd_scan->add_option("--max-deloc-probes", budgets.max_deloc_probes);
        cmd_scan->add_option("--h-tol", budgets.h_tol);
        cmd_scan->add_option("--confidence", budgets.confidence);
        cmd_scan->add_option("--neutral-samples", budgets.neutral_samples);
        cmd_scan->add_option("--neutral-n", budgets.neutral_n);
        cmd_scan->add_option("--records-dir", records_dir, "emit one JSON record per probe");
        cmd_scan->add_option("--seed", seed)->required();
        cmd_scan->callback([&] {
            budgets.loc_schedule = parse_int_grid(loc_schedule);
            budgets.rho_grid = parse_grid(rho_grid);
            budgets.c_grid = parse_grid(c_grid);
            const auto law = law_opts.build_law();
            const auto rows =
                scan_phase(law, law_opts.build_disorder(), parse_grid(lambda_grid), budgets, seed);
            if (!records_dir.empty()) {
                std::filesystem::create_directories(records_dir);
                std::size_t idx = 0;
                for (const auto& row : rows) {
                    for (const auto& p : row.probes) {
                        char name[64];
                        std::snprintf(name, sizeof(name), "probe_%05zu.json", idx++);
                        std::ofstream out(std::filesystem::path(records_dir) / name);
                        out << probe_to_json(p).dump(2) << "\n";
                    }
                }
            }
            if (format == "json") {
                json j = json::array();
                for (const auto& r : rows) j.push_back(scan_row_to_json(r));
                emit(out_path, j.dump(2) + "\n");
            } else {
                emit(out_path, scan_csv(rows));
            }
        });
    }

    // --------------------------------------------------------- renewal-check
    auto* cmd_ren = app.add_subcommand("renewal-check", "renewal mass function and Laplace functionals");
    {
        static LawOpts law_opts;
        static std::int64_t n = 1000, samples = 1000;
        static std::string q_grid = "1,8,64";
        static bool conditioned = false;
        static std::uint64_t seed = 0;
        law_opts.attach(cmd_ren);
        cmd_ren->add_option("--N", n, "horizon");
        cmd_ren->add_option("--samples", samples);
        cmd_ren->add_option("--q-grid", q_grid);
        cmd_ren->add_flag("--conditioned", conditioned, "condition on N in tau");
        cmd_ren->add_option("--seed", seed);
        cmd_ren->callback([&] {
            const auto law = law_opts.build_law();
            const RenewalMassTable u(law, n);
            json j{{"law", law.name()},
                   {"N", n},
                   {"u_N", u.value(n)},
                   {"conditioned", conditioned}};
            const double mean_tau = law.mean_increment();
            if (std::isfinite(mean_tau)) {
                j["mean_increment"] = mean_tau;
                j["u_times_mean"] = u.value(n) * mean_tau;
            }
            json laplace = json::array();
            for (double q : parse_grid(q_grid)) {
                const auto est = delta_laplace(law, n, q, samples, conditioned, seed);
                laplace.push_back({{"q", q},
                                   {"mean", est.mean},
                                   {"stderr", est.stderr_},
                                   {"n_samples", est.n_samples}});
            }
            j["delta_laplace"] = laplace;
            emit(out_path, j.dump(2) + "\n");
        });
    }

    // ------------------------------------------------------------ experiment
    auto* cmd_exp = app.add_subcommand("experiment", "strategy experiments");
    cmd_exp->require_subcommand(1);
    {
        auto* ldp = cmd_exp->add_subcommand("ldp", "rare-stretch large-deviation rate");
        static LawOpts law_opts;
        static double lambda = 1.0, h = 0.3, delta = 0.3;
        static std::int64_t ell = 400, samples = 10000, fref_n = 400, fref_samples = 1000;
        static std::uint64_t seed = 0;
        static bool direct_check = false;
        law_opts.attach(ldp);
        ldp->add_option("--lambda", lambda)->required();
        ldp->add_option("--h", h)->required();
        ldp->add_option("--ell", ell, "block length");
        ldp->add_option("--delta", delta);
        ldp->add_option("--samples", samples);
        ldp->add_option("--fref-n", fref_n, "system size for the F(lambda,0) reference");
        ldp->add_option("--fref-samples", fref_samples);
        ldp->add_flag("--direct-check", direct_check, "also run the direct (unshifted) estimator");
        ldp->add_option("--seed", seed)->required();
        ldp->callback([&] {
            const auto law = law_opts.build_law();
            const auto dis = law_opts.build_disorder();
            const ModelSpec m0(law, dis, {lambda, 0.0});
            const auto fref = free_energy_estimate(m0, fref_n, fref_samples,
                                                   detail::derive_seed(seed, 0, 0xFEF));
            const auto res = experiment_ldp_rate(law, dis, lambda, h, ell, delta, fref, samples,
                                                 detail::derive_seed(seed, 1, 0x1D9));
            json j = ldp_result_to_json(res);
            if (direct_check) {
                const auto d = ldp_direct_probability(law, lambda, h, ell, delta, fref, samples,
                                                      detail::derive_seed(seed, 2, 0xD12));
                j["direct_p_mean"] = d.mean;
                j["direct_p_stderr"] = d.stderr_;
            }
            emit(out_path, j.dump(2) + "\n");
        });

        auto* hh = cmd_exp->add_subcommand("heavy-head", "adversarial return-law experiment");
        static LawOpts hh_opts;
        static double hh_lambda = 1.0, hh_eps = 0.2;
        static std::string head_schedule = "16,256,4096";
        static std::string h_ratios = "0.50,0.55,0.60";
        static std::string hh_schedule = "64,128,256,512,1024";
        static std::string hh_stage_samples = "2000,1600,1200,800,500";
        static std::uint64_t hh_seed = 0;
        hh->add_option("--alpha", hh_opts.alpha, "tail exponent");
        hh->add_option("--disorder", hh_opts.disorder);
        hh->add_option("--lambda", hh_lambda)->required();
        hh->add_option("--epsilon", hh_eps, "distance below h^(1)(lambda)");
        hh->add_option("--head-schedule", head_schedule, "comma list of head sizes N0");
        hh->add_option("--h-ratios", h_ratios, "h grid as fractions of h^(1)(lambda)");
        hh->add_option("--schedule", hh_schedule, "N schedule");
        hh->add_option("--stage-samples", hh_stage_samples, "samples per schedule stage");
        hh->add_option("--seed", hh_seed)->required();
        hh->callback([&] {
            HeavyHeadBudgets budgets;
            budgets.schedule = parse_int_grid(hh_schedule);
            budgets.stage_samples = parse_int_grid(hh_stage_samples);
            budgets.h_grid_ratios = parse_grid(h_ratios);
            const auto rep =
                experiment_heavy_head(hh_opts.alpha, hh_lambda, hh_eps,
                                      parse_int_grid(head_schedule), budgets, hh_seed,
                                      hh_opts.build_disorder());
            emit(out_path, heavy_head_report_to_json(rep).dump(2) + "\n");
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
