// Experiment runner: every module surfaces as a subcommand with a JSON
// config and CSV/JSON outputs. Exit status 0 on success, 2 when a verdict
// is Inconclusive, 1 on any error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ckl/compression.hpp"
#include "ckl/rng.hpp"
#include "ckl/curve.hpp"
#include "ckl/grain.hpp"
#include "ckl/grid.hpp"
#include "ckl/hypothesis.hpp"
#include "ckl/maximal.hpp"
#include "ckl/oscillatory.hpp"
#include "ckl/phase_json.hpp"
#include "ckl/sublevel.hpp"
#include "ckl/tube_family.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ckl::ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ckl::ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    return j;
}

ckl::PhaseSpec phase_from_config(const json& cfg, const std::string& shortcut) {
    if (!shortcut.empty()) {
        if (shortcut == "const" || shortcut == "ConstCoeff") return ckl::PhaseSpec::const_coeff();
        if (shortcut == "star" || shortcut == "BourgainStar") return ckl::PhaseSpec::bourgain_star();
        if (shortcut == "counterexample" || shortcut == "Counterexample")
            return ckl::PhaseSpec::counterexample();
        throw ckl::ConfigError("unknown phase shortcut: " + shortcut);
    }
    if (cfg.contains("phase")) return ckl::phase_from_json(cfg.at("phase"));
    return ckl::PhaseSpec::const_coeff();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ckl::Error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json fit_to_json(const ckl::ScalingFit& fit) {
    json pts = json::array();
    for (const auto& [s, v] : fit.points) pts.push_back({{"scale", s}, {"value", v}});
    return json{{"points", pts},
                {"slope", fit.slope},
                {"intercept", fit.intercept},
                {"max_residual", fit.max_residual}};
}

json report_to_json(const ckl::HypothesisReport& rep) {
    json j;
    j["hypothesis"] = ckl::to_string(rep.hypothesis);
    j["verdict"] = ckl::to_string(rep.verdict);
    j["exceptional_fraction"] = rep.exceptional_fraction;
    if (rep.rank >= 0) {
        j["rank"] = rep.rank;
        j["rank_constant"] = rep.rank_constant;
    } else {
        j["rank"] = nullptr;
        j["rank_constant"] = nullptr;
    }
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    return j;
}

std::vector<double> deltas_from(const json& cfg, const char* key, std::vector<double> fallback) {
    if (cfg.contains(key)) return cfg.at(key).get<std::vector<double>>();
    return fallback;
}

int run_phase_info(const json& cfg, const fs::path& out, std::uint64_t seed) {
    ckl::PhaseSpec phase = phase_from_config(cfg, cfg.value("builtin", ""));
    int samples = cfg.value("samples", 512);
    ckl::NondegeneracyReport rep = ckl::verify_nondegeneracy(phase, samples, seed);
    ckl::ExponentTable table(phase.n());
    json j;
    j["phase"] = ckl::phase_to_json(phase);
    j["H1_ok"] = rep.H1_ok;
    j["H2_ok"] = rep.H2_ok;
    j["min_abs_det_hess_xy"] = rep.min_abs_det_hess_xy;
    j["min_abs_det_curvature"] = rep.min_abs_det_curvature;
    j["samples"] = rep.samples;
    j["exponents"] = {{"p_crit", table.p_crit()}, {"q_crit", table.q_crit()},
                      {"d_crit", table.d_crit()}, {"m_crit", table.m_crit()},
                      {"beta_at_p_crit", table.beta(table.p_crit())},
                      {"alpha_H_at_2", table.alpha_H(2.0)},
                      {"alpha_LS_at_q_crit", table.alpha_LS(table.q_crit())}};
    write_json(out / "phase_info_summary.json", j);
    return 0;
}

int run_hypothesis_check(const json& cfg, const fs::path& out, std::uint64_t seed,
                         const std::string& shortcut) {
    ckl::PhaseSpec phase = phase_from_config(cfg, shortcut);
    double tol = cfg.value("tol", 1e-8);
    int y_samples = cfg.value("y_samples", 10000);
    int t_points = cfg.value("t_points", 257);
    int d = cfg.value("d", 6);
    int D = cfg.value("D", 12);
    int samples2 = cfg.value("samples", 256);

    json j;
    bool inconclusive = false;
    if (phase.translation_invariant()) {
        ckl::HypothesisReport w = ckl::check_weak_hypothesis_I(phase, tol);
        ckl::HypothesisReport k = ckl::check_hypothesis_I(phase, D, y_samples, t_points, tol, seed);
        j["WeakI"] = report_to_json(w);
        j["KakeyaI"] = report_to_json(k);
        inconclusive |= w.verdict == ckl::Verdict::Inconclusive;
        inconclusive |= k.verdict == ckl::Verdict::Inconclusive;
    }
    ckl::HypothesisReport n2 = ckl::check_hypothesis_II(phase, d, D, samples2, tol, seed);
    j["NikodymII"] = report_to_json(n2);
    inconclusive |= n2.verdict == ckl::Verdict::Inconclusive;
    write_json(out / "hypothesis_summary.json", j);

    std::string csv = "hypothesis,verdict,exceptional_fraction,rank,rank_constant,samples,seed\n";
    for (const auto& [key, rep] : j.items()) {
        csv += key + "," + rep.at("verdict").get<std::string>() + "," +
               fmt(rep.at("exceptional_fraction").get<double>()) + ",";
        csv += rep.at("rank").is_null() ? "" : std::to_string(rep.at("rank").get<int>());
        csv += ",";
        csv += rep.at("rank_constant").is_null()
                   ? ""
                   : (rep.at("rank_constant").get<bool>() ? "true" : "false");
        csv += "," + std::to_string(rep.at("samples").get<int>()) + "," +
               std::to_string(rep.at("seed").get<std::uint64_t>()) + "\n";
    }
    write_text(out / "hypothesis_verdicts.csv", csv);
    return inconclusive ? 2 : 0;
}

int run_maximal_norm(const json& cfg, const fs::path& out, std::uint64_t seed, bool nikodym) {
    ckl::PhaseSpec phase = phase_from_config(cfg, cfg.value("builtin", ""));
    double p = cfg.value("p", 2.0);
    double s = cfg.value("s", 1.0);
    std::string suite_name = cfg.value("suite", nikodym ? "SingleTube" : "RandomFields");
    ckl::TestSuite suite;
    if (suite_name == "NeighborhoodOfSurface") suite = ckl::TestSuite::NeighborhoodOfSurface;
    else if (suite_name == "SingleTube") suite = ckl::TestSuite::SingleTube;
    else if (suite_name == "RandomFields") suite = ckl::TestSuite::RandomFields;
    else throw ckl::ConfigError("unknown suite: " + suite_name);

    std::vector<double> deltas = deltas_from(cfg, "deltas", {1.0 / 16, 1.0 / 32, 1.0 / 64});
    std::vector<std::pair<double, double>> pts;
    for (double d : deltas) {
        double ratio = nikodym ? ckl::nikodym_norm_lower(phase, d, p, s, suite, seed)
                               : ckl::operator_norm_lower(phase, d, p, s, suite, seed);
        pts.emplace_back(d, ratio);
    }
    ckl::ScalingFit fit = ckl::fit_scaling(pts);
    std::string csv = "delta,p,s,norm_lower,fitted_slope\n";
    for (const auto& [d, r] : pts)
        csv += fmt(d) + "," + fmt(p) + "," + fmt(s) + "," + fmt(r) + "," + fmt(fit.slope) + "\n";
    const char* base = nikodym ? "nikodym_norm" : "maximal_norm";
    write_text(out / (std::string(base) + "_ladder.csv"), csv);
    json j = fit_to_json(fit);
    j["p"] = p;
    j["s"] = s;
    j["suite"] = suite_name;
    write_json(out / (std::string(base) + "_summary.json"), j);
    return 0;
}

int run_sublevel(const json& cfg, const fs::path& out, std::uint64_t seed) {
    std::string name = cfg.value("ensemble", "t2_ty");
    ckl::Ensemble ens;
    if (name == "t2_ty") ens = ckl::ensemble_t2_ty();
    else if (name == "t2_degenerate") ens = ckl::ensemble_t2_degenerate();
    else if (name == "phase_minors")
        ens = ckl::ensemble_phase_minors(phase_from_config(cfg, cfg.value("builtin", "")));
    else throw ckl::ConfigError("unknown ensemble: " + name);

    std::string mode_name = cfg.value("mode", "Averaged");
    ckl::SublevelMode mode =
        mode_name == "Slice" ? ckl::SublevelMode::Slice : ckl::SublevelMode::Averaged;
    std::vector<double> sigmas = deltas_from(cfg, "sigmas", ckl::default_sigma_ladder());
    int y_samples = cfg.value("y_samples", 512);
    int t_points = cfg.value("t_points", 32768);

    ckl::SublevelProfile prof = ckl::kappa_experiment(ens, mode, sigmas, y_samples, t_points, seed);
    std::string csv = "sigma,measure,mode,ensemble_id\n";
    for (std::size_t i = 0; i < prof.sigmas.size(); ++i)
        csv += fmt(prof.sigmas[i]) + "," + fmt(prof.measures[i]) + "," + mode_name + "," +
               prof.ensemble_id + "\n";
    write_text(out / "sublevel_profile.csv", csv);
    json j;
    j["ensemble"] = prof.ensemble_id;
    j["mode"] = mode_name;
    j["fitted_kappa"] = prof.fitted_kappa;
    j["fitted_C"] = prof.fitted_C;
    j["fit_residual"] = prof.fit_residual;
    j["power_law"] = prof.power_law;
    j["saturated"] = prof.saturated;
    write_json(out / "sublevel_summary.json", j);
    return 0;
}

int run_counterexample(const json& cfg, const fs::path& out, std::uint64_t seed) {
    int samples = cfg.value("samples", 10000);
    std::vector<double> deltas =
        deltas_from(cfg, "deltas", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
    std::vector<double> ps = deltas_from(cfg, "p_list", {2.0, 3.0});

    ckl::SurfaceContainmentReport sc = ckl::verify_surface_containment(samples, 1e-10, seed);
    ckl::ScalingFit vol = ckl::compression_volume_scan(deltas);

    ckl::PhaseSpec phase = ckl::PhaseSpec::counterexample();
    json j;
    j["max_surface_deviation"] = sc.max_surface_deviation;
    j["max_closed_form_deviation"] = sc.max_closed_form_deviation;
    j["volume_scan"] = fit_to_json(vol);

    std::string csv = "delta,p,s,norm_lower,fitted_slope\n";
    json fits = json::array();
    for (double p : ps) {
        std::vector<std::pair<double, double>> pts;
        for (double d : deltas) {
            double r =
                ckl::operator_norm_lower(phase, d, p, 1.0, ckl::TestSuite::NeighborhoodOfSurface, seed);
            pts.emplace_back(d, r);
        }
        ckl::ScalingFit fit = ckl::fit_scaling(pts);
        for (const auto& [d, r] : pts)
            csv += fmt(d) + "," + fmt(p) + ",1," + fmt(r) + "," + fmt(fit.slope) + "\n";
        json fj = fit_to_json(fit);
        fj["p"] = p;
        fits.push_back(fj);
    }
    j["norm_ladders"] = fits;

    // Jacobian degeneration on Y_circ samples
    ckl::Rng rng(seed);
    double worstA = 0, worstB = 0, worstC = 0;
    int got = 0;
    while (got < cfg.value("jacobian_samples", 1000)) {
        Eigen::VectorXd y(2);
        y << rng.uniform(0.5, 0.9), rng.uniform(0.5, 0.9);
        if (!ckl::in_y_circ(y)) continue;
        ++got;
        auto co = ckl::jacobian_coefficients(
            [](const Eigen::VectorXd& v) { return ckl::counterexample_omega(v); }, y);
        worstA = std::max(worstA, std::abs(co.A));
        worstB = std::max(worstB, std::abs(co.B));
        worstC = std::max(worstC, std::abs(co.C));
    }
    j["jacobian_max_abs"] = {{"A", worstA}, {"B", worstB}, {"C", worstC}};
    write_text(out / "counterexample_ladder.csv", csv);
    write_json(out / "counterexample_summary.json", j);
    return 0;
}

int run_grain_count(const json& cfg, const fs::path& out, std::uint64_t seed) {
    ckl::PhaseSpec phase = phase_from_config(cfg, cfg.value("builtin", ""));
    double delta = cfg.value("delta", 1.0 / 32);
    double lambda = cfg.value("lambda", 0.5);
    std::string rule_name = cfg.value("centre_rule", "FixedZero");
    ckl::CentreRule rule;
    if (rule_name == "FixedZero") rule = ckl::CentreRule::FixedZero;
    else if (rule_name == "CounterexampleOmega") rule = ckl::CentreRule::CounterexampleOmega;
    else if (rule_name == "RandomSeeded") rule = ckl::CentreRule::RandomSeeded;
    else throw ckl::ConfigError("unknown centre rule: " + rule_name);

    ckl::TubeFamily fam = ckl::build_family(phase, delta, ckl::Separation::Direction, rule, seed);

    ckl::Grain grain;
    double rho = cfg.value("grain_rho", 1.0);
    Eigen::VectorXd center = Eigen::VectorXd::Zero(phase.n());
    if (cfg.contains("grain_center")) {
        auto c = cfg.at("grain_center").get<std::vector<double>>();
        center = Eigen::Map<Eigen::VectorXd>(c.data(), c.size());
    }
    if (cfg.value("grain", "log_surface") == "log_surface") {
        grain = ckl::make_log_surface_grain(delta, rho, center);
    } else {
        std::vector<ckl::Polynomial> polys;
        for (const auto& pj : cfg.at("polys")) polys.push_back(ckl::polynomial_from_json(pj));
        grain = ckl::make_polynomial_grain(polys, delta, rho, center);
    }

    int count = ckl::nonconcentration_count(fam, grain, lambda);
    std::string csv = "tube_index,fraction\n";
    for (std::size_t i = 0; i < fam.tubes.size(); ++i)
        csv += std::to_string(i) + "," +
               fmt(ckl::tube_grain_fraction(phase, fam.tubes[i], grain)) + "\n";
    write_text(out / "grain_fractions.csv", csv);
    json j;
    j["count"] = count;
    j["family_size"] = fam.tubes.size();
    j["lambda"] = lambda;
    j["delta"] = delta;
    write_json(out / "grain_count_summary.json", j);
    return 0;
}

int run_wongkew(const json& cfg, const fs::path& out, std::uint64_t seed) {
    (void)seed;
    std::vector<ckl::Polynomial> polys;
    if (cfg.contains("polys"))
        for (const auto& pj : cfg.at("polys")) polys.push_back(ckl::polynomial_from_json(pj));
    else
        polys.push_back(ckl::Polynomial(
            3, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}, {{0, 0, 0}, -0.25}}));
    std::vector<double> deltas = deltas_from(cfg, "deltas", {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    ckl::Box box;
    if (cfg.contains("box")) {
        auto lo = cfg.at("box").at("lo").get<std::vector<double>>();
        auto hi = cfg.at("box").at("hi").get<std::vector<double>>();
        box.lo = Eigen::Map<Eigen::VectorXd>(lo.data(), lo.size());
        box.hi = Eigen::Map<Eigen::VectorXd>(hi.data(), hi.size());
    } else {
        box.lo = Eigen::VectorXd::Constant(3, -0.66);
        box.hi = Eigen::VectorXd::Constant(3, 0.66);
    }
    ckl::ScalingFit fit = ckl::neighborhood_volume_fit(polys, deltas, box);
    std::string csv = "delta,measure\n";
    for (const auto& [d, m] : fit.points) csv += fmt(d) + "," + fmt(m) + "\n";
    write_text(out / "wongkew_ladder.csv", csv);
    write_json(out / "wongkew_summary.json", fit_to_json(fit));
    return 0;
}

int run_oscillatory(const json& cfg, const fs::path& out, std::uint64_t seed) {
    ckl::PhaseSpec phase = phase_from_config(cfg, cfg.value("builtin", ""));
    double q = cfg.value("q", 4.0);
    double p_in = cfg.value("p_in", 2.0);
    std::vector<double> lambdas = deltas_from(cfg, "lambdas", {8.0, 16.0, 32.0});
    std::string suite_name = cfg.value("suite", "ConstantOne");
    ckl::OscSuite suite;
    if (suite_name == "ConstantOne") suite = ckl::OscSuite::ConstantOne;
    else if (suite_name == "CapFunctions") suite = ckl::OscSuite::CapFunctions;
    else if (suite_name == "RandomSigns") suite = ckl::OscSuite::RandomSigns;
    else throw ckl::ConfigError("unknown oscillatory suite: " + suite_name);
    std::string mode_name = cfg.value("mode", "Hormander");
    ckl::OscMode mode =
        mode_name == "LocalSmoothing" ? ckl::OscMode::LocalSmoothing : ckl::OscMode::Hormander;

    ckl::OscExperiment exp = ckl::norm_scaling_experiment(phase, q, lambdas, suite, mode, p_in, seed);
    std::string csv = "lambda,q,norm_ratio\n";
    for (const auto& row : exp.rows) csv += fmt(row.lambda) + "," + fmt(row.q) + "," + fmt(row.ratio) + "\n";
    write_text(out / "oscillatory_ladder.csv", csv);
    json j = fit_to_json(exp.fit);
    j["suite"] = suite_name;
    j["mode"] = mode_name;
    j["q"] = q;
    write_json(out / "oscillatory_summary.json", j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curved Kakeya/Nikodym and oscillatory integral laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand name

    std::string config_path, out_dir = ".", phase_shortcut;
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker thread count");
    app.add_option("--seed", seed, "seed for randomized suites");

    auto* c_info = app.add_subcommand("phase-info", "nondegeneracy report and exponent table");
    auto* c_hyp = app.add_subcommand("hypothesis-check", "non-compression hypothesis verdicts");
    c_hyp->add_option("--phase", phase_shortcut, "builtin phase shortcut");
    auto* c_max = app.add_subcommand("maximal-norm", "Kakeya maximal operator norm ladder");
    auto* c_nik = app.add_subcommand("nikodym-norm", "Nikodym maximal operator norm ladder");
    auto* c_sub = app.add_subcommand("sublevel", "uniform sublevel kappa experiments");
    auto* c_cex = app.add_subcommand("counterexample", "compressed Kakeya family experiments");
    auto* c_grain = app.add_subcommand("grain-count", "tube-in-grain concentration counting");
    auto* c_wong = app.add_subcommand("wongkew", "variety neighbourhood volume scaling");
    auto* c_osc = app.add_subcommand("oscillatory", "oscillatory operator norm scaling");

    CLI11_PARSE(app, argc, argv);

    try {
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        json cfg = load_config(config_path);
        fs::path out(out_dir);
        fs::create_directories(out);

        if (c_info->parsed()) return run_phase_info(cfg, out, seed);
        if (c_hyp->parsed()) return run_hypothesis_check(cfg, out, seed, phase_shortcut);
        if (c_max->parsed()) return run_maximal_norm(cfg, out, seed, false);
        if (c_nik->parsed()) return run_maximal_norm(cfg, out, seed, true);
        if (c_sub->parsed()) return run_sublevel(cfg, out, seed);
        if (c_cex->parsed()) return run_counterexample(cfg, out, seed);
        if (c_grain->parsed()) return run_grain_count(cfg, out, seed);
        if (c_wong->parsed()) return run_wongkew(cfg, out, seed);
        if (c_osc->parsed()) return run_oscillatory(cfg, out, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
