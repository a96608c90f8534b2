#include "oulevy/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "oulevy/d1_core.hpp"
#include "oulevy/fourier_approx.hpp"

namespace oulevy {

namespace {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
        f_ = std::fopen(path.c_str(), "w");
        if (f_ == nullptr) throw std::runtime_error("cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i)
            std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
        std::fprintf(f_, "\n");
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            std::fprintf(f_, "%s%.17g", i ? "," : "", vals[i]);
        std::fprintf(f_, "\n");
    }

private:
    std::FILE* f_ = nullptr;
};

struct VerdictSink {
    Json verdicts = Json::array();
    bool any_fail = false;
    bool any_inconclusive = false;

    void add(const std::string& check, const std::string& identity, Json inputs,
             double discrepancy, double budget, const std::string& status) {
        verdicts.push_back(Json{{"check", check},
                                {"identity", identity},
                                {"inputs", std::move(inputs)},
                                {"discrepancy", discrepancy},
                                {"budget", budget},
                                {"status", status}});
        if (status == "fail") any_fail = true;
        if (status == "inconclusive") any_inconclusive = true;
    }
    void add_bool(const std::string& check, const std::string& identity, Json inputs,
                  double discrepancy, double budget) {
        add(check, identity, std::move(inputs), discrepancy, budget,
            discrepancy <= budget ? "pass" : "fail");
    }
    int exit_code() const { return any_fail ? 1 : (any_inconclusive ? 2 : 0); }
};

std::uint64_t pick_seed(const Json& config, const RunOverrides& ov) {
    if (ov.seed) return *ov.seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    return 12345;
}

std::vector<double> grid_from_config(const Json& j) {
    if (j.is_array()) {
        std::vector<double> g;
        for (const auto& v : j) g.push_back(v.get<double>());
        return g;
    }
    const double t_end = require_field(j, "t_end", "grid").get<double>();
    const int points = require_field(j, "points", "grid").get<int>();
    if (points < 2 || !(t_end > 0.0))
        throw std::invalid_argument("config: grid needs t_end > 0 and points >= 2");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = t_end * i / (points - 1);
    return g;
}

PathScheme scheme_from_config(const Json& config) {
    PathScheme s;
    if (config.contains("eps")) s.small_jumps.cut = config.at("eps").get<double>();
    if (config.contains("max_step")) s.max_step = config.at("max_step").get<double>();
    if (config.contains("trunc") && !config.at("trunc").is_null())
        s.large_jump_trunc = config.at("trunc").get<double>();
    return s;
}

SmoothFunction test_function_from_config(const Json& j) {
    const std::string kind = require_field(j, "kind", "f").get<std::string>();
    if (kind == "bump")
        return make_bump(vec_from_json(require_field(j, "center", "f"), "f/center"),
                         require_field(j, "radius", "f").get<double>());
    if (kind == "gaussian") {
        return make_gaussian_profile(require_field(j, "dim", "f").get<int>(),
                                     require_field(j, "s", "f").get<double>());
    }
    throw std::invalid_argument("config: f/kind must be bump or gaussian");
}

// ---------------------------------------------------------------------------

void run_char_check(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                    const std::string& out) {
    const LevyTriplet triplet =
        triplet_from_json(require_field(config, "triplet", ""));
    const double dt = config.value("dt", 0.1);
    const int n_samples = config.value("n_samples", 100000);
    std::vector<Vec> freqs;
    if (config.contains("frequencies")) {
        for (const auto& u : config.at("frequencies"))
            freqs.push_back(vec_from_json(u, "frequencies"));
    } else {
        for (double base : {0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 0.25, 3.0}) {
            Vec u = Vec::Zero(triplet.dim());
            u[0] = base;
            if (triplet.dim() > 1) u[1] = 0.5 * base;
            freqs.push_back(u);
        }
    }
    const std::uint64_t seed = pick_seed(config, ov);
    IncrementSampler sampler(triplet);

    // empirical characteristic function, one deterministic stream per sample
    std::vector<Cplx> ecf(freqs.size(), Cplx{});
    for (int i = 0; i < n_samples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const Vec z = sampler.sample(dt, rng);
        for (std::size_t k = 0; k < freqs.size(); ++k)
            ecf[k] += std::exp(Cplx{0.0, freqs[k].dot(z)});
    }
    CsvWriter csv(out + "/char_check.csv",
                  {"u_1", "psi_re", "psi_im", "target_re", "target_im", "ecf_re",
                   "ecf_im", "tolerance"});
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        ecf[k] /= static_cast<double>(n_samples);
        const auto psi = char_exponent(triplet, freqs[k]);
        const Cplx target = std::exp(-dt * psi.value);
        double bias = 0.0;
        if (sampler.substitution_enabled()) {
            const double u3 = std::pow(freqs[k].norm(), 3);
            bias = dt * u3 * sampler.substitution_bias_third_moment() / 6.0;
        }
        const double tol = 3.0 / std::sqrt(static_cast<double>(n_samples)) + bias +
                           dt * psi.error;
        csv.row({freqs[k][0], psi.value.real(), psi.value.imag(), target.real(),
                 target.imag(), ecf[k].real(), ecf[k].imag(), tol});
        sink.add_bool("char-check", "levy-khintchine-exponent",
                      Json{{"u", vec_to_json(freqs[k])}, {"dt", dt}},
                      std::abs(ecf[k] - target), tol * ov.tol_scale);
    }
}

void run_simulate(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                  const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const Vec x0 = vec_from_json(require_field(config, "x0", ""), "x0");
    const auto grid = grid_from_config(require_field(config, "grid", ""));
    const int n_paths = config.value("n_paths", 1000);
    const PathScheme scheme = scheme_from_config(config);
    const std::uint64_t seed = pick_seed(config, ov);

    PathEnsemble ens =
        simulate_paths(model, x0, grid, n_paths, scheme, seed, ov.threads);
    ens.write_csv(out + "/paths.csv");
    ens.write_binary(out + "/paths.bin");
    Json meta{{"master_seed", seed},
              {"scheme", ens.meta.scheme},
              {"max_step", scheme.max_step},
              {"small_jump_cut", scheme.small_jumps.cut},
              {"large_jump_trunc", std::isfinite(scheme.large_jump_trunc)
                                       ? Json(scheme.large_jump_trunc)
                                       : Json(nullptr)},
              {"x0", vec_to_json(x0)},
              {"n_paths", n_paths}};
    std::ofstream(out + "/paths_meta.json") << meta.dump(2) << "\n";
    sink.add("simulate", "path-ensemble-export",
             Json{{"n_paths", n_paths}, {"grid_points", grid.size()}}, 0.0, 1.0,
             "pass");
}

void run_cauchy(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const TrigPolynomial f = trig_from_json(require_field(config, "f", ""));
    const double t = require_field(config, "t", "").get<double>();
    const Vec x = vec_from_json(require_field(config, "x", ""), "x");
    const double tol = config.value("tol", 1e-5);
    const auto rep = cauchy_residual(model, f, t, x);
    CsvWriter csv(out + "/cauchy.csv",
                  {"t", "residual", "budget", "semigroup_re", "semigroup_im",
                   "integral_re", "integral_im"});
    csv.row({t, rep.residual, rep.budget, rep.semigroup_value.real(),
             rep.semigroup_value.imag(), rep.integral_value.real(),
             rep.integral_value.imag()});
    sink.add_bool("cauchy", "semigroup-integral-identity-forward",
                  Json{{"t", t}, {"x", vec_to_json(x)}}, rep.residual,
                  tol * ov.tol_scale);
}

void run_commutation(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                     const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const SmoothFunction bump =
        test_function_from_config(require_field(config, "f", ""));
    const double t = require_field(config, "t", "").get<double>();
    std::vector<Vec> x_grid;
    for (const auto& xj : require_field(config, "x_grid", ""))
        x_grid.push_back(vec_from_json(xj, "x_grid"));
    const int n_paths = config.value("n_paths", 20000);
    const auto rep =
        commutation_check(model, bump, t, x_grid, n_paths, pick_seed(config, ov),
                          scheme_from_config(config), ov.threads);
    CsvWriter csv(out + "/commutation.csv", {"x_1", "left", "right"});
    for (std::size_t i = 0; i < x_grid.size(); ++i)
        csv.row({x_grid[i][0], rep.left_values[i], rep.right_values[i]});
    sink.add("commutation", "generator-semigroup-commutation",
             Json{{"t", t}, {"method", rep.method}}, rep.max_discrepancy,
             rep.budget * ov.tol_scale,
             rep.max_discrepancy <= rep.budget * ov.tol_scale ? "pass"
                                                              : "inconclusive");
}

void run_ito_gap(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                 const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const SmoothFunction f = test_function_from_config(require_field(config, "f", ""));
    const double t = require_field(config, "t", "").get<double>();
    const Vec x = vec_from_json(require_field(config, "x", ""), "x");
    std::vector<double> levels;
    for (const auto& l : require_field(config, "levels", "")) levels.push_back(l);
    const int n_paths = config.value("n_paths", 50000);
    const auto table = ito_truncation_gap(model, f, t, x, levels, n_paths,
                                          pick_seed(config, ov),
                                          scheme_from_config(config), ov.threads);
    CsvWriter csv(out + "/ito_gap.csv",
                  {"level", "gap", "std_error", "bound", "mean_truncated",
                   "mean_full"});
    for (const auto& row : table.rows) {
        csv.row({row.level, row.gap, row.std_error, row.bound, row.mean_truncated,
                 row.mean_full});
        sink.add_bool("ito-gap", "large-jump-truncation-bound",
                      Json{{"level", row.level}, {"t", t}}, row.gap,
                      (row.bound + 4.0 * row.std_error) * ov.tol_scale);
    }
}

void run_approx(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                const std::string& out) {
    const SmoothFunction f = test_function_from_config(require_field(config, "f", ""));
    std::vector<std::pair<int, int>> schedule;
    if (config.contains("schedule")) {
        for (const auto& nm : config.at("schedule"))
            schedule.emplace_back(nm.at(0).get<int>(), nm.at(1).get<int>());
    } else {
        schedule = {{4, 32}, {8, 128}};
    }
    std::vector<Vec> probes;
    if (config.contains("probes")) {
        for (const auto& p : config.at("probes"))
            probes.push_back(vec_from_json(p, "probes"));
    } else {
        for (double v : {0.0, 0.4, -0.7, 1.1, -1.6}) {
            Vec p = Vec::Zero(f.dim);
            p[0] = v;
            probes.push_back(p);
        }
    }
    const double m_bound = lemma_uniform_bound(f);
    const double pointwise_tol = config.value("pointwise_tol", 1e-3);

    CsvWriter csv(out + "/approx.csv",
                  {"n", "m", "norm_sum", "bound", "probe_index", "probe_error"});
    std::vector<double> last_errors;
    for (const auto& [n, m] : schedule) {
        FourierApproximation approx(f, n);
        const auto norms = approx.grid_norms(m);
        const double norm_sum = norms.value + norms.gradient + norms.hessian;
        sink.add_bool("approx", "uniform-derivative-bound",
                      Json{{"n", n}, {"m", m}}, norm_sum, 1.05 * m_bound);
        const TrigPolynomial fnm = approx.truncate(m);
        last_errors.clear();
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            const double err =
                std::abs(fnm.value(probes[pi]).real() - f.value(probes[pi]));
            last_errors.push_back(err);
            csv.row({static_cast<double>(n), static_cast<double>(m), norm_sum,
                     1.05 * m_bound, static_cast<double>(pi), err});
        }
    }
    double max_err = 0.0;
    for (double e : last_errors) max_err = std::max(max_err, e);
    sink.add_bool("approx", "pointwise-convergence", Json{{"schedule", "last"}},
                  max_err, pointwise_tol * ov.tol_scale);
}

void run_phi_core(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                  const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const int n_random = config.value("n_random", 10);
    const double al4_tol = config.value("al4_tol", 1e-7);
    const double gen_tol = config.value("generator_tol", 1e-6);
    const std::uint64_t seed = pick_seed(config, ov);
    const int d = model.dim();

    CsvWriter csv(out + "/phi_core.csv",
                  {"a", "t", "al4_residual", "al4_budget", "generator_gap"});
    RngStream rng(seed, 17);
    for (int i = 0; i < n_random; ++i) {
        D1Function phi;
        phi.a = rng.uniform(0.5, 1.5);
        phi.h = Vec(d);
        for (int k = 0; k < d; ++k) phi.h[k] = rng.uniform(-2.0, 2.0);
        const double t = rng.uniform(0.2, 1.0);
        Vec x(d);
        for (int k = 0; k < d; ++k) x[k] = rng.uniform(-1.0, 1.0);

        const auto al4 = phi_semigroup_identity(model, phi, t, x);
        sink.add_bool("phi-core", "time-average-invariance",
                      Json{{"a", phi.a}, {"t", t}}, al4.residual,
                      al4_tol * ov.tol_scale);

        const auto closed = apply_L_phi(model, phi, x);
        const auto quad_re = apply_L0(model, phi_as_smooth(model, phi, false), x);
        const auto quad_im = apply_L0(model, phi_as_smooth(model, phi, true), x);
        const double gap =
            std::abs(closed.value - Cplx{quad_re.value, quad_im.value});
        sink.add_bool("phi-core", "generator-closed-form-agreement",
                      Json{{"a", phi.a}}, gap, gen_tol * ov.tol_scale);
        csv.row({phi.a, t, al4.residual, al4.budget, gap});
    }
}

void run_fpk(const Json& config, const RunOverrides& ov, VerdictSink& sink,
             const std::string& out) {
    const OUModel model = model_from_json(require_field(config, "model", ""));
    const Vec x = vec_from_json(require_field(config, "x", ""), "x");
    const double t = require_field(config, "t", "").get<double>();
    const int n_paths = config.value("n_paths", 100000);
    const int snapshots = config.value("snapshots", 50);

    const auto& jf = require_field(config, "f", "");
    FpkObservable observable = [&]() -> FpkObservable {
        const std::string kind = require_field(jf, "kind", "f").get<std::string>();
        if (kind == "trig") return trig_from_json(jf);
        if (kind == "phi") {
            D1Function phi;
            phi.a = require_field(jf, "a", "f").get<double>();
            phi.h = vec_from_json(require_field(jf, "h", "f"), "f/h");
            return phi;
        }
        throw std::invalid_argument("config: fpk f/kind must be trig or phi");
    }();

    const auto rep = fpk_residual(model, observable, x, t, n_paths, snapshots,
                                  pick_seed(config, ov), scheme_from_config(config),
                                  ov.threads);
    CsvWriter csv(out + "/fpk.csv",
                  {"t", "f_mean_re", "f_mean_im", "lf_mean_re", "lf_mean_im",
                   "running_integral_re", "running_integral_im", "residual",
                   "budget"});
    for (const auto& row : rep.rows)
        csv.row({row.t, row.f_mean_re, row.f_mean_im, row.lf_mean_re, row.lf_mean_im,
                 row.running_integral_re, row.running_integral_im, row.residual,
                 rep.budget});
    sink.add_bool("fpk", "measure-equation", Json{{"t", t}, {"n_paths", n_paths}},
                  rep.residual, rep.budget * ov.tol_scale);
}

void run_dim_sweep(const Json& config, const RunOverrides& ov, VerdictSink& sink,
                   const std::string& out) {
    const SpectralModel sm = spectral_from_json(require_field(config, "spectral", ""));
    CoordinateSequence x;
    if (config.contains("x")) {
        x.scale = require_field(config.at("x"), "scale", "x").get<double>();
        x.power = require_field(config.at("x"), "power", "x").get<double>();
    }
    const Vec h_active = vec_from_json(require_field(config, "h_active", ""), "h_active");
    const double t = require_field(config, "t", "").get<double>();
    std::vector<int> dims;
    for (const auto& dj : require_field(config, "dims", "")) dims.push_back(dj);
    const double tol = config.value("tol", 1e-6);
    const double stab_tol = config.value("stabilization_tol", 1e-7);

    const auto rep = dimension_sweep(sm, x, h_active, t, dims);
    CsvWriter csv(out + "/dim_sweep.csv", {"d", "residual", "budget"});
    for (const auto& row : rep.rows)
        csv.row({static_cast<double>(row.d), row.residual, row.budget});
    sink.add_bool("dim-sweep", "finite-rank-stability",
                  Json{{"x_in_domain_surrogate", rep.x_in_domain_surrogate}},
                  rep.max_residual, tol * ov.tol_scale);
    double max_late_change = 0.0;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].d >= 8)
            max_late_change =
                std::max(max_late_change,
                         std::abs(rep.rows[i].residual - rep.rows[i - 1].residual));
    sink.add_bool("dim-sweep", "finite-rank-stabilization", Json{{"from_dim", 8}},
                  max_late_change, stab_tol * ov.tol_scale);
}

}  // namespace

ExperimentOutcome run_experiment(const Json& config, const RunOverrides& overrides) {
    const std::string name =
        require_field(config, "experiment", "").get<std::string>();
    std::filesystem::create_directories(overrides.out_dir);
    VerdictSink sink;
    const std::string& out = overrides.out_dir;
    if (name == "char-check")
        run_char_check(config, overrides, sink, out);
    else if (name == "simulate")
        run_simulate(config, overrides, sink, out);
    else if (name == "cauchy")
        run_cauchy(config, overrides, sink, out);
    else if (name == "commutation")
        run_commutation(config, overrides, sink, out);
    else if (name == "ito-gap")
        run_ito_gap(config, overrides, sink, out);
    else if (name == "approx")
        run_approx(config, overrides, sink, out);
    else if (name == "phi-core")
        run_phi_core(config, overrides, sink, out);
    else if (name == "fpk")
        run_fpk(config, overrides, sink, out);
    else if (name == "dim-sweep")
        run_dim_sweep(config, overrides, sink, out);
    else
        throw std::invalid_argument("config: unknown experiment '" + name + "'");

    std::ofstream(overrides.out_dir + "/verdicts.json") << sink.verdicts.dump(2)
                                                        << "\n";
    return ExperimentOutcome{sink.exit_code(), sink.verdicts};
}

}  // namespace oulevy
