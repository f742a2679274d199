#include "udefit/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

#include "json.hpp"
#include "udefit/errors.hpp"
#include "udefit/simulate.hpp"

namespace udefit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line, const char* what) {
    const std::string_view token = trim(cell);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw DataError("line " + std::to_string(line) + ": invalid " + what + " '" +
                        std::string(token) + "'");
    if (!std::isfinite(value))
        throw DataError("line " + std::to_string(line) + ": non-finite " + what);
    return value;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed while writing " + path.string());
}

RegressionFamily resolve_family(const ComponentFitSpec& spec, double first_estimate,
                                const std::string& context) {
    const bool logistic =
        spec.kind == FamilyKind::logistic_growth || spec.kind == FamilyKind::logistic_decay;
    if (!logistic) {
        if (spec.fixed_source != ComponentFitSpec::FixedSource::none)
            throw ConfigError(context + ": a fixed constant only applies to logistic families");
        switch (spec.kind) {
            case FamilyKind::linear: return RegressionFamily::linear();
            case FamilyKind::exponential: return RegressionFamily::exponential();
            case FamilyKind::gaussian: return RegressionFamily::gaussian();
            default: break;
        }
        throw ConfigError(context + ": unknown regression family");
    }
    double fixed = 0.0;
    switch (spec.fixed_source) {
        case ComponentFitSpec::FixedSource::literal: fixed = spec.fixed_value; break;
        case ComponentFitSpec::FixedSource::first_estimate: fixed = first_estimate; break;
        case ComponentFitSpec::FixedSource::none:
            throw ConfigError(context +
                              ": logistic families need a fixed constant (literal value or "
                              "first window estimate)");
    }
    return spec.kind == FamilyKind::logistic_growth ? RegressionFamily::logistic_growth(fixed)
                                                    : RegressionFamily::logistic_decay(fixed);
}

RegressionFit fit_component(const RegressionFamily& family, std::span<const double> t,
                            std::span<const double> y, const GaussNewtonConfig& gn,
                            const std::string& context) {
    try {
        if (family.kind == FamilyKind::linear) return fit_linear_ols(t, y);
        return gauss_newton_fit(family, t, y, gn);
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    }
}

// "t - c" with the sign of c folded in
std::string shifted_t(double c) {
    if (c == 0.0) return "t";
    return c > 0.0 ? "t - " + fmt6(c) : "t + " + fmt6(-c);
}

// Trajectory expression with an outer multiplicative scale folded into the
// leading coefficient (every family has one).
std::string component_expr(const RegressionFit& fit, double scale) {
    const std::vector<double>& b = fit.beta;
    switch (fit.family.kind) {
        case FamilyKind::linear: return fmt6(scale * b[0]) + " + " + fmt6(scale * b[1]) + "*t";
        case FamilyKind::exponential:
            return fmt6(scale * b[0]) + "*exp(" + fmt6(-b[1]) + "*t)";
        case FamilyKind::logistic_growth:
            return fmt6(scale * fit.family.fixed) + "/(1 + " + fmt6(b[0]) + "*exp(" +
                   fmt6(-b[1]) + "*t))";
        case FamilyKind::logistic_decay:
            return fmt6(scale * fit.family.fixed) + "/(1 + " + fmt6(b[0]) + "*exp(" + fmt6(b[1]) +
                   "*t))";
        case FamilyKind::gaussian:
            return fmt6(scale * b[0]) + "*exp(-((" + shifted_t(b[1]) + ")/" + fmt6(b[2]) +
                   ")^2)";
    }
    return "?";
}

ordered_json fit_to_json(const RegressionFit& fit) {
    ordered_json j;
    j["family"] = std::string(fit.family.name());
    if (fit.family.kind == FamilyKind::logistic_growth ||
        fit.family.kind == FamilyKind::logistic_decay)
        j["fixed"] = fit.family.fixed;
    j["beta"] = fit.beta;
    j["r_squared"] = fit.r_squared;
    j["r_squared_alt"] = fit.r_squared_alt;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["final_max_step"] = fit.final_max_step;
    return j;
}

void write_scatter(const std::filesystem::path& path, const std::vector<WindowEstimate>& ests,
                   bool drift, std::size_t component) {
    std::string out = "t,value\n";
    for (const WindowEstimate& e : ests) {
        const double v = drift ? e.mu[component] : e.sigma[component];
        out += fmt17(e.anchor_time) + "," + fmt17(v) + "\n";
    }
    write_text(path, out);
}

void write_curve(const std::filesystem::path& path, const RegressionFit& fit, double t_first,
                 double t_last) {
    constexpr int kSamples = 200;
    std::string out = "t,value\n";
    for (int i = 0; i < kSamples; ++i) {
        const double t =
            t_first + (t_last - t_first) * static_cast<double>(i) / (kSamples - 1);
        out += fmt17(t) + "," + fmt17(eval_family(fit.family, fit.beta, t)) + "\n";
    }
    write_text(path, out);
}

} // namespace

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

Dataset ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const std::size_t comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw DataError("line " + std::to_string(line_no) + ": expected 2 comma-separated "
                            "fields, got '" + std::string(row) + "'");
        const std::string_view left = row.substr(0, comma);
        const std::string_view right = row.substr(comma + 1);
        if (!header_seen) {
            if (trim(left) != "t" || trim(right) != "x")
                throw DataError("line " + std::to_string(line_no) +
                                ": expected header 't,x', got '" + std::string(row) + "'");
            header_seen = true;
            continue;
        }
        const double t = parse_cell(left, line_no, "time");
        const double x = parse_cell(right, line_no, "value");
        if (!times.empty() && t <= times.back())
            throw DataError("line " + std::to_string(line_no) +
                            ": time values must be strictly increasing (" + fmt17(t) +
                            " after " + fmt17(times.back()) + ")");
        times.push_back(t);
        values.push_back(x);
    }
    if (!header_seen) throw DataError(path.string() + ": missing 't,x' header");
    if (times.size() < 2)
        throw DataError(path.string() + ": has " + std::to_string(times.size()) +
                        " data row(s); need at least 2");
    return {path.stem().string(), TimeSeries(TimeGrid(std::move(times)), std::move(values)),
            "ingested from " + path.filename().string()};
}

RunReport run_estimation(const PipelineConfig& cfg, const Dataset& ds) {
    if (cfg.mu_fits.size() != cfg.model.drift_arity())
        throw ConfigError("mu fit assignments (" + std::to_string(cfg.mu_fits.size()) +
                          ") do not match the model drift arity " +
                          std::to_string(cfg.model.drift_arity()));
    if (cfg.sigma_fits.size() != cfg.model.diffusion_arity())
        throw ConfigError("sigma fit assignments (" + std::to_string(cfg.sigma_fits.size()) +
                          ") do not match the model diffusion arity " +
                          std::to_string(cfg.model.diffusion_arity()));

    SlidingResult sliding = sliding_estimates(cfg.model, ds.series, cfg.window);
    if (sliding.estimates.empty())
        throw NumericalError("no window produced an estimate (all " +
                             std::to_string(sliding.failures.size()) + " windows failed)");

    RunReport report{ds.name,
                     ds.series.t(0),
                     ds.series.t(ds.series.size() - 1),
                     cfg,
                     std::move(sliding.estimates),
                     std::move(sliding.failures),
                     {},
                     {},
                     ""};

    std::vector<double> t(report.estimates.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = report.estimates[i].anchor_time;

    std::vector<double> y(report.estimates.size());
    for (std::size_t j = 0; j < cfg.mu_fits.size(); ++j) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = report.estimates[i].mu[j];
        const std::string context = "mu component " + std::to_string(j + 1);
        const RegressionFamily family = resolve_family(cfg.mu_fits[j], y[0], context);
        report.mu_fits.push_back(fit_component(
            family, t, y, cfg.gn, context + " (" + std::string(family.name()) + ")"));
    }
    for (std::size_t j = 0; j < cfg.sigma_fits.size(); ++j) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = report.estimates[i].sigma[j];
        const std::string context = "sigma component " + std::to_string(j + 1);
        const RegressionFamily family = resolve_family(cfg.sigma_fits[j], y[0], context);
        report.sigma_fits.push_back(fit_component(
            family, t, y, cfg.gn, context + " (" + std::string(family.name()) + ")"));
    }

    report.rendered_ude = render_ude(cfg.model, report.mu_fits, report.sigma_fits);
    return report;
}

void emit_report(const RunReport& report, const std::filesystem::path& out_dir) {
    if (report.estimates.empty())
        throw ConfigError("refusing to emit a report with no window estimates");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir.string());

    const std::size_t j1 = report.config.model.drift_arity();
    const std::size_t j2 = report.config.model.diffusion_arity();

    std::string csv = "m,t_m";
    for (std::size_t j = 1; j <= j1; ++j) csv += ",mu_" + std::to_string(j);
    for (std::size_t j = 1; j <= j2; ++j) csv += ",sigma_" + std::to_string(j);
    csv += ",rss,clamped\n";
    for (const WindowEstimate& e : report.estimates) {
        csv += std::to_string(e.window_index) + "," + fmt17(e.anchor_time);
        for (double v : e.mu) csv += "," + fmt17(v);
        for (double v : e.sigma) csv += "," + fmt17(v);
        csv += "," + fmt17(e.rss) + "," + (e.clamped ? "1" : "0") + "\n";
    }
    write_text(out_dir / "estimates.csv", csv);

    ordered_json fits;
    fits["dataset"] = report.dataset_name;
    ordered_json model;
    model["family"] = std::string(model_family_name(report.config.model.family));
    if (report.config.model.family == ModelFamily::scaled_affine) {
        model["k0"] = report.config.model.k0;
        model["k1"] = report.config.model.k1;
    }
    if (report.config.model.family == ModelFamily::affine_drift_split_diff)
        model["split_weights"] = report.config.model.split_weights;
    fits["model"] = model;
    ordered_json window;
    window["n"] = report.config.window.n;
    window["stride"] = report.config.window.stride;
    window["anchor"] =
        report.config.window.anchor == WindowAnchor::start ? "start" : "center";
    fits["window"] = window;
    fits["mu"] = ordered_json::array();
    for (const RegressionFit& fit : report.mu_fits) fits["mu"].push_back(fit_to_json(fit));
    fits["sigma"] = ordered_json::array();
    for (const RegressionFit& fit : report.sigma_fits) fits["sigma"].push_back(fit_to_json(fit));
    if (!report.failures.empty()) {
        fits["failed_windows"] = ordered_json::array();
        for (const WindowFailure& f : report.failures)
            fits["failed_windows"].push_back({{"window", f.window_index}, {"error", f.message}});
    }
    fits["rendered_ude"] = report.rendered_ude;
    write_text(out_dir / "fits.json", fits.dump(2) + "\n");

    if (report.config.format == OutputFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const WindowEstimate& e : report.estimates) {
            ordered_json row;
            row["m"] = e.window_index;
            row["t_m"] = e.anchor_time;
            row["mu"] = e.mu;
            row["sigma"] = e.sigma;
            row["rss"] = e.rss;
            row["clamped"] = e.clamped;
            rows.push_back(row);
        }
        write_text(out_dir / "estimates.json", rows.dump(2) + "\n");
    }

    for (std::size_t j = 0; j < j1; ++j) {
        const std::string stem = "plot_mu" + std::to_string(j + 1);
        write_scatter(out_dir / (stem + "_scatter.csv"), report.estimates, true, j);
        write_curve(out_dir / (stem + "_curve.csv"), report.mu_fits[j], report.t_first,
                    report.t_last);
    }
    for (std::size_t j = 0; j < j2; ++j) {
        const std::string stem = "plot_sigma" + std::to_string(j + 1);
        write_scatter(out_dir / (stem + "_scatter.csv"), report.estimates, false, j);
        write_curve(out_dir / (stem + "_curve.csv"), report.sigma_fits[j], report.t_first,
                    report.t_last);
    }
}

Dataset simulate_dataset(const ModelSpec& model, const ParamTrajectory& mu_traj,
                         const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                         std::uint64_t seed, std::string name) {
    const std::vector<double> alphas = uniform_alpha_stream(seed, grid.size() - 1);
    TimeSeries series = euler_simulate(model, mu_traj, sigma_traj, x0, grid, alphas);
    return {std::move(name), std::move(series), "simulated (seed " + std::to_string(seed) + ")"};
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::string out = "t,x\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out += fmt17(series.t(i)) + "," + fmt17(series.x(i)) + "\n";
    write_text(path, out);
}

std::string render_ude(const ModelSpec& model, const std::vector<RegressionFit>& mu_fits,
                       const std::vector<RegressionFit>& sigma_fits) {
    if (mu_fits.size() != model.drift_arity() || sigma_fits.size() != model.diffusion_arity())
        throw ConfigError("render_ude fit arities do not match the model");

    std::string drift;
    switch (model.family) {
        case ModelFamily::multiplicative:
            drift = "(" + component_expr(mu_fits[0], 1.0) + ")*X_t";
            break;
        case ModelFamily::affine_drift_const_diff:
        case ModelFamily::affine_drift_split_diff:
            drift = component_expr(mu_fits[0], 1.0) + " + (" + component_expr(mu_fits[1], 1.0) +
                    ")*X_t";
            break;
        case ModelFamily::scaled_affine:
            drift = component_expr(mu_fits[0], model.k0);
            drift += model.k1 >= 0.0 ? " - " + fmt6(model.k1) + "*X_t"
                                     : " + " + fmt6(-model.k1) + "*X_t";
            break;
    }

    std::string diffusion;
    switch (model.family) {
        case ModelFamily::multiplicative:
            diffusion = "(" + component_expr(sigma_fits[0], 1.0) + ")*X_t";
            break;
        case ModelFamily::affine_drift_split_diff:
            diffusion = "(" + component_expr(sigma_fits[0], 1.0) + " + " +
                        component_expr(sigma_fits[1], 1.0) + ")*X_t";
            break;
        case ModelFamily::affine_drift_const_diff:
        case ModelFamily::scaled_affine:
            diffusion = component_expr(sigma_fits[0], 1.0);
            break;
    }

    return "dX_t = (" + drift + ")dt + (" + diffusion + ")dC_t";
}

PipelineConfig alcohol_preset() {
    PipelineConfig cfg;
    cfg.model = ModelSpec::scaled_affine(0.7, 0.2);
    cfg.window.n = 10;
    cfg.mu_fits = {{FamilyKind::gaussian, ComponentFitSpec::FixedSource::none, 0.0}};
    cfg.sigma_fits = {{FamilyKind::gaussian, ComponentFitSpec::FixedSource::none, 0.0}};
    cfg.gn.damping = true;
    return cfg;
}

PipelineConfig covid_preset() {
    PipelineConfig cfg;
    cfg.model = ModelSpec::multiplicative();
    cfg.window.n = 10;
    cfg.mu_fits = {{FamilyKind::logistic_decay, ComponentFitSpec::FixedSource::first_estimate,
                    0.0}};
    cfg.sigma_fits = {{FamilyKind::logistic_decay, ComponentFitSpec::FixedSource::first_estimate,
                       0.0}};
    cfg.gn.damping = true;
    return cfg;
}

} // namespace udefit
