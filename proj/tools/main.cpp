#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "udefit/datasets.hpp"
#include "udefit/errors.hpp"
#include "udefit/kernels.hpp"
#include "udefit/pipeline.hpp"
#include "udefit/simulate.hpp"

namespace {

namespace fs = std::filesystem;

bool log_enabled() {
    const char* v = std::getenv("UDEFIT_LOG");
    return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[udefit] " << msg << "\n";
}

double parse_double(std::string_view token, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw udefit::ConfigError("invalid " + std::string(what) + " '" + std::string(token) +
                                  "'");
    return value;
}

std::vector<double> parse_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = csv.find(',', pos);
        const std::string_view token =
            std::string_view(csv).substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
        out.push_back(parse_double(token, what));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

udefit::ModelSpec make_model(const std::string& family_name, bool k0_set, double k0, bool k1_set,
                             double k1, const std::string& weights) {
    const udefit::ModelFamily family = udefit::parse_model_family(family_name);
    const bool scaled = family == udefit::ModelFamily::scaled_affine;
    const bool split = family == udefit::ModelFamily::affine_drift_split_diff;
    if ((k0_set || k1_set) && !scaled)
        throw udefit::ConfigError("--k0/--k1 only apply to the scaled_affine family");
    if (!weights.empty() && !split)
        throw udefit::ConfigError("--weights only applies to the affine_drift_split_diff family");
    switch (family) {
        case udefit::ModelFamily::multiplicative: return udefit::ModelSpec::multiplicative();
        case udefit::ModelFamily::affine_drift_const_diff:
            return udefit::ModelSpec::affine_drift_const_diff();
        case udefit::ModelFamily::affine_drift_split_diff: {
            if (weights.empty()) return udefit::ModelSpec::affine_drift_split_diff();
            const std::vector<double> w = parse_list(weights, "split weight");
            if (w.size() != 2)
                throw udefit::ConfigError("--weights takes exactly 2 values, got " +
                                          std::to_string(w.size()));
            return udefit::ModelSpec::affine_drift_split_diff(w[0], w[1]);
        }
        case udefit::ModelFamily::scaled_affine:
            if (!k0_set || !k1_set)
                throw udefit::ConfigError("the scaled_affine family requires --k0 and --k1");
            return udefit::ModelSpec::scaled_affine(k0, k1);
    }
    throw udefit::ConfigError("unknown model family");
}

udefit::ComponentFitSpec make_fit_spec(const std::string& family, const std::string& fixed,
                                       const char* flag_name) {
    udefit::ComponentFitSpec spec;
    spec.kind = udefit::parse_family_kind(family);
    const bool logistic = spec.kind == udefit::FamilyKind::logistic_growth ||
                          spec.kind == udefit::FamilyKind::logistic_decay;
    if (!logistic) {
        if (!fixed.empty())
            throw udefit::ConfigError(std::string(flag_name) +
                                      " only applies to the logistic families");
        return spec;
    }
    if (fixed.empty() || fixed == "first") {
        spec.fixed_source = udefit::ComponentFitSpec::FixedSource::first_estimate;
    } else {
        spec.fixed_source = udefit::ComponentFitSpec::FixedSource::literal;
        spec.fixed_value = parse_double(fixed, "fixed constant");
    }
    return spec;
}

udefit::WindowAnchor parse_anchor(const std::string& name) {
    if (name == "start") return udefit::WindowAnchor::start;
    if (name == "center") return udefit::WindowAnchor::center;
    throw udefit::ConfigError("unknown anchor '" + name + "' (expected start or center)");
}

std::string beta_string(const std::vector<double>& beta) {
    std::string out = "(";
    for (std::size_t i = 0; i < beta.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", beta[i]);
        out += buf;
        if (i + 1 < beta.size()) out += ", ";
    }
    return out + ")";
}

void print_fits(const char* label, const std::vector<udefit::RegressionFit>& fits) {
    for (std::size_t j = 0; j < fits.size(); ++j) {
        const udefit::RegressionFit& fit = fits[j];
        char r2[64];
        std::snprintf(r2, sizeof r2, "%.4f", fit.r_squared);
        std::cout << "  " << label << "_" << j + 1 << " (" << fit.family.name()
                  << "): beta = " << beta_string(fit.beta) << ", R2 = " << r2 << ", "
                  << (fit.converged ? "converged" : "NOT converged") << " after "
                  << fit.iterations << " iteration(s)\n";
    }
}

void print_summary(const udefit::RunReport& report, const fs::path& out_dir) {
    std::cout << report.dataset_name << ": " << report.estimates.size()
              << " window estimates (window length " << report.config.window.n << ")";
    if (!report.failures.empty())
        std::cout << ", " << report.failures.size() << " window(s) failed";
    std::cout << "\n";
    print_fits("mu", report.mu_fits);
    print_fits("sigma", report.sigma_fits);
    std::cout << "  " << report.rendered_ude << "\n";
    std::cout << "outputs written to " << out_dir.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sliding-window parameter estimation for uncertain differential equations"};
    app.require_subcommand(1);

    // estimate
    CLI::App* est = app.add_subcommand("estimate", "estimate time-varying parameters from a CSV");
    std::string est_data, est_model, est_weights, est_fit_mu, est_fit_sigma;
    std::string est_fit_mu_fixed, est_fit_sigma_fixed, est_anchor = "start", est_format = "csv";
    std::string est_out;
    double est_k0 = 0.0, est_k1 = 0.0, est_gn_eps = 1e-8;
    std::size_t est_n = 0, est_stride = 1;
    int est_gn_max_iter = 100;
    bool est_gn_damping = false, est_fail_soft = false;
    est->add_option("--data", est_data, "input CSV with header t,x")->required();
    est->add_option("--model", est_model,
                    "model family: multiplicative, affine_drift_const_diff, "
                    "affine_drift_split_diff, scaled_affine")
        ->required();
    CLI::Option* opt_k0 = est->add_option("--k0", est_k0, "scaled_affine drift scale");
    CLI::Option* opt_k1 = est->add_option("--k1", est_k1, "scaled_affine decay rate");
    est->add_option("--weights", est_weights, "split diffusion weights w1,w2 (default 0.5,0.5)");
    est->add_option("--window-n", est_n, "observations per sliding window")->required();
    est->add_option("--stride", est_stride, "distance between window starts (default 1)");
    est->add_option("--anchor", est_anchor, "estimate timestamp: start or center");
    est->add_flag("--fail-soft", est_fail_soft, "record failed windows and continue");
    est->add_option("--fit-mu", est_fit_mu,
                    "trajectory family for drift parameters: linear, exponential, "
                    "logistic_growth, logistic_decay, gaussian")
        ->required();
    est->add_option("--fit-sigma", est_fit_sigma, "trajectory family for diffusion parameters")
        ->required();
    est->add_option("--fit-mu-fixed", est_fit_mu_fixed,
                    "fixed constant for a logistic mu fit: a number, or 'first' for the first "
                    "window estimate (default first)");
    est->add_option("--fit-sigma-fixed", est_fit_sigma_fixed,
                    "fixed constant for a logistic sigma fit (default first)");
    est->add_option("--gn-eps", est_gn_eps, "Gauss-Newton stop threshold (default 1e-8)");
    est->add_option("--gn-max-iter", est_gn_max_iter, "Gauss-Newton iteration cap (default 100)");
    est->add_flag("--gn-damping", est_gn_damping, "enable Gauss-Newton step halving");
    est->add_option("--out", est_out, "output directory")->required();
    est->add_option("--format", est_format, "estimate table format: csv or json");

    // simulate
    CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic dataset by Euler steps");
    std::string sim_model, sim_weights, sim_mu, sim_sigma, sim_out;
    double sim_k0 = 0.0, sim_k1 = 0.0, sim_x0 = 0.0, sim_t0 = 0.0, sim_dt = 1.0;
    std::size_t sim_steps = 0;
    std::uint64_t sim_seed = 1;
    sim->add_option("--model", sim_model, "model family")->required();
    CLI::Option* sim_opt_k0 = sim->add_option("--k0", sim_k0, "scaled_affine drift scale");
    CLI::Option* sim_opt_k1 = sim->add_option("--k1", sim_k1, "scaled_affine decay rate");
    sim->add_option("--weights", sim_weights, "split diffusion weights w1,w2");
    sim->add_option("--mu", sim_mu, "constant drift parameters, comma separated")->required();
    sim->add_option("--sigma", sim_sigma, "constant diffusion parameters, comma separated")
        ->required();
    sim->add_option("--x0", sim_x0, "initial state")->required();
    sim->add_option("--t0", sim_t0, "first observation time (default 0)");
    sim->add_option("--dt", sim_dt, "uniform step size (default 1)");
    sim->add_option("--steps", sim_steps, "number of Euler steps")->required();
    sim->add_option("--seed", sim_seed, "fractile stream seed (default 1)");
    sim->add_option("--out", sim_out, "output CSV file")->required();

    // reproduce
    CLI::App* rep = app.add_subcommand("reproduce", "run a bundled dataset end to end");
    std::string rep_name, rep_out;
    rep->add_option("dataset", rep_name, "alcohol or covid")
        ->required()
        ->check(CLI::IsMember({"alcohol", "covid"}));
    rep->add_option("--out", rep_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        log_line("kernel backend: " +
                 std::string(udefit::kernels::name(udefit::kernels::active())));
        if (est->parsed()) {
            const udefit::Dataset ds = udefit::ingest_csv(est_data);
            log_line("ingested " + std::to_string(ds.series.size()) + " observations from " +
                     est_data);
            udefit::PipelineConfig cfg;
            cfg.model = make_model(est_model, opt_k0->count() > 0, est_k0, opt_k1->count() > 0,
                                   est_k1, est_weights);
            cfg.window = {est_n, est_stride, parse_anchor(est_anchor), est_fail_soft};
            cfg.mu_fits.assign(cfg.model.drift_arity(),
                               make_fit_spec(est_fit_mu, est_fit_mu_fixed, "--fit-mu-fixed"));
            cfg.sigma_fits.assign(
                cfg.model.diffusion_arity(),
                make_fit_spec(est_fit_sigma, est_fit_sigma_fixed, "--fit-sigma-fixed"));
            cfg.gn.epsilon = est_gn_eps;
            cfg.gn.max_iter = est_gn_max_iter;
            cfg.gn.damping = est_gn_damping;
            cfg.format = udefit::parse_output_format(est_format);
            const udefit::RunReport report = udefit::run_estimation(cfg, ds);
            udefit::emit_report(report, est_out);
            print_summary(report, est_out);
        } else if (sim->parsed()) {
            const udefit::ModelSpec model =
                make_model(sim_model, sim_opt_k0->count() > 0, sim_k0,
                           sim_opt_k1->count() > 0, sim_k1, sim_weights);
            if (!(sim_dt > 0.0)) throw udefit::ConfigError("--dt must be > 0");
            if (sim_steps < 1) throw udefit::ConfigError("--steps must be >= 1");
            std::vector<double> times(sim_steps + 1);
            for (std::size_t i = 0; i < times.size(); ++i)
                times[i] = sim_t0 + static_cast<double>(i) * sim_dt;
            const udefit::Dataset ds = udefit::simulate_dataset(
                model, udefit::ParamTrajectory::constant(parse_list(sim_mu, "mu value")),
                udefit::ParamTrajectory::constant(parse_list(sim_sigma, "sigma value")), sim_x0,
                udefit::TimeGrid(std::move(times)), sim_seed, "simulated");
            udefit::write_series_csv(ds.series, sim_out);
            std::cout << "wrote " << sim_out << " (" << ds.series.size() << " rows, seed "
                      << sim_seed << ")\n";
        } else if (rep->parsed()) {
            const udefit::Dataset& ds =
                rep_name == "alcohol" ? udefit::alcohol_dataset() : udefit::covid_dataset();
            const udefit::PipelineConfig cfg =
                rep_name == "alcohol" ? udefit::alcohol_preset() : udefit::covid_preset();
            const udefit::RunReport report = udefit::run_estimation(cfg, ds);
            udefit::emit_report(report, rep_out);
            print_summary(report, rep_out);
        }
        return 0;
    } catch (const udefit::ConfigError& e) {
        std::cerr << "udefit: config error: " << e.what() << "\n";
        return 2;
    } catch (const udefit::DataError& e) {
        std::cerr << "udefit: data error: " << e.what() << "\n";
        return 3;
    } catch (const udefit::NumericalError& e) {
        std::cerr << "udefit: numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "udefit: unexpected error: " << e.what() << "\n";
        return 1;
    }
}
