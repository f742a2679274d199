#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "udefit/datasets.hpp"
#include "udefit/model.hpp"
#include "udefit/regression.hpp"
#include "udefit/window.hpp"

namespace udefit {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);

// Trajectory fit requested for one parameter component.  Logistic kinds carry
// a fixed constant (growth ceiling K or decay numerator A) sourced either
// from a literal or from the component's first window estimate.
struct ComponentFitSpec {
    FamilyKind kind = FamilyKind::linear;
    enum class FixedSource { none, literal, first_estimate };
    FixedSource fixed_source = FixedSource::none;
    double fixed_value = 0.0;
};

struct PipelineConfig {
    ModelSpec model;
    WindowConfig window;
    std::vector<ComponentFitSpec> mu_fits;    // one per drift component
    std::vector<ComponentFitSpec> sigma_fits; // one per diffusion component
    GaussNewtonConfig gn;
    OutputFormat format = OutputFormat::csv;
};

struct RunReport {
    std::string dataset_name;
    double t_first = 0.0;
    double t_last = 0.0;
    PipelineConfig config;
    std::vector<WindowEstimate> estimates;
    std::vector<WindowFailure> failures;
    std::vector<RegressionFit> mu_fits;
    std::vector<RegressionFit> sigma_fits;
    std::string rendered_ude;
};

// Reads a `t,x` CSV with strictly increasing, finite times.  Parse errors
// carry the offending line number.
Dataset ingest_csv(const std::filesystem::path& path);

// Sliding-window estimation followed by per-component trajectory fits and
// rendering of the final equation.  Deterministic given cfg and ds.
RunReport run_estimation(const PipelineConfig& cfg, const Dataset& ds);

// Writes estimates.csv, fits.json, and per-component scatter/curve plot CSVs
// (200 curve samples over [t_first, t_last]) into out_dir; with the json
// format also estimates.json.  Output bytes depend only on the report.
void emit_report(const RunReport& report, const std::filesystem::path& out_dir);

// Euler simulation driven by a seeded fractile stream, packaged as a Dataset.
Dataset simulate_dataset(const ModelSpec& model, const ParamTrajectory& mu_traj,
                         const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                         std::uint64_t seed, std::string name);

// Writes a series in the ingest format; values round-trip bit-exactly.
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path);

// Human-readable equation with fitted trajectories substituted in; for
// scaled_affine the drift scale k0 is folded into the rendered coefficients.
std::string render_ude(const ModelSpec& model, const std::vector<RegressionFit>& mu_fits,
                       const std::vector<RegressionFit>& sigma_fits);

// Canned configurations for the bundled datasets.
PipelineConfig alcohol_preset();
PipelineConfig covid_preset();

} // namespace udefit
