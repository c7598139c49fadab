#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emrtm/dataset.hpp"
#include "emrtm/geometry.hpp"
#include "emrtm/imaging.hpp"
#include "emrtm/verify.hpp"

namespace emrtm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitSolver = 2,
    kExitIo = 3,
    kExitIdentity = 4,
};

struct NoiseSettings {
    double level = 0.0;
    std::uint64_t seed = 0;
};

struct CrossSectionRequest {
    Axis axis = Axis::X1;
    double offset = 0.0;
};

struct VerifySettings {
    std::vector<std::string> checks;          // empty: every applicable check
    std::optional<double> tolerance_override;
    bool in_run = false;                       // also write reports during `run`
};

struct ExperimentConfig {
    std::string name = "experiment";
    Scene scene;
    std::vector<double> wavelengths;
    Aperture aperture{128, 100.0, 128, 100.0};
    SamplingGrid grid{Point(-2.0, -2.0), Point(2.0, 2.0), 101, 101};
    std::vector<Eigen::Vector2d> polarizations{Eigen::Vector2d(1.0, 0.0)};
    KernelVariant kernel = KernelVariant::Scalar;
    std::optional<NoiseSettings> noise;
    SolverChoice solver = SolverChoice::Auto;
    double points_per_wavelength = 10.0;
    std::filesystem::path output = "out";
    std::vector<CrossSectionRequest> cross_sections;
    VerifySettings verify;

    /// Canonical JSON (sorted keys) of the effective configuration.
    std::string canonical;
};

struct RunOptions {
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output;
};

/// Parses JSON config text. Throws ConfigError with the offending key.
ExperimentConfig parse_config(const std::string& text, const RunOptions& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const RunOptions& overrides = {});

/// SHA-256 of the canonical configuration.
std::string config_digest(const ExperimentConfig& cfg);

struct RunResult {
    std::vector<ScatterDataSet> datasets;
    std::vector<ImageGrid> images;   // one per wavelength, then the stack if there are several
};

/// Forward data, images, cross-sections and manifest under cfg.output.
RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Identity checks for the configuration, as JSON lines on `out` and in
/// reports.jsonl. Returns the reports.
std::vector<IdentityReport> verify_suite(const ExperimentConfig& cfg, std::ostream& out);

/// CLI entry points: exit codes 0 ok, 1 config, 2 solver, 3 I/O, 4 failed identity.
int run_command(const std::filesystem::path& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int verify_command(const std::filesystem::path& config, const RunOptions& options, std::ostream& out,
                   std::ostream& err);
int info_command(const std::filesystem::path& artifact, std::ostream& out, std::ostream& err);

} // namespace emrtm
