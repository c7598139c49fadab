#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emrtm/geometry.hpp"
#include "emrtm/green.hpp"

namespace emrtm {

enum class SolverChoice { Auto, Mie, Nystrom };

const char* solver_name(SolverChoice s);
SolverChoice parse_solver(const std::string& name);

struct NoiseRecord {
    bool applied = false;
    double level = 0.0;
    std::uint64_t seed = 0;
    double sigma = 0.0;      // max |E^s| of the clean tensor
};

/// Scattered electric field E^s[s][r][p] for every source, receiver and
/// polarization, with enough metadata to reproduce it.
struct ScatterDataSet {
    ScatterDataSet(Aperture aperture, WaveConfig wave, std::vector<Eigen::Vector2d> polarizations);

    Aperture aperture;
    WaveConfig wave;
    std::vector<Eigen::Vector2d> polarizations;
    std::string scene_digest;
    std::string solver = "none";
    NoiseRecord noise;
    std::vector<CVector2> values;

    int sources() const { return aperture.source_count(); }
    int receivers() const { return aperture.receiver_count(); }
    int polarization_count() const { return static_cast<int>(polarizations.size()); }

    std::size_t index(int s, int r, int p) const
    {
        return (std::size_t(s) * receivers() + r) * polarizations.size() + p;
    }
    CVector2& at(int s, int r, int p) { return values[index(s, r, p)]; }
    const CVector2& at(int s, int r, int p) const { return values[index(s, r, p)]; }

    /// max over entries of the vector magnitude |E^s|.
    double max_magnitude() const;
};

struct ForwardOptions {
    SolverChoice solver = SolverChoice::Auto;
    double points_per_wavelength = 10.0;
};

/// Canonical text of a scene; its SHA-256 is the scene digest.
std::string scene_canonical(const Scene& scene);
std::string scene_digest(const Scene& scene);

/// SHA-256 of the tensor bytes.
std::string dataset_digest(const ScatterDataSet& data);

/// Scattered fields for incident dipoles dyadic_g2(., x_s) p.
/// Auto picks the modal solver for a single circle and Nystrom otherwise.
ScatterDataSet generate_dataset(const Scene& scene, const Aperture& aperture, const WaveConfig& wave,
                                const std::vector<Eigen::Vector2d>& polarizations,
                                const ForwardOptions& options = {});

/// Adds mu * sigma * N(0, 1) to the real and imaginary part of every vector
/// component, sigma = max |E^s| of the input. Reproducible from the seed.
ScatterDataSet add_noise(const ScatterDataSet& data, double level, std::uint64_t seed);

} // namespace emrtm
