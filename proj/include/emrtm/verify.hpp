#pragma once

#include <string>
#include <utility>
#include <vector>

#include "emrtm/dataset.hpp"
#include "emrtm/geometry.hpp"
#include "emrtm/green.hpp"
#include "emrtm/mie.hpp"

namespace emrtm {

struct IdentityReport {
    std::string name;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<std::pair<std::string, double>> metrics;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string expected_order;
    bool pass = false;
    double runtime_seconds = 0.0;

    double metric(const std::string& key) const;
};

/// One JSON object per report, no trailing newline.
std::string to_json_line(const IdentityReport& report);

/// | ring integral of conj(g(x,.)) d_nu g(., z) - d_nu conj(g(x,.)) g(., z) - 2i Im g(x, z) |
/// over |xi| = R with the N-point trapezoid rule.
IdentityReport hk_exact(const Point& x, const Point& z, double radius, const WaveConfig& wave, int nodes,
                        double tolerance = 1e-10);

struct FarFieldResiduals {
    double scalar = 0.0;   // | k ring integral conj(g(z,.)) g(x,.) - Im g(x,z) |
    double dyadic = 0.0;   // || k ring integral conj(G(x,.))^T G(., z) - Im G(x,z) ||_F
};
FarFieldResiduals hk_farfield_residuals(const Point& x, const Point& z, double radius, const WaveConfig& wave,
                                        int nodes);

/// Residuals at each radius plus the least-squares log-log decay exponents.
/// Passes when both exponents lie in [min_exponent, max_exponent].
IdentityReport hk_farfield(const Point& x, const Point& z, const std::vector<double>& radii,
                           const WaveConfig& wave, double min_exponent = 0.8, double max_exponent = 1.2);

/// Im of the ring integral of conj(H3^s) d_r H3^s at radius R against the
/// modal far-field power; also the total-field flux, whose negative is the
/// power absorbed by the boundary.
IdentityReport energy_flux(const ModalSolution& sol, double radius, double tolerance = 1e-8);

/// T(z) = k * integral |Psi_inf(., z)|^2 for the penetrable circle, Psi scattered
/// by the incident field whose E is Im G(., z) p.
double scattered_energy(const Scatterer& circle, const Point& z, const Eigen::Vector2d& p, const WaveConfig& wave);

/// Correlation of the image against T(z) over the given points, with the
/// least-squares scale through the origin.
IdentityReport theorem31_consistency(const Scatterer& circle, const std::vector<Point>& points,
                                     const WaveConfig& wave, const Aperture& aperture,
                                     const Eigen::Vector2d& p = Eigen::Vector2d(1.0, 0.0),
                                     double min_correlation = 0.95);

/// max |q . E(x_r, x_s; p) - p . E(x_s, x_r; q)| / max |E| for coincident apertures.
IdentityReport reciprocity_check(const ScatterDataSet& data, double tolerance = 1e-6);

/// Deterministic spiral of points in a disc.
std::vector<Point> spiral_points(int count, const Point& center, double radius);

} // namespace emrtm
