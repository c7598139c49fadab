#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emrtm/dataset.hpp"
#include "emrtm/geometry.hpp"
#include "emrtm/green.hpp"

namespace emrtm {

/// Source-side kernel: g(z, x_s) p (default) or dyadic_g2(z, x_s) p.
enum class KernelVariant { Scalar, Dyadic };

const char* kernel_name(KernelVariant v);
KernelVariant parse_kernel(const std::string& name);

struct ImageProvenance {
    std::vector<double> wavenumbers;
    std::vector<Eigen::Vector2d> polarizations;
    std::vector<std::string> dataset_digests;
    std::string variant = "g";
    std::string weights = "2 pi R / N";
};

/// Imaging values on a sampling grid, flat with x1 fastest.
struct ImageGrid {
    ImageGrid(SamplingGrid g) : grid(std::move(g)), values(Eigen::VectorXd::Zero(grid.size())) {}

    SamplingGrid grid;
    Eigen::VectorXd values;
    ImageProvenance provenance;

    double at(int i, int j) const { return values(Eigen::Index(j) * grid.nx() + i); }
    double& at(int i, int j) { return values(Eigen::Index(j) * grid.nx() + i); }

    /// Bilinear interpolation; the point must lie in the grid rectangle.
    double sample(const Point& z) const;
};

struct ImagingOptions {
    KernelVariant kernel = KernelVariant::Scalar;
    /// Subset of the dataset's polarizations; empty means all of them.
    std::vector<Eigen::Vector2d> polarizations;
};

/// F_b(z, x_s) = -w_r sum_r dyadic_g2(z, x_r)^T conj(E^s[s][r][p]).
CVector2 back_propagate(const ScatterDataSet& data, const Point& z, int s, int p);

/// I(z) = -k^2 Im{ w_s w_r sum_p sum_s sum_r k_s(z) . dyadic_g2(z, x_r)^T conj(E^s[s][r][p]) }
/// with k_s the source kernel. Summation runs r innermost, then s, then p,
/// compensated, so the result does not depend on the thread count.
ImageGrid image(const ScatterDataSet& data, const SamplingGrid& grid, const ImagingOptions& options = {});

/// The same functional at arbitrary points.
Eigen::VectorXd image_at(const ScatterDataSet& data, const std::vector<Point>& points,
                         const ImagingOptions& options = {});

/// Pointwise sum of single-frequency images. Datasets must share aperture and scene.
ImageGrid image_multifreq(const std::vector<ScatterDataSet>& datasets, const SamplingGrid& grid,
                          const ImagingOptions& options = {});

enum class Axis { X1, X2 };

struct Profile {
    Axis axis = Axis::X1;
    double offset = 0.0;        // coordinate of the extracted row or column
    std::vector<double> coordinate;
    std::vector<double> values;
};

/// Nearest row (axis X1, profile along x1 at x2 = offset) or column (X2).
Profile cross_section(const ImageGrid& img, Axis axis, double offset);

/// Peak: radius of the largest value along the ray.
/// Edge: radius where the image falls off fastest going outward (largest -dI/dr).
enum class RidgeMeasure { Peak, Edge };

/// For each of `rays` directions 2 pi j / rays from `center`, the ridge
/// radius in (0, max_radius], sampled at a quarter of the grid spacing.
std::vector<double> ridge_radii(const ImageGrid& img, const Point& center, int rays, double max_radius,
                                RidgeMeasure measure = RidgeMeasure::Edge);

} // namespace emrtm
