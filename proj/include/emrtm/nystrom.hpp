#pragma once

#include <vector>

#include <Eigen/Dense>

#include "emrtm/geometry.hpp"
#include "emrtm/green.hpp"
#include "emrtm/mie.hpp"

namespace emrtm {

/// Direct second-kind boundary integral equation for the total H3 trace on
/// PEC (Neumann) and impedance (Robin) boundaries:
///
///     u/2 - K u - S((ik/eta) u) = u_inc   on Gamma,
///
/// with K the double-layer and S the single-layer operator of g2. Self
/// interactions use Kress's logarithmic quadrature; interactions between
/// distinct components use the trapezoid rule. The LU factorisation is kept
/// so any number of incident fields can be solved against it.
class NystromSystem {
public:
    /// Nodes per component: ppw * length / lambda rounded up to an even count, at least `min_nodes`.
    NystromSystem(const Scene& scene, const WaveConfig& wave, double points_per_wavelength, int min_nodes = 32);

    const WaveConfig& wave() const { return wave_; }
    Eigen::Index size() const { return total_; }
    int component_count() const { return static_cast<int>(components_.size()); }
    const BoundaryNodes& nodes(int component) const { return components_[component].nodes; }

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    double condition_estimate() const { return condition_; }

    /// All boundary nodes stacked in solve order.
    std::vector<Point> stacked_points() const;

    /// Columns of `incident_trace` are u_inc at the stacked nodes; returns the
    /// total-field traces. Throws SolverError if any column's relative
    /// residual exceeds 1e-10.
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& incident_trace) const;

    /// Largest and per-column relative residuals of the last solve.
    double last_residual() const { return last_residual_; }
    const Eigen::VectorXd& column_residuals() const { return residuals_; }

    /// Scattered H3 and its gradient at exterior points, for each column of `density`.
    struct FieldMatrices {
        Eigen::MatrixXcd h3;
        Eigen::MatrixXcd grad1;
        Eigen::MatrixXcd grad2;
    };
    FieldMatrices scattered_field(const Eigen::MatrixXcd& density, const std::vector<Point>& points) const;

    /// Scattered electric field components (points x columns).
    void scattered_electric(const Eigen::MatrixXcd& density, const std::vector<Point>& points,
                            Eigen::MatrixXcd& e1, Eigen::MatrixXcd& e2) const;

private:
    struct Component {
        Scatterer scatterer;
        BoundaryNodes nodes;
        Eigen::VectorXcd robin;   // ik/eta at each node, zero for PEC
        Eigen::Index offset = 0;
    };

    void assemble();

    WaveConfig wave_;
    std::vector<Component> components_;
    Eigen::Index total_ = 0;
    Eigen::MatrixXcd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double condition_ = 0.0;
    mutable double last_residual_ = 0.0;
    mutable Eigen::VectorXd residuals_;
};

/// Kress weights R_d for the product rule of ln(4 sin^2((t - tau)/2)) on
/// 2n equispaced nodes, indexed by the node offset d = |i - j| (0..2n-1).
Eigen::VectorXd kress_log_weights(int node_count);

/// Condition estimate above which the solve is refused as near-resonant.
inline constexpr double kResonanceCondition = 1e8;

} // namespace emrtm
