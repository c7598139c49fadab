#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "emrtm/geometry.hpp"
#include "emrtm/green.hpp"

namespace emrtm {

/// Thrown when a modal or boundary-integral solve cannot produce a
/// trustworthy answer (singular denominators, aliasing, resonance).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truncation order ceil(k rho + 6 (k rho)^{1/3} + 12).
int default_modal_order(double k_rho);

/// Cylindrical-harmonic coefficients indexed m = -order..order, stored at m + order.
struct ModalCoefficients {
    int order = 0;
    Eigen::VectorXcd values;

    cplx operator[](int m) const { return values(m + order); }
    cplx& operator[](int m) { return values(m + order); }
};

/// Result of projecting an incident field onto J_m(k r) e^{i m theta}.
struct IncidentProjection {
    ModalCoefficients incident;        // a_m
    Eigen::VectorXcd trace;            // theta-Fourier coefficients of u on r = rho
    Eigen::VectorXcd radial_trace;     // theta-Fourier coefficients of d_r u on r = rho
    double trace_mismatch = 0.0;       // max_m |a_m J_m(k rho) - trace_m|
    double radial_mismatch = 0.0;      // max_m |a_m k J_m'(k rho) - radial_trace_m|
};

/// Projects samples u(rho, theta_l) and d_r u(rho, theta_l), theta_l = 2 pi l / L,
/// onto the regular modes. Needs L >= 4 * order. Throws SolverError when the
/// trace content has not decayed below 1e-12 of its peak at |m| = order.
IncidentProjection mie_project_incident(const Eigen::VectorXcd& samples, const Eigen::VectorXcd& radial_samples,
                                        int order, double rho, const WaveConfig& wave);

/// Samples a field and its radial derivative on a circle, in the layout
/// mie_project_incident expects.
struct CircleSamples {
    Eigen::VectorXcd values;
    Eigen::VectorXcd radial;
};
CircleSamples sample_on_circle(const Point& center, double rho, int count,
                               const std::function<cplx(const Point&)>& field,
                               const std::function<CVector2(const Point&)>& gradient);

struct ModalSolution {
    Point center = Point::Zero();
    double radius = 1.0;
    WaveConfig wave = WaveConfig::from_wavenumber(1.0);
    BoundaryCondition bc = BoundaryCondition::pec();
    ModalCoefficients incident;       // a_m
    ModalCoefficients scattered;      // b_m
    ModalCoefficients transmitted;    // c_m, penetrable only (zero otherwise)
};

/// Per-mode boundary conditions on r = rho for an incident field with
/// coefficients a_m. Impedance requires a constant eta.
ModalSolution mie_solve(const ModalCoefficients& incident, const BoundaryCondition& bc, double rho,
                        const WaveConfig& wave, const Point& center = Point::Zero());

struct FieldSample {
    cplx h3;
    CVector2 grad_h3;
    CVector2 e;
};

/// Scattered field at a point outside the circle.
FieldSample mie_eval_scattered(const ModalSolution& sol, const Point& x);

/// Total field (incident + scattered outside, transmitted inside) from the
/// modal coefficients alone.
FieldSample mie_eval_total(const ModalSolution& sol, const Point& x);

/// k times the integral of |far field|^2 over the unit circle, far field
/// normalised as u ~ e^{ikr} r^{-1/2} u_inf.
double far_field_power(const ModalSolution& sol);

/// Evaluates many scattered fields (columns of b) at many points outside the
/// circle: returns E components as (points x columns) matrices.
struct ModalEvaluator {
    ModalEvaluator(const Point& center, double rho, int order, const WaveConfig& wave,
                   const std::vector<Point>& points);

    /// b is (2 order + 1) x ncols of scattered coefficients.
    void electric_field(const Eigen::MatrixXcd& b, Eigen::MatrixXcd& e1, Eigen::MatrixXcd& e2) const;
    Eigen::MatrixXcd magnetic_field(const Eigen::MatrixXcd& b) const;

private:
    Eigen::MatrixXcd basis_;   // H_m(k r) e^{i m theta}
    Eigen::MatrixXcd grad_x_;
    Eigen::MatrixXcd grad_y_;
    double k_;
};

} // namespace emrtm
