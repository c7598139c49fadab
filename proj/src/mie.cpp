#include "emrtm/mie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "emrtm/specfun.hpp"

namespace emrtm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularDenominator = 1e-13;
constexpr double kDecayTolerance = 1e-10;  // phase of distant sources is only good to ~eps k R
constexpr double kTraceFloor = 1e-13;

cplx phase(int m, double theta)
{
    return std::polar(1.0, m * theta);
}

// H_m, H_m' for m = -order..order at argument x (reflection for m < 0).
void signed_hankel(int order, double x, std::vector<cplx>& h, std::vector<cplx>& dh)
{
    const HankelSequence seq = hankel1_sequence(order, x);
    h.assign(2 * order + 1, 0.0);
    dh.assign(2 * order + 1, 0.0);
    for (int m = -order; m <= order; ++m) {
        const int a = std::abs(m);
        const double s = m < 0 ? reflect_sign(a) : 1.0;
        h[m + order] = s * seq.h[a];
        dh[m + order] = s * seq.dh[a];
    }
}

void signed_bessel(int order, double x, std::vector<double>& j, std::vector<double>& dj)
{
    const BesselSequence seq = bessel_j_sequence(order, x);
    j.assign(2 * order + 1, 0.0);
    dj.assign(2 * order + 1, 0.0);
    for (int m = -order; m <= order; ++m) {
        const int a = std::abs(m);
        const double s = m < 0 ? reflect_sign(a) : 1.0;
        j[m + order] = s * seq.j[a];
        dj[m + order] = s * seq.dj[a];
    }
}

ModalCoefficients zeros(int order)
{
    ModalCoefficients out;
    out.order = order;
    out.values = Eigen::VectorXcd::Zero(2 * order + 1);
    return out;
}

// Gradient of f(r) e^{i m theta} in Cartesian components.
CVector2 polar_gradient(cplx radial, cplx angular_over_r, double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    return CVector2(radial * c - angular_over_r * s, radial * s + angular_over_r * c);
}

} // namespace

int default_modal_order(double k_rho)
{
    return static_cast<int>(std::ceil(k_rho + 6.0 * std::cbrt(k_rho) + 12.0));
}

CircleSamples sample_on_circle(const Point& center, double rho, int count,
                               const std::function<cplx(const Point&)>& field,
                               const std::function<CVector2(const Point&)>& gradient)
{
    CircleSamples out;
    out.values.resize(count);
    out.radial.resize(count);
    for (int l = 0; l < count; ++l) {
        const double t = kTwoPi * l / count;
        const Eigen::Vector2d rhat(std::cos(t), std::sin(t));
        const Point x = center + rho * rhat;
        out.values(l) = field(x);
        const CVector2 g = gradient(x);
        out.radial(l) = g(0) * rhat(0) + g(1) * rhat(1);
    }
    return out;
}

IncidentProjection mie_project_incident(const Eigen::VectorXcd& samples, const Eigen::VectorXcd& radial_samples,
                                        int order, double rho, const WaveConfig& wave)
{
    const Eigen::Index count = samples.size();
    if (order < 0) {
        throw std::invalid_argument("mie_project_incident: negative truncation order");
    }
    if (radial_samples.size() != count) {
        throw std::invalid_argument("mie_project_incident: sample vectors differ in length");
    }
    if (count < 4 * std::max(order, 1)) {
        throw std::invalid_argument("mie_project_incident: need at least 4 samples per mode");
    }

    const double k = wave.k();
    IncidentProjection out;
    out.trace = Eigen::VectorXcd::Zero(2 * order + 1);
    out.radial_trace = Eigen::VectorXcd::Zero(2 * order + 1);
    for (int m = -order; m <= order; ++m) {
        cplx f = 0.0, g = 0.0;
        for (Eigen::Index l = 0; l < count; ++l) {
            const cplx e = phase(-m, kTwoPi * double(l) / double(count));
            f += samples(l) * e;
            g += radial_samples(l) * e;
        }
        out.trace(m + order) = f / double(count);
        out.radial_trace(m + order) = g / double(count);
    }

    double peak = 0.0;
    for (Eigen::Index i = 0; i < out.trace.size(); ++i) {
        peak = std::max(peak, std::abs(out.trace(i)) + std::abs(out.radial_trace(i)) / k);
    }
    if (peak > 0.0 && order > 0) {
        const double edge = std::max(std::abs(out.trace(0)) + std::abs(out.radial_trace(0)) / k,
                                     std::abs(out.trace(2 * order)) + std::abs(out.radial_trace(2 * order)) / k);
        if (edge >= kDecayTolerance * peak) {
            throw SolverError("mie_project_incident: modal content has not decayed at order "
                              + std::to_string(order) + "; increase the truncation order");
        }
    }

    std::vector<double> j, dj;
    signed_bessel(order, k * rho, j, dj);
    out.incident = zeros(order);
    // modes whose traces are at roundoff level are not resolved; dividing by a tiny J_m would amplify noise
    const double floor = kTraceFloor * peak;
    for (int m = -order; m <= order; ++m) {
        const int i = m + order;
        const double jm = j[i], djm = k * dj[i];
        if (std::abs(out.trace(i)) + std::abs(out.radial_trace(i)) / k <= floor) {
            out.trace_mismatch = std::max(out.trace_mismatch, std::abs(out.trace(i)));
            out.radial_mismatch = std::max(out.radial_mismatch, std::abs(out.radial_trace(i)));
            continue;
        }
        // J_m and J_m' never vanish together; least squares over both traces.
        out.incident.values(i) = (out.trace(i) * jm + out.radial_trace(i) * djm) / (jm * jm + djm * djm);
        out.trace_mismatch = std::max(out.trace_mismatch, std::abs(out.incident.values(i) * jm - out.trace(i)));
        out.radial_mismatch = std::max(out.radial_mismatch, std::abs(out.incident.values(i) * djm - out.radial_trace(i)));
    }
    return out;
}

ModalSolution mie_solve(const ModalCoefficients& incident, const BoundaryCondition& bc, double rho,
                        const WaveConfig& wave, const Point& center)
{
    if (!(rho > 0.0)) {
        throw std::invalid_argument("mie_solve: radius must be positive");
    }
    if (bc.kind() == BoundaryCondition::Kind::Impedance && !bc.constant_eta()) {
        throw std::invalid_argument("mie_solve: modal solution needs a constant impedance");
    }
    const int order = incident.order;
    const double k = wave.k();
    const double x = k * rho;

    ModalSolution sol;
    sol.center = center;
    sol.radius = rho;
    sol.wave = wave;
    sol.bc = bc;
    sol.incident = incident;
    sol.scattered = zeros(order);
    sol.transmitted = zeros(order);

    std::vector<cplx> h, dh;
    std::vector<double> j, dj;
    signed_hankel(order, x, h, dh);
    signed_bessel(order, x, j, dj);

    std::vector<double> ji, dji;
    double k_in = 0.0;
    if (bc.kind() == BoundaryCondition::Kind::Penetrable) {
        k_in = k * std::sqrt(bc.index());
        signed_bessel(order, k_in * rho, ji, dji);
    }

    for (int m = -order; m <= order; ++m) {
        const int i = m + order;
        const cplx a = incident.values(i);
        cplx num, den;
        double scale = 0.0;   // magnitude of the terms making up den
        switch (bc.kind()) {
        case BoundaryCondition::Kind::Pec:
            num = k * dj[i];
            den = k * dh[i];
            scale = std::abs(den);
            break;
        case BoundaryCondition::Kind::Impedance: {
            // eta d_r u + i k u = 0, which is the Robin condition d_r u + (ik/eta) u = 0
            const double eta = bc.eta_upper();
            const cplx ik(0.0, k);
            num = eta * k * dj[i] + ik * j[i];
            den = eta * k * dh[i] + ik * h[i];
            scale = std::abs(eta * k * dh[i]) + std::abs(k * h[i]);
            break;
        }
        case BoundaryCondition::Kind::Penetrable: {
            const double alpha = ji[i];
            const double beta = k_in / bc.index() * dji[i];
            num = beta * j[i] - alpha * k * dj[i];
            den = beta * h[i] - alpha * k * dh[i];
            scale = std::abs(beta * h[i]) + std::abs(alpha * k * dh[i]);
            break;
        }
        }
        if (!(std::abs(den) >= kSingularDenominator * scale) || scale == 0.0) {
            throw SolverError("mie_solve: singular modal denominator at m = " + std::to_string(m));
        }
        const cplx b = -a * num / den;
        sol.scattered.values(i) = b;
        if (bc.kind() == BoundaryCondition::Kind::Penetrable) {
            const double alpha = ji[i];
            const double beta = k_in / bc.index() * dji[i];
            sol.transmitted.values(i) = std::abs(alpha) >= std::abs(beta)
                ? (a * j[i] + b * h[i]) / alpha
                : k * (a * dj[i] + b * dh[i]) / beta;
        }
    }
    return sol;
}

FieldSample mie_eval_scattered(const ModalSolution& sol, const Point& x)
{
    const Eigen::Vector2d d = x - sol.center;
    const double r = d.norm();
    if (!(r > sol.radius)) {
        throw std::domain_error("mie_eval_scattered: point is not outside the circle");
    }
    const double theta = std::atan2(d.y(), d.x());
    const double k = sol.wave.k();
    const int order = sol.scattered.order;
    std::vector<cplx> h, dh;
    signed_hankel(order, k * r, h, dh);
    FieldSample out{0.0, CVector2::Zero(), CVector2::Zero()};
    cplx radial = 0.0, angular = 0.0;
    for (int m = -order; m <= order; ++m) {
        const cplx b = sol.scattered[m] * phase(m, theta);
        out.h3 += b * h[m + order];
        radial += b * k * dh[m + order];
        angular += b * cplx(0.0, m / r) * h[m + order];
    }
    out.grad_h3 = polar_gradient(radial, angular, theta);
    out.e = te_electric_field(out.grad_h3, sol.wave);
    return out;
}

FieldSample mie_eval_total(const ModalSolution& sol, const Point& x)
{
    const Eigen::Vector2d d = x - sol.center;
    const double r = d.norm();
    const double theta = std::atan2(d.y(), d.x());
    const double k = sol.wave.k();
    const int order = sol.incident.order;
    FieldSample out{0.0, CVector2::Zero(), CVector2::Zero()};
    cplx radial = 0.0, angular = 0.0;
    if (r < sol.radius) {
        if (sol.bc.kind() != BoundaryCondition::Kind::Penetrable) {
            throw std::domain_error("mie_eval_total: no field inside an impenetrable scatterer");
        }
        const double k_in = k * std::sqrt(sol.bc.index());
        std::vector<double> j, dj;
        signed_bessel(order, k_in * r, j, dj);
        for (int m = -order; m <= order; ++m) {
            const cplx c = sol.transmitted[m] * phase(m, theta);
            out.h3 += c * j[m + order];
            radial += c * k_in * dj[m + order];
            angular += (r > 0.0) ? c * cplx(0.0, m / r) * j[m + order] : 0.0;
        }
    } else {
        std::vector<double> j, dj;
        signed_bessel(order, k * r, j, dj);
        for (int m = -order; m <= order; ++m) {
            const cplx a = sol.incident[m] * phase(m, theta);
            out.h3 += a * j[m + order];
            radial += a * k * dj[m + order];
            angular += a * cplx(0.0, m / r) * j[m + order];
        }
        if (r > sol.radius) {
            const FieldSample s = mie_eval_scattered(sol, x);
            out.h3 += s.h3;
            out.grad_h3 = polar_gradient(radial, angular, theta) + s.grad_h3;
            out.e = te_electric_field(out.grad_h3, sol.wave);
            return out;
        }
        std::vector<cplx> h, dh;
        signed_hankel(order, k * r, h, dh);
        for (int m = -order; m <= order; ++m) {
            const cplx b = sol.scattered[m] * phase(m, theta);
            out.h3 += b * h[m + order];
            radial += b * k * dh[m + order];
            angular += b * cplx(0.0, m / r) * h[m + order];
        }
    }
    out.grad_h3 = polar_gradient(radial, angular, theta);
    out.e = te_electric_field(out.grad_h3, sol.wave);
    return out;
}

double far_field_power(const ModalSolution& sol)
{
    // u_inf(theta) = sqrt(2/(pi k)) e^{-i pi/4} sum_m b_m (-i)^m e^{i m theta}, so
    // k * int |u_inf|^2 = k * (2/(pi k)) * 2 pi * sum |b_m|^2.
    return 4.0 * sol.scattered.values.squaredNorm();
}

ModalEvaluator::ModalEvaluator(const Point& center, double rho, int order, const WaveConfig& wave,
                               const std::vector<Point>& points)
    : k_(wave.k())
{
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    const int width = 2 * order + 1;
    basis_.resize(n, width);
    grad_x_.resize(n, width);
    grad_y_.resize(n, width);
    std::vector<cplx> h, dh;
    for (Eigen::Index p = 0; p < n; ++p) {
        const Eigen::Vector2d d = points[p] - center;
        const double r = d.norm();
        if (!(r > rho)) {
            throw std::domain_error("ModalEvaluator: evaluation point is not outside the circle");
        }
        const double theta = std::atan2(d.y(), d.x());
        signed_hankel(order, k_ * r, h, dh);
        for (int m = -order; m <= order; ++m) {
            const cplx e = phase(m, theta);
            const int i = m + order;
            basis_(p, i) = h[i] * e;
            const CVector2 g = polar_gradient(k_ * dh[i] * e, cplx(0.0, m / r) * h[i] * e, theta);
            grad_x_(p, i) = g(0);
            grad_y_(p, i) = g(1);
        }
    }
}

void ModalEvaluator::electric_field(const Eigen::MatrixXcd& b, Eigen::MatrixXcd& e1, Eigen::MatrixXcd& e2) const
{
    const cplx factor(0.0, 1.0 / k_);
    e1.noalias() = factor * (grad_y_ * b);
    e2.noalias() = -factor * (grad_x_ * b);
}

Eigen::MatrixXcd ModalEvaluator::magnetic_field(const Eigen::MatrixXcd& b) const
{
    return basis_ * b;
}

} // namespace emrtm
