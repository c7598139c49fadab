#include "emrtm/nystrom.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "emrtm/specfun.hpp"

namespace emrtm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxResidual = 1e-10;

int node_count_for(const ParametricBoundary& boundary, double lambda, double ppw, int min_nodes)
{
    // Length from a fine trapezoid rule (spectrally accurate).
    const double length = boundary_length(boundary_nodes(boundary, 512));
    int n = static_cast<int>(std::ceil(ppw * length / lambda));
    n = std::max(n, min_nodes);
    return n + (n % 2);
}

} // namespace

Eigen::VectorXd kress_log_weights(int node_count)
{
    const int n = node_count / 2;
    Eigen::VectorXd w(node_count);
    for (int d = 0; d < node_count; ++d) {
        const double t = kPi * d / n;
        double s = 0.0;
        for (int m = 1; m < n; ++m) {
            s += std::cos(m * t) / m;
        }
        w(d) = -(2.0 * kPi / n) * s - (kPi / (double(n) * n)) * ((d % 2 == 0) ? 1.0 : -1.0);
    }
    return w;
}

NystromSystem::NystromSystem(const Scene& scene, const WaveConfig& wave, double points_per_wavelength, int min_nodes)
    : wave_(wave)
{
    if (!(points_per_wavelength > 0.0)) {
        throw std::invalid_argument("NystromSystem: points per wavelength must be positive");
    }
    for (const Scatterer& sc : scene) {
        if (sc.bc.kind() == BoundaryCondition::Kind::Penetrable) {
            throw std::invalid_argument("NystromSystem: penetrable scatterers are handled by the modal solver");
        }
        if (sc.bc.kind() == BoundaryCondition::Kind::Impedance
            && (sc.bc.eta_upper() == 0.0 || sc.bc.eta_lower() == 0.0)) {
            throw std::invalid_argument("NystromSystem: eta = 0 (Dirichlet limit) is not supported");
        }
        Component c{sc, boundary_nodes(sc.boundary, node_count_for(sc.boundary, wave.lambda(), points_per_wavelength, min_nodes)), {}, total_};
        const Eigen::Index n = c.nodes.size();
        c.robin = Eigen::VectorXcd::Zero(n);
        if (sc.bc.kind() == BoundaryCondition::Kind::Impedance) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double t = c.nodes.theta(j);
                if (!sc.bc.constant_eta() && std::abs(std::sin(t)) < 1e-12) {
                    // jump of eta sits on this node: mean of the one-sided values
                    c.robin(j) = cplx(0.0, 0.5 * wave.k() * (1.0 / sc.bc.eta_upper() + 1.0 / sc.bc.eta_lower()));
                } else {
                    c.robin(j) = cplx(0.0, wave.k() / sc.bc.eta(t));
                }
            }
        }
        total_ += n;
        components_.push_back(std::move(c));
    }
    if (total_ == 0) {
        return;
    }
    assemble();
    lu_.compute(matrix_);
    const double rcond = lu_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition_ <= kResonanceCondition)) {
        std::ostringstream os;
        os << "NystromSystem: condition estimate " << condition_
           << " exceeds 1e8; k = " << wave.k()
           << " is close to an interior resonance, perturb the wave number slightly";
        throw SolverError(os.str());
    }
}

void NystromSystem::assemble()
{
    const double k = wave_.k();
    const cplx quarter_i(0.0, 0.25);
    matrix_ = Eigen::MatrixXcd::Zero(total_, total_);

    for (const Component& target : components_) {
        const BoundaryNodes& tn = target.nodes;
        for (const Component& source : components_) {
            const BoundaryNodes& sn = source.nodes;
            const Eigen::Index ns = sn.size();
            const double trap = 2.0 * kPi / double(ns);
            const bool self = (&target == &source);
            Eigen::VectorXd log_w;
            if (self) {
                log_w = kress_log_weights(static_cast<int>(ns));
            }
            for (Eigen::Index i = 0; i < tn.size(); ++i) {
                const Point xi = tn.points.col(i);
                for (Eigen::Index j = 0; j < ns; ++j) {
                    const Point yj = sn.points.col(j);
                    const Eigen::Vector2d nt(sn.tangents(1, j), -sn.tangents(0, j));  // nu |x'|
                    const double jac = sn.jacobian(j);
                    const cplx robin = source.robin(j);
                    cplx dl, sl;  // double- and single-layer quadrature entries
                    if (self && i == j) {
                        const double c = nt.dot(sn.second.col(j)) / (jac * jac);
                        const cplx l2 = c / (4.0 * kPi);
                        const cplx m2 = (quarter_i - (std::numbers::egamma + std::log(0.5 * k * jac)) / (2.0 * kPi)) * jac;
                        const double m1 = -jac / (4.0 * kPi);
                        dl = trap * l2;
                        sl = log_w(0) * m1 + trap * m2;
                    } else {
                        const Eigen::Vector2d diff = xi - yj;
                        const double r = diff.norm();
                        const CylinderPair h = bessel_jy01(k * r);
                        const double proj = nt.dot(diff) / r;
                        const cplx l = quarter_i * k * h.h1() * proj;
                        const cplx m = quarter_i * h.h0() * jac;
                        if (self) {
                            const double dt = tn.theta(i) - sn.theta(j);
                            const double lg = std::log(4.0 * std::pow(std::sin(0.5 * dt), 2));
                            const double l1 = -(k / (4.0 * kPi)) * h.j1 * proj;
                            const double m1 = -(1.0 / (4.0 * kPi)) * h.j0 * jac;
                            const Eigen::Index d = std::abs(i - j);
                            dl = log_w(d) * l1 + trap * (l - l1 * lg);
                            sl = log_w(d) * m1 + trap * (m - m1 * lg);
                        } else {
                            dl = trap * l;
                            sl = trap * m;
                        }
                    }
                    matrix_(target.offset + i, source.offset + j) = -dl - sl * robin;
                }
            }
        }
    }
    matrix_.diagonal().array() += 0.5;
}

std::vector<Point> NystromSystem::stacked_points() const
{
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(total_));
    for (const Component& c : components_) {
        for (Eigen::Index j = 0; j < c.nodes.size(); ++j) {
            out.emplace_back(c.nodes.points.col(j));
        }
    }
    return out;
}

Eigen::MatrixXcd NystromSystem::solve(const Eigen::MatrixXcd& incident_trace) const
{
    if (incident_trace.rows() != total_) {
        throw std::invalid_argument("NystromSystem::solve: right-hand side has the wrong length");
    }
    if (total_ == 0) {
        return Eigen::MatrixXcd(0, incident_trace.cols());
    }
    Eigen::MatrixXcd density = lu_.solve(incident_trace);
    const Eigen::MatrixXcd defect = matrix_ * density - incident_trace;
    residuals_.resize(incident_trace.cols());
    for (Eigen::Index c = 0; c < incident_trace.cols(); ++c) {
        const double rhs_norm = incident_trace.col(c).norm();
        residuals_(c) = rhs_norm > 0.0 ? defect.col(c).norm() / rhs_norm : defect.col(c).norm();
    }
    Eigen::Index worst = 0;
    last_residual_ = residuals_.size() > 0 ? residuals_.maxCoeff(&worst) : 0.0;
    if (last_residual_ > kMaxResidual) {
        std::ostringstream os;
        os << "NystromSystem::solve: relative residual " << last_residual_ << " in column " << worst
           << " exceeds 1e-10";
        throw SolverError(os.str());
    }
    return density;
}

NystromSystem::FieldMatrices NystromSystem::scattered_field(const Eigen::MatrixXcd& density,
                                                            const std::vector<Point>& points) const
{
    const Eigen::Index np = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd kv(np, total_), k1(np, total_), k2(np, total_);
    for (const Component& c : components_) {
        const BoundaryNodes& sn = c.nodes;
        const double trap = 2.0 * kPi / double(sn.size());
        for (Eigen::Index p = 0; p < np; ++p) {
            for (Eigen::Index j = 0; j < sn.size(); ++j) {
                const Point y = sn.points.col(j);
                const Eigen::Vector2d nu = sn.normals.col(j);
                const double w = trap * sn.jacobian(j);
                const GreenJet jet = green_jet(points[p], y, wave_);
                const CVector2& grad = jet.grad;
                // u_s(x) = int [d_nu(y) g(x,y) u(y) + g(x,y) (ik/eta) u(y)] ds(y),
                // with d_nu(y) g = -nu . grad_x g.
                const cplx robin = c.robin(j);
                const cplx dn = -(nu(0) * grad(0) + nu(1) * grad(1));
                const CVector2 grad_dn = -(jet.hess * nu.cast<cplx>());
                const Eigen::Index col = c.offset + j;
                kv(p, col) = w * (dn + jet.g * robin);
                k1(p, col) = w * (grad_dn(0) + grad(0) * robin);
                k2(p, col) = w * (grad_dn(1) + grad(1) * robin);
            }
        }
    }
    FieldMatrices out;
    out.h3 = kv * density;
    out.grad1 = k1 * density;
    out.grad2 = k2 * density;
    return out;
}

void NystromSystem::scattered_electric(const Eigen::MatrixXcd& density, const std::vector<Point>& points,
                                       Eigen::MatrixXcd& e1, Eigen::MatrixXcd& e2) const
{
    const FieldMatrices f = scattered_field(density, points);
    const cplx factor(0.0, 1.0 / wave_.k());
    e1 = factor * f.grad2;
    e2 = -factor * f.grad1;
}

} // namespace emrtm
