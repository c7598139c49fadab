#include "emrtm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace emrtm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ParametricBoundary ParametricBoundary::circle(double radius, Point center)
{
    if (!(radius > 0.0)) {
        throw std::invalid_argument("circle: radius must be positive");
    }
    return ParametricBoundary(Kind::Circle, std::move(center), radius, 1.0, 0);
}

ParametricBoundary ParametricBoundary::kite(Point center, double scale)
{
    if (!(scale > 0.0)) {
        throw std::invalid_argument("kite: scale must be positive");
    }
    return ParametricBoundary(Kind::Kite, std::move(center), 0.0, scale, 0);
}

ParametricBoundary ParametricBoundary::leaf(int n, Point center, double scale)
{
    if (n <= 0) {
        throw std::invalid_argument("leaf: number of leaves must be positive");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("leaf: scale must be positive");
    }
    return ParametricBoundary(Kind::Leaf, std::move(center), 0.0, scale, n);
}

Point ParametricBoundary::point(double t) const
{
    const double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case Kind::Circle:
        return center_ + radius_ * Point(c, s);
    case Kind::Kite:
        return center_ + scale_ * Point(c + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * s);
    case Kind::Leaf: {
        const double r = 1.0 + 0.2 * std::cos(leaves_ * t);
        return center_ + scale_ * r * Point(c, s);
    }
    }
    return center_;
}

Eigen::Vector2d ParametricBoundary::tangent(double t) const
{
    const double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case Kind::Circle:
        return radius_ * Eigen::Vector2d(-s, c);
    case Kind::Kite:
        return scale_ * Eigen::Vector2d(-s - 1.3 * std::sin(2.0 * t), 1.5 * c);
    case Kind::Leaf: {
        const double n = leaves_;
        const double r = 1.0 + 0.2 * std::cos(n * t);
        const double dr = -0.2 * n * std::sin(n * t);
        return scale_ * Eigen::Vector2d(dr * c - r * s, dr * s + r * c);
    }
    }
    return Eigen::Vector2d::Zero();
}

Eigen::Vector2d ParametricBoundary::curvature_vector(double t) const
{
    const double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case Kind::Circle:
        return radius_ * Eigen::Vector2d(-c, -s);
    case Kind::Kite:
        return scale_ * Eigen::Vector2d(-c - 2.6 * std::cos(2.0 * t), -1.5 * s);
    case Kind::Leaf: {
        const double n = leaves_;
        const double r = 1.0 + 0.2 * std::cos(n * t);
        const double dr = -0.2 * n * std::sin(n * t);
        const double ddr = -0.2 * n * n * std::cos(n * t);
        return scale_ * Eigen::Vector2d(ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s);
    }
    }
    return Eigen::Vector2d::Zero();
}

double ParametricBoundary::circumradius() const
{
    switch (kind_) {
    case Kind::Circle:
        return radius_;
    case Kind::Kite:
        // max |x(t) - c| = 2.06567 at cos t = -0.2418
        return scale_ * 2.07;
    case Kind::Leaf:
        return scale_ * 1.2;
    }
    return 0.0;
}

std::string ParametricBoundary::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::Circle: os << "circle(radius=" << radius_; break;
    case Kind::Kite: os << "kite(scale=" << scale_; break;
    case Kind::Leaf: os << "leaf(n=" << leaves_ << ",scale=" << scale_; break;
    }
    os << ",center=" << center_.x() << "," << center_.y() << ")";
    return os.str();
}

BoundaryCondition BoundaryCondition::pec()
{
    return BoundaryCondition(Kind::Pec, 0.0, 0.0, 1.0);
}

BoundaryCondition BoundaryCondition::impedance(double eta)
{
    return impedance(eta, eta);
}

BoundaryCondition BoundaryCondition::impedance(double eta_upper, double eta_lower)
{
    if (!(eta_upper >= 0.0) || !(eta_lower >= 0.0) || !std::isfinite(eta_upper) || !std::isfinite(eta_lower)) {
        throw std::invalid_argument("impedance: eta must be finite and non-negative");
    }
    return BoundaryCondition(Kind::Impedance, eta_upper, eta_lower, 1.0);
}

BoundaryCondition BoundaryCondition::penetrable(double index)
{
    if (!(index > 0.0) || !std::isfinite(index)) {
        throw std::invalid_argument("penetrable: refractive index must be positive");
    }
    return BoundaryCondition(Kind::Penetrable, 0.0, 0.0, index);
}

double BoundaryCondition::eta(double theta) const
{
    return std::sin(theta) >= 0.0 ? eta_upper_ : eta_lower_;
}

std::string BoundaryCondition::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::Pec: os << "pec"; break;
    case Kind::Impedance: os << "impedance(upper=" << eta_upper_ << ",lower=" << eta_lower_ << ")"; break;
    case Kind::Penetrable: os << "penetrable(index=" << index_ << ")"; break;
    }
    return os.str();
}

BoundaryNodes boundary_nodes(const ParametricBoundary& boundary, int count)
{
    if (count < 8 || count % 2 != 0) {
        throw std::invalid_argument("boundary_nodes: node count must be even and at least 8");
    }
    BoundaryNodes out;
    out.theta.resize(count);
    out.points.resize(2, count);
    out.normals.resize(2, count);
    out.tangents.resize(2, count);
    out.second.resize(2, count);
    out.jacobian.resize(count);
    for (int i = 0; i < count; ++i) {
        const double t = kTwoPi * i / count;
        out.theta(i) = t;
        out.points.col(i) = boundary.point(t);
        const Eigen::Vector2d d1 = boundary.tangent(t);
        out.tangents.col(i) = d1;
        out.second.col(i) = boundary.curvature_vector(t);
        const double jac = d1.norm();
        if (!(jac > 0.0)) {
            throw std::invalid_argument("boundary_nodes: degenerate parametrisation");
        }
        out.jacobian(i) = jac;
        out.normals.col(i) = Eigen::Vector2d(d1.y(), -d1.x()) / jac;
    }
    return out;
}

double boundary_length(const BoundaryNodes& nodes)
{
    return kTwoPi / double(nodes.size()) * nodes.jacobian.sum();
}

Aperture::Aperture(int sources, double source_radius, int receivers, double receiver_radius)
    : ns_(sources), rs_(source_radius), nr_(receivers), rr_(receiver_radius)
{
    if (sources < 1 || receivers < 1) {
        throw std::invalid_argument("Aperture: transducer counts must be at least 1");
    }
    if (!(source_radius > 0.0) || !(receiver_radius > 0.0)) {
        throw std::invalid_argument("Aperture: radii must be positive");
    }
}

Point Aperture::source(int j) const
{
    const double t = kTwoPi * j / ns_;
    return rs_ * Point(std::cos(t), std::sin(t));
}

Point Aperture::receiver(int j) const
{
    const double t = kTwoPi * j / nr_;
    return rr_ * Point(std::cos(t), std::sin(t));
}

double Aperture::source_weight() const { return kTwoPi * rs_ / ns_; }
double Aperture::receiver_weight() const { return kTwoPi * rr_ / nr_; }

Aperture make_aperture(int sources, double source_radius, int receivers, double receiver_radius)
{
    return Aperture(sources, source_radius, receivers, receiver_radius);
}

SamplingGrid::SamplingGrid(Point lo, Point hi, int nx, int ny)
    : lo_(std::move(lo)), hi_(std::move(hi)), nx_(nx), ny_(ny)
{
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("SamplingGrid: node counts must be positive");
    }
    if (!(hi_.x() >= lo_.x()) || !(hi_.y() >= lo_.y())) {
        throw std::invalid_argument("SamplingGrid: upper corner must not be below lower corner");
    }
    if ((nx > 1 && hi_.x() == lo_.x()) || (ny > 1 && hi_.y() == lo_.y())) {
        throw std::invalid_argument("SamplingGrid: degenerate extent with several nodes");
    }
}

Point SamplingGrid::node(int i, int j) const
{
    // Last node lands exactly on the upper corner.
    const double x = (i == nx_ - 1 && nx_ > 1) ? hi_.x() : lo_.x() + i * dx();
    const double y = (j == ny_ - 1 && ny_ > 1) ? hi_.y() : lo_.y() + j * dy();
    return Point(x, y);
}

double SamplingGrid::circumradius() const
{
    const double ax = std::max(std::abs(lo_.x()), std::abs(hi_.x()));
    const double ay = std::max(std::abs(lo_.y()), std::abs(hi_.y()));
    return std::hypot(ax, ay);
}

void check_grid_inside(const SamplingGrid& grid, const Aperture& aperture)
{
    const double r = grid.circumradius();
    if (!(r < aperture.source_radius()) || !(r < aperture.receiver_radius())) {
        throw std::invalid_argument("sampling grid must lie strictly inside the source and receiver circles");
    }
}

} // namespace emrtm
