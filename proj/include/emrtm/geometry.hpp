#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emrtm/green.hpp"

namespace emrtm {

/// Closed, counter-clockwise parametric curve x(theta), theta in [0, 2pi).
class ParametricBoundary {
public:
    enum class Kind { Circle, Kite, Leaf };

    static ParametricBoundary circle(double radius, Point center = Point::Zero());
    /// (cos t + 0.65 cos 2t - 0.65, 1.5 sin t), scaled then shifted.
    static ParametricBoundary kite(Point center = Point::Zero(), double scale = 1.0);
    /// r(t) = 1 + 0.2 cos(n t), scaled then shifted.
    static ParametricBoundary leaf(int n, Point center = Point::Zero(), double scale = 1.0);

    Kind kind() const { return kind_; }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    double scale() const { return scale_; }
    int leaves() const { return leaves_; }

    Point point(double t) const;
    Eigen::Vector2d tangent(double t) const;     // x'(t)
    Eigen::Vector2d curvature_vector(double t) const;  // x''(t)

    /// Upper bound on |x(t) - center| over the curve.
    double circumradius() const;

    std::string describe() const;

    bool operator==(const ParametricBoundary&) const = default;

private:
    ParametricBoundary(Kind kind, Point center, double radius, double scale, int leaves)
        : kind_(kind), center_(std::move(center)), radius_(radius), scale_(scale), leaves_(leaves) {}

    Kind kind_;
    Point center_;
    double radius_ = 0.0;
    double scale_ = 1.0;
    int leaves_ = 0;
};

/// PEC, impedance (eta >= 0, possibly different on the upper and lower
/// halves of the curve) or penetrable with constant refractive index.
class BoundaryCondition {
public:
    enum class Kind { Pec, Impedance, Penetrable };

    static BoundaryCondition pec();
    static BoundaryCondition impedance(double eta);
    /// eta = upper where sin(theta) >= 0, lower elsewhere.
    static BoundaryCondition impedance(double eta_upper, double eta_lower);
    static BoundaryCondition penetrable(double index);

    Kind kind() const { return kind_; }
    double eta(double theta) const;
    bool constant_eta() const { return eta_upper_ == eta_lower_; }
    double eta_upper() const { return eta_upper_; }
    double eta_lower() const { return eta_lower_; }
    double index() const { return index_; }

    std::string describe() const;

    bool operator==(const BoundaryCondition&) const = default;

private:
    BoundaryCondition(Kind kind, double up, double low, double index)
        : kind_(kind), eta_upper_(up), eta_lower_(low), index_(index) {}

    Kind kind_;
    double eta_upper_ = 0.0;
    double eta_lower_ = 0.0;
    double index_ = 1.0;
};

struct Scatterer {
    ParametricBoundary boundary;
    BoundaryCondition bc;
    bool operator==(const Scatterer&) const = default;
};

using Scene = std::vector<Scatterer>;

/// Uniform trapezoid nodes on a boundary. Columns index nodes.
struct BoundaryNodes {
    Eigen::VectorXd theta;
    Eigen::Matrix2Xd points;
    Eigen::Matrix2Xd normals;      // unit, outward
    Eigen::Matrix2Xd tangents;     // x'(theta)
    Eigen::Matrix2Xd second;       // x''(theta)
    Eigen::VectorXd jacobian;      // |x'(theta)|

    Eigen::Index size() const { return theta.size(); }
};

BoundaryNodes boundary_nodes(const ParametricBoundary& boundary, int count);

/// Trapezoid-rule length of the curve.
double boundary_length(const BoundaryNodes& nodes);

/// Sources and receivers evenly spaced on two centred circles.
class Aperture {
public:
    Aperture(int sources, double source_radius, int receivers, double receiver_radius);

    int source_count() const { return ns_; }
    int receiver_count() const { return nr_; }
    double source_radius() const { return rs_; }
    double receiver_radius() const { return rr_; }

    Point source(int j) const;
    Point receiver(int j) const;

    /// |Gamma| / N, the 2D quadrature weight of one transducer.
    double source_weight() const;
    double receiver_weight() const;

    bool coincident() const { return ns_ == nr_ && rs_ == rr_; }

    bool operator==(const Aperture&) const = default;

private:
    int ns_;
    double rs_;
    int nr_;
    double rr_;
};

Aperture make_aperture(int sources, double source_radius, int receivers, double receiver_radius);

/// Vertex-centred rectangular grid. Node (i, j) sits at
/// (lo.x + i * dx, lo.y + j * dy) with i fastest in flat storage.
class SamplingGrid {
public:
    SamplingGrid(Point lo, Point hi, int nx, int ny);

    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    Eigen::Index size() const { return Eigen::Index(nx_) * ny_; }

    double dx() const { return nx_ > 1 ? (hi_.x() - lo_.x()) / (nx_ - 1) : 0.0; }
    double dy() const { return ny_ > 1 ? (hi_.y() - lo_.y()) / (ny_ - 1) : 0.0; }

    Point node(int i, int j) const;
    Point node(Eigen::Index flat) const { return node(int(flat % nx_), int(flat / nx_)); }

    /// Largest distance from the origin to the rectangle.
    double circumradius() const;

    bool operator==(const SamplingGrid&) const = default;

private:
    Point lo_;
    Point hi_;
    int nx_;
    int ny_;
};

/// Throws std::invalid_argument unless the grid lies strictly inside both rings.
void check_grid_inside(const SamplingGrid& grid, const Aperture& aperture);

} // namespace emrtm
