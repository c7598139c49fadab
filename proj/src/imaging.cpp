#include "emrtm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace emrtm {

namespace {

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

    static void add(double& sum, double& comp, double x)
    {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    void operator+=(cplx x)
    {
        add(re, cre, x.real());
        add(im, cim, x.imag());
    }
    cplx value() const { return {re + cre, im + cim}; }
};

cplx bilinear_dot(const Eigen::Vector2d& a, const CVector2& b)
{
    return a(0) * b(0) + a(1) * b(1);
}

cplx bilinear_dot(const CVector2& a, const CVector2& b)
{
    return a(0) * b(0) + a(1) * b(1);
}

std::vector<int> polarization_indices(const ScatterDataSet& data, const ImagingOptions& opt)
{
    std::vector<int> out;
    if (opt.polarizations.empty()) {
        for (int p = 0; p < data.polarization_count(); ++p) {
            out.push_back(p);
        }
        return out;
    }
    for (const auto& want : opt.polarizations) {
        int found = -1;
        for (int p = 0; p < data.polarization_count(); ++p) {
            if ((data.polarizations[p] - want).norm() < 1e-12) {
                found = p;
            }
        }
        if (found < 0) {
            throw std::invalid_argument("image: requested polarization is not in the dataset");
        }
        out.push_back(found);
    }
    return out;
}

void record(ImageProvenance& prov, const ScatterDataSet& data, const std::vector<int>& pols, KernelVariant v)
{
    prov.wavenumbers.push_back(data.wave.k());
    prov.dataset_digests.push_back(dataset_digest(data));
    if (prov.polarizations.empty()) {
        for (int p : pols) {
            prov.polarizations.push_back(data.polarizations[p]);
        }
    }
    prov.variant = kernel_name(v);
}

} // namespace

const char* kernel_name(KernelVariant v)
{
    return v == KernelVariant::Scalar ? "g" : "dyadic";
}

KernelVariant parse_kernel(const std::string& name)
{
    if (name == "g") return KernelVariant::Scalar;
    if (name == "dyadic") return KernelVariant::Dyadic;
    throw std::invalid_argument("unknown kernel '" + name + "' (expected g or dyadic)");
}

double ImageGrid::sample(const Point& z) const
{
    const double fx = grid.nx() > 1 ? (z.x() - grid.lo().x()) / grid.dx() : 0.0;
    const double fy = grid.ny() > 1 ? (z.y() - grid.lo().y()) / grid.dy() : 0.0;
    if (fx < -1e-9 || fy < -1e-9 || fx > grid.nx() - 1 + 1e-9 || fy > grid.ny() - 1 + 1e-9) {
        throw std::out_of_range("ImageGrid::sample: point outside the grid");
    }
    const int i = std::clamp(int(std::floor(fx)), 0, std::max(grid.nx() - 2, 0));
    const int j = std::clamp(int(std::floor(fy)), 0, std::max(grid.ny() - 2, 0));
    const double tx = grid.nx() > 1 ? std::clamp(fx - i, 0.0, 1.0) : 0.0;
    const double ty = grid.ny() > 1 ? std::clamp(fy - j, 0.0, 1.0) : 0.0;
    const int i1 = std::min(i + 1, grid.nx() - 1);
    const int j1 = std::min(j + 1, grid.ny() - 1);
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i1, j) + (1 - tx) * ty * at(i, j1)
           + tx * ty * at(i1, j1);
}

CVector2 back_propagate(const ScatterDataSet& data, const Point& z, int s, int p)
{
    CompensatedSum f0, f1;
    for (int r = 0; r < data.receivers(); ++r) {
        const Dyadic gr = dyadic_g2(z, data.aperture.receiver(r), data.wave);
        const CVector2 v = gr.transpose() * data.at(s, r, p).conjugate();
        f0 += v(0);
        f1 += v(1);
    }
    const double w = data.aperture.receiver_weight();
    return CVector2(-w * f0.value(), -w * f1.value());
}

Eigen::VectorXd image_at(const ScatterDataSet& data, const std::vector<Point>& points, const ImagingOptions& options)
{
    const std::vector<int> pols = polarization_indices(data, options);
    const WaveConfig& wave = data.wave;
    const int ns = data.sources();
    const int nr = data.receivers();
    const double k = wave.k();
    const double scale = -k * k * data.aperture.source_weight() * data.aperture.receiver_weight();
    const bool dyadic_source = options.kernel == KernelVariant::Dyadic;
    const Eigen::Index npts = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd out(npts);

#pragma omp parallel
    {
        std::vector<Dyadic> gr(nr);
        std::vector<GreenSample> gs(ns);
#pragma omp for schedule(dynamic, 16)
        for (Eigen::Index n = 0; n < npts; ++n) {
            const Point& z = points[n];
            for (int r = 0; r < nr; ++r) {
                gr[r] = dyadic_g2(z, data.aperture.receiver(r), wave);
            }
            for (int s = 0; s < ns; ++s) {
                gs[s] = green_sample(z, data.aperture.source(s), wave);
            }
            CompensatedSum total;
            for (int p : pols) {
                const Eigen::Vector2d& pol = data.polarizations[p];
                for (int s = 0; s < ns; ++s) {
                    CompensatedSum f0, f1;
                    for (int r = 0; r < nr; ++r) {
                        const CVector2 v = gr[r].transpose() * data.at(s, r, p).conjugate();
                        f0 += v(0);
                        f1 += v(1);
                    }
                    const CVector2 f(f0.value(), f1.value());
                    if (dyadic_source) {
                        const CVector2 src = gs[s].dyadic * pol.cast<cplx>();
                        total += bilinear_dot(src, f);
                    } else {
                        total += gs[s].g * bilinear_dot(pol, f);
                    }
                }
            }
            out(n) = scale * total.value().imag() + 0.0;  // no -0 on empty scenes
        }
    }
    return out;
}

ImageGrid image(const ScatterDataSet& data, const SamplingGrid& grid, const ImagingOptions& options)
{
    check_grid_inside(grid, data.aperture);
    ImageGrid out(grid);
    record(out.provenance, data, polarization_indices(data, options), options.kernel);
    std::vector<Point> points(static_cast<std::size_t>(grid.size()));
    for (Eigen::Index n = 0; n < grid.size(); ++n) {
        points[n] = grid.node(n);
    }
    out.values = image_at(data, points, options);
    return out;
}

ImageGrid image_multifreq(const std::vector<ScatterDataSet>& datasets, const SamplingGrid& grid,
                          const ImagingOptions& options)
{
    if (datasets.empty()) {
        throw std::invalid_argument("image_multifreq: no datasets");
    }
    ImageGrid out(grid);
    for (const ScatterDataSet& d : datasets) {
        if (!(d.aperture == datasets.front().aperture) || d.scene_digest != datasets.front().scene_digest) {
            throw std::invalid_argument("image_multifreq: datasets differ in aperture or scene");
        }
        const ImageGrid one = image(d, grid, options);
        out.values += one.values;
        out.provenance.wavenumbers.push_back(d.wave.k());
        out.provenance.dataset_digests.push_back(one.provenance.dataset_digests.front());
        out.provenance.polarizations = one.provenance.polarizations;
        out.provenance.variant = one.provenance.variant;
    }
    return out;
}

Profile cross_section(const ImageGrid& img, Axis axis, double offset)
{
    const SamplingGrid& g = img.grid;
    Profile out;
    out.axis = axis;
    if (axis == Axis::X1) {
        if (offset < g.lo().y() || offset > g.hi().y()) {
            throw std::out_of_range("cross_section: offset outside the grid");
        }
        const int j = g.ny() > 1 ? int(std::lround((offset - g.lo().y()) / g.dy())) : 0;
        out.offset = g.node(0, j).y();
        for (int i = 0; i < g.nx(); ++i) {
            out.coordinate.push_back(g.node(i, j).x());
            out.values.push_back(img.at(i, j));
        }
    } else {
        if (offset < g.lo().x() || offset > g.hi().x()) {
            throw std::out_of_range("cross_section: offset outside the grid");
        }
        const int i = g.nx() > 1 ? int(std::lround((offset - g.lo().x()) / g.dx())) : 0;
        out.offset = g.node(i, 0).x();
        for (int j = 0; j < g.ny(); ++j) {
            out.coordinate.push_back(g.node(i, j).y());
            out.values.push_back(img.at(i, j));
        }
    }
    return out;
}

std::vector<double> ridge_radii(const ImageGrid& img, const Point& center, int rays, double max_radius,
                                RidgeMeasure measure)
{
    if (rays < 1 || !(max_radius > 0.0)) {
        throw std::invalid_argument("ridge_radii: need rays >= 1 and a positive radius");
    }
    const double step = 0.25 * std::min(img.grid.dx(), img.grid.dy());
    const int steps = std::max(1, int(std::floor(max_radius / step)));
    std::vector<double> out(rays);
    for (int j = 0; j < rays; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / rays;
        const Eigen::Vector2d dir(std::cos(phi), std::sin(phi));
        double best = -std::numeric_limits<double>::infinity();
        double best_t = 0.0;
        double prev = img.sample(center);
        for (int n = 1; n <= steps; ++n) {
            const double t = n * step;
            const double v = img.sample(center + t * dir);
            const double score = measure == RidgeMeasure::Peak ? v : (prev - v) / step;
            if (score > best) {
                best = score;
                best_t = measure == RidgeMeasure::Peak ? t : t - 0.5 * step;
            }
            prev = v;
        }
        out[j] = best_t;
    }
    return out;
}

} // namespace emrtm
