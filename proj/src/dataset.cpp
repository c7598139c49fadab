#include "emrtm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "emrtm/io.hpp"
#include "emrtm/mie.hpp"
#include "emrtm/nystrom.hpp"

namespace emrtm {

namespace {

std::string where(int s, int p)
{
    return "source " + std::to_string(s) + ", polarization " + std::to_string(p) + ": ";
}

void check_polarizations(const std::vector<Eigen::Vector2d>& pols)
{
    if (pols.empty()) {
        throw std::invalid_argument("generate_dataset: at least one polarization is required");
    }
    for (const auto& p : pols) {
        if (std::abs(p.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("generate_dataset: polarizations must be unit vectors");
        }
    }
}

void check_scene(const Scene& scene, const Aperture& aperture)
{
    const double inner = std::min(aperture.source_radius(), aperture.receiver_radius());
    for (const Scatterer& sc : scene) {
        const double reach = sc.boundary.center().norm() + sc.boundary.circumradius();
        if (!(reach < inner)) {
            throw std::invalid_argument("generate_dataset: scatterer reaches the transducer rings");
        }
    }
}

void fill_from_columns(ScatterDataSet& out, const Eigen::MatrixXcd& e1, const Eigen::MatrixXcd& e2)
{
    const int np = out.polarization_count();
    for (int s = 0; s < out.sources(); ++s) {
        for (int p = 0; p < np; ++p) {
            const Eigen::Index col = Eigen::Index(s) * np + p;
            for (int r = 0; r < out.receivers(); ++r) {
                out.at(s, r, p) = CVector2(e1(r, col), e2(r, col));
            }
        }
    }
}

void modal_forward(const Scatterer& sc, ScatterDataSet& out)
{
    const WaveConfig& wave = out.wave;
    const Point center = sc.boundary.center();
    const double rho = sc.boundary.radius();
    const int order = default_modal_order(wave.k() * rho);
    const int samples = 4 * order;
    const int np = out.polarization_count();
    const int cols = out.sources() * np;

    Eigen::MatrixXcd b(2 * order + 1, cols);
    std::string failure;
#pragma omp parallel for schedule(static)
    for (int col = 0; col < cols; ++col) {
        const int s = col / np;
        const int p = col % np;
        const Point xs = out.aperture.source(s);
        const Eigen::Vector2d pol = out.polarizations[p];
        try {
            const CircleSamples cs = sample_on_circle(
                center, rho, samples,
                [&](const Point& x) { return dipole_h3(x, xs, pol, wave); },
                [&](const Point& x) { return dipole_h3_gradient(x, xs, pol, wave); });
            const IncidentProjection proj = mie_project_incident(cs.values, cs.radial, order, rho, wave);
            b.col(col) = mie_solve(proj.incident, sc.bc, rho, wave, center).scattered.values;
        } catch (const SolverError& e) {
#pragma omp critical
            if (failure.empty()) {
                failure = where(s, p) + e.what();
            }
        }
    }
    if (!failure.empty()) {
        throw SolverError(failure);
    }

    std::vector<Point> receivers(out.receivers());
    for (int r = 0; r < out.receivers(); ++r) {
        receivers[r] = out.aperture.receiver(r);
    }
    const ModalEvaluator eval(center, rho, order, wave, receivers);
    Eigen::MatrixXcd e1, e2;
    eval.electric_field(b, e1, e2);
    fill_from_columns(out, e1, e2);
}

void nystrom_forward(const Scene& scene, const ForwardOptions& opt, ScatterDataSet& out)
{
    const WaveConfig& wave = out.wave;
    const NystromSystem sys(scene, wave, opt.points_per_wavelength);
    const std::vector<Point> nodes = sys.stacked_points();
    const int np = out.polarization_count();
    const int cols = out.sources() * np;

    Eigen::MatrixXcd rhs(sys.size(), cols);
#pragma omp parallel for schedule(static)
    for (int col = 0; col < cols; ++col) {
        const Point xs = out.aperture.source(col / np);
        const Eigen::Vector2d pol = out.polarizations[col % np];
        for (Eigen::Index i = 0; i < sys.size(); ++i) {
            rhs(i, col) = dipole_h3(nodes[i], xs, pol, wave);
        }
    }

    Eigen::MatrixXcd density;
    try {
        density = sys.solve(rhs);
    } catch (const SolverError& e) {
        Eigen::Index worst = 0;
        sys.column_residuals().maxCoeff(&worst);
        throw SolverError(where(int(worst) / np, int(worst) % np) + e.what());
    }

    std::vector<Point> receivers(out.receivers());
    for (int r = 0; r < out.receivers(); ++r) {
        receivers[r] = out.aperture.receiver(r);
    }
    Eigen::MatrixXcd e1, e2;
    sys.scattered_electric(density, receivers, e1, e2);
    fill_from_columns(out, e1, e2);
}

} // namespace

const char* solver_name(SolverChoice s)
{
    switch (s) {
    case SolverChoice::Auto: return "auto";
    case SolverChoice::Mie: return "mie";
    case SolverChoice::Nystrom: return "nystrom";
    }
    return "auto";
}

SolverChoice parse_solver(const std::string& name)
{
    if (name == "auto") return SolverChoice::Auto;
    if (name == "mie") return SolverChoice::Mie;
    if (name == "nystrom") return SolverChoice::Nystrom;
    throw std::invalid_argument("unknown solver '" + name + "' (expected auto, mie or nystrom)");
}

ScatterDataSet::ScatterDataSet(Aperture ap, WaveConfig w, std::vector<Eigen::Vector2d> pols)
    : aperture(std::move(ap)), wave(w), polarizations(std::move(pols)),
      values(std::size_t(aperture.source_count()) * aperture.receiver_count() * polarizations.size(),
             CVector2::Zero())
{
}

double ScatterDataSet::max_magnitude() const
{
    double m = 0.0;
    for (const CVector2& v : values) {
        m = std::max(m, v.norm());
    }
    return m;
}

std::string scene_canonical(const Scene& scene)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "scene " << scene.size() << "\n";
    for (const Scatterer& sc : scene) {
        os << sc.boundary.describe() << " | " << sc.bc.describe() << "\n";
    }
    return os.str();
}

std::string scene_digest(const Scene& scene)
{
    return sha256_hex(scene_canonical(scene));
}

std::string dataset_digest(const ScatterDataSet& data)
{
    const auto* bytes = reinterpret_cast<const char*>(data.values.data());
    return sha256_hex(std::string_view(bytes, data.values.size() * sizeof(CVector2)));
}

ScatterDataSet generate_dataset(const Scene& scene, const Aperture& aperture, const WaveConfig& wave,
                                const std::vector<Eigen::Vector2d>& polarizations, const ForwardOptions& options)
{
    check_polarizations(polarizations);
    check_scene(scene, aperture);
    ScatterDataSet out(aperture, wave, polarizations);
    out.scene_digest = scene_digest(scene);
    if (scene.empty()) {
        return out;
    }

    const bool single_circle = scene.size() == 1 && scene[0].boundary.kind() == ParametricBoundary::Kind::Circle;
    SolverChoice solver = options.solver;
    if (solver == SolverChoice::Auto) {
        solver = single_circle ? SolverChoice::Mie : SolverChoice::Nystrom;
    }
    if (solver == SolverChoice::Mie) {
        if (!single_circle) {
            throw std::invalid_argument("generate_dataset: the modal solver needs a single circular scatterer");
        }
        if (scene[0].bc.kind() == BoundaryCondition::Kind::Impedance && !scene[0].bc.constant_eta()) {
            throw std::invalid_argument("generate_dataset: the modal solver needs a constant impedance");
        }
        modal_forward(scene[0], out);
        out.solver = "mie";
    } else {
        nystrom_forward(scene, options, out);
        out.solver = "nystrom";
    }
    return out;
}

ScatterDataSet add_noise(const ScatterDataSet& data, double level, std::uint64_t seed)
{
    if (!(level >= 0.0) || !std::isfinite(level)) {
        throw std::invalid_argument("add_noise: level must be non-negative");
    }
    ScatterDataSet out = data;
    const double sigma = data.max_magnitude();
    out.noise = NoiseRecord{true, level, seed, sigma};
    if (level == 0.0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = level * sigma;
    for (CVector2& v : out.values) {
        for (int c = 0; c < 2; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            v(c) += scale * cplx(re, im);
        }
    }
    return out;
}

} // namespace emrtm
