#include "doctest.h"

#include "oracles.hpp"

#include <numbers>

#include "emrtm/dataset.hpp"
#include "emrtm/mie.hpp"
#include "emrtm/nystrom.hpp"
#include "emrtm/specfun.hpp"

using namespace emrtm;
using Eigen::Vector2d;

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI(0.0, 1.0);

ModalCoefficients modes(int order)
{
    ModalCoefficients a;
    a.order = order;
    a.values = Eigen::VectorXcd::Zero(2 * order + 1);
    return a;
}

double rel_diff(const ScatterDataSet& a, const ScatterDataSet& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - b.values[i]).squaredNorm();
        den += b.values[i].squaredNorm();
    }
    return std::sqrt(num / den);
}

Scene circle_scene(const BoundaryCondition& bc, double rho = 1.0, Point c = Point::Zero())
{
    return {{ParametricBoundary::circle(rho, c), bc}};
}

const std::vector<Vector2d> kBoth{Vector2d(1, 0), Vector2d(0, 1)};

} // namespace

TEST_CASE("projection of a zero field")
{
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(80);
    const IncidentProjection p = mie_project_incident(zero, zero, 20, 1.0, WaveConfig::from_wavelength(1.0));
    CHECK(p.incident.values.norm() == 0.0);
}

TEST_CASE("projection of J3(kr) e^{3i theta}")
{
    const WaveConfig w = WaveConfig::from_wavelength(1.0);
    const double k = w.k(), rho = 1.0;
    const int order = default_modal_order(k * rho);
    const CircleSamples s = sample_on_circle(
        Point::Zero(), rho, 4 * order,
        [&](const Point& x) { return oracle::series_j(3, k * x.norm()) * std::exp(3.0 * kI * std::atan2(x.y(), x.x())); },
        [&](const Point& x) {
            const double r = x.norm(), t = std::atan2(x.y(), x.x());
            const double dj = 0.5 * (oracle::series_j(2, k * r) - oracle::series_j(4, k * r));
            const cplx e = std::exp(3.0 * kI * t);
            const cplx ur = k * dj * e, ut = oracle::series_j(3, k * r) * 3.0 * kI * e / r;
            return CVector2(ur * x.x() / r - ut * x.y() / r, ur * x.y() / r + ut * x.x() / r);
        });
    const IncidentProjection p = mie_project_incident(s.values, s.radial, order, rho, w);
    for (int m = -order; m <= order; ++m) {
        CAPTURE(m);
        if (m == 3) {
            CHECK(std::abs(p.incident[m] - 1.0) <= 1e-12);
        } else {
            CHECK(std::abs(p.incident[m]) <= 1e-12);
        }
    }
}

TEST_CASE("projection of a distant dipole is consistent in value and normal derivative")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const double rho = 1.0;
    const int order = default_modal_order(w.k() * rho);
    const Point xs(1000.0 * std::cos(0.3), 1000.0 * std::sin(0.3));
    const Vector2d p(0.0, 1.0);
    const CircleSamples s = sample_on_circle(
        Point::Zero(), rho, 4 * order, [&](const Point& x) { return dipole_h3(x, xs, p, w); },
        [&](const Point& x) { return dipole_h3_gradient(x, xs, p, w); });
    const IncidentProjection proj = mie_project_incident(s.values, s.radial, order, rho, w);
    for (int m = -order; m <= order; ++m) {
        const cplx lhs = proj.incident[m] * w.k() * bessel_j_derivative(std::abs(m), w.k() * rho)
                         * (m < 0 ? reflect_sign(m) : 1.0);
        CHECK(std::abs(lhs - proj.radial_trace(m + order)) <= 1e-8);
    }
    CHECK(proj.radial_mismatch <= 1e-8);
}

TEST_CASE("zero incident field scatters nothing")
{
    const WaveConfig w = WaveConfig::from_wavelength(1.0);
    for (const auto& bc : {BoundaryCondition::pec(), BoundaryCondition::impedance(2.0), BoundaryCondition::penetrable(0.25)}) {
        const ModalSolution sol = mie_solve(modes(20), bc, 1.0, w);
        CHECK(sol.scattered.values.norm() == 0.0);
    }
}

TEST_CASE("PEC circle at a zero of J1 has no monopole scattering")
{
    const double x1 = oracle::bisect([](double x) { return oracle::series_j(1, x); }, 3.0, 4.5);
    const WaveConfig w = WaveConfig::from_wavenumber(x1);
    ModalCoefficients a = modes(20);
    a[0] = 1.0;
    a[1] = 0.5;
    const ModalSolution sol = mie_solve(a, BoundaryCondition::pec(), 1.0, w);
    CHECK(std::abs(sol.scattered[0]) <= 1e-10);
    CHECK(std::abs(sol.scattered[1]) > 1e-3);
}

TEST_CASE("unit index scatters nothing")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    ModalCoefficients a = modes(30);
    for (int m = -30; m <= 30; ++m) a[m] = 1.0 / (1.0 + m * m);
    const ModalSolution sol = mie_solve(a, BoundaryCondition::penetrable(1.0), 1.0, w);
    CHECK(sol.scattered.values.norm() <= 1e-14);
    CHECK((sol.transmitted.values - a.values).norm() <= 1e-13);
}

TEST_CASE("scattered field is outgoing")
{
    const WaveConfig w = WaveConfig::from_wavelength(1.0);
    ModalCoefficients a = modes(default_modal_order(w.k()));
    a[0] = 1.0;
    a[2] = 0.3;
    a[-1] = -0.2;
    const ModalSolution sol = mie_solve(a, BoundaryCondition::impedance(1.0), 1.0, w);
    const Vector2d dir = Vector2d(1.0, 2.0).normalized();
    const FieldSample s = mie_eval_scattered(sol, 1e4 * w.lambda() * dir);
    const cplx dr = s.grad_h3(0) * dir(0) + s.grad_h3(1) * dir(1);
    CHECK(std::abs(dr - kI * w.k() * s.h3) <= 1e-3 * std::abs(s.h3));
}

TEST_CASE("electric field equals curl of H3 by finite differences")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    ModalCoefficients a = modes(default_modal_order(w.k() * 1.5));
    a[0] = 1.0;
    a[3] = 0.5;
    const ModalSolution sol = mie_solve(a, BoundaryCondition::penetrable(0.25), 1.5, w, Point(0.2, -0.1));
    const double h = 1e-5;
    for (const Point& x : {Point(2.5, 0.3), Point(-1.0, 3.1), Point(0.4, 0.5)}) {
        for (bool total : {false, true}) {
            if (!total && (x - sol.center).norm() < sol.radius) continue;
            auto H = [&](const Point& at) { return (total ? mie_eval_total(sol, at) : mie_eval_scattered(sol, at)).h3; };
            const cplx d1 = (H(x + Point(h, 0)) - H(x - Point(h, 0))) / (2 * h);
            const cplx d2 = (H(x + Point(0, h)) - H(x - Point(0, h))) / (2 * h);
            const CVector2 e((kI / w.k()) * d2, -(kI / w.k()) * d1);
            const FieldSample s = total ? mie_eval_total(sol, x) : mie_eval_scattered(sol, x);
            CHECK((s.e - e).norm() <= 1e-6 * e.norm());
        }
    }
}

TEST_CASE("modal Parseval against quadrature of the flux")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const int order = default_modal_order(w.k());
    ModalCoefficients a = modes(order);
    for (int m = -order; m <= order; ++m) a[m] = std::pow(kI, m) * (m % 3 == 0 ? 1.0 : 0.4);
    const ModalSolution sol = mie_solve(a, BoundaryCondition::pec(), 1.0, w);
    const double r = 3.0;
    const int n = 400;
    double flux = 0.0;
    for (int j = 0; j < n; ++j) {
        const double t = 2 * kPi * j / n;
        const Vector2d nu(std::cos(t), std::sin(t));
        const FieldSample s = mie_eval_scattered(sol, r * nu);
        flux += (2 * kPi * r / n) * (std::conj(s.h3) * (nu(0) * s.grad_h3(0) + nu(1) * s.grad_h3(1))).imag();
    }
    // Im(conj(H_m) H_m') = 2/(pi k r): every mode carries 4 |b_m|^2
    double modal = 0.0;
    for (int m = -order; m <= order; ++m) modal += 4.0 * std::norm(sol.scattered[m]);
    CHECK(flux == doctest::Approx(modal).epsilon(1e-8));
    CHECK(far_field_power(sol) == doctest::Approx(modal).epsilon(1e-14));
}

TEST_CASE("modal evaluator agrees with pointwise evaluation")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const int order = default_modal_order(w.k());
    ModalCoefficients a = modes(order);
    a[1] = 1.0;
    a[-4] = 0.7;
    const ModalSolution sol = mie_solve(a, BoundaryCondition::pec(), 1.0, w);
    const std::vector<Point> pts{Point(3, 1), Point(-2, 5), Point(0, -4)};
    const ModalEvaluator ev(Point::Zero(), 1.0, order, w, pts);
    Eigen::MatrixXcd e1, e2;
    ev.electric_field(sol.scattered.values, e1, e2);
    const Eigen::MatrixXcd h = ev.magnetic_field(sol.scattered.values);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const FieldSample s = mie_eval_scattered(sol, pts[i]);
        CHECK(std::abs(h(i, 0) - s.h3) <= 1e-13 * std::abs(s.h3));
        CHECK(std::abs(e1(i, 0) - s.e(0)) <= 1e-13 * s.e.norm());
        CHECK(std::abs(e2(i, 0) - s.e(1)) <= 1e-13 * s.e.norm());
    }
}

TEST_CASE("Nystrom matches Mie for a PEC circle with k rho = 2")
{
    const WaveConfig w = WaveConfig::from_wavenumber(2.0);
    const Aperture ap(3, 10.0, 8, 10.0);
    const Scene scene = circle_scene(BoundaryCondition::pec());
    const ScatterDataSet mie = generate_dataset(scene, ap, w, kBoth, {SolverChoice::Mie, 10});
    const ScatterDataSet ny = generate_dataset(scene, ap, w, kBoth, {SolverChoice::Nystrom, 20});
    CHECK(mie.solver == "mie");
    CHECK(ny.solver == "nystrom");
    CHECK(rel_diff(ny, mie) <= 1e-6);
}

TEST_CASE("Nystrom matches Mie for impedance circles")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const Aperture ap(4, 20.0, 16, 25.0);
    for (double eta : {1.0, 0.3, 50.0}) {
        const Scene scene = circle_scene(BoundaryCondition::impedance(eta), 0.8, Point(0.3, -0.2));
        const ScatterDataSet mie = generate_dataset(scene, ap, w, kBoth, {SolverChoice::Mie, 10});
        const ScatterDataSet ny = generate_dataset(scene, ap, w, kBoth, {SolverChoice::Nystrom, 10});
        CAPTURE(eta);
        CHECK(rel_diff(ny, mie) <= 1e-8);
    }
}

TEST_CASE("Nystrom converges on a kite")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const Aperture ap(4, 20.0, 16, 20.0);
    const Scene smooth{{ParametricBoundary::kite(Point(0.2, 0.1)), BoundaryCondition::impedance(1.0)}};
    CHECK(rel_diff(generate_dataset(smooth, ap, w, kBoth, {SolverChoice::Nystrom, 10}),
                   generate_dataset(smooth, ap, w, kBoth, {SolverChoice::Nystrom, 20}))
          <= 1e-10);

    // eta jumps at the two ends of the kite: algebraic, roughly second order
    const Scene split{{ParametricBoundary::kite(Point(0.2, 0.1)), BoundaryCondition::impedance(1000.0, 1.0)}};
    const ScatterDataSet d10 = generate_dataset(split, ap, w, kBoth, {SolverChoice::Nystrom, 10});
    const ScatterDataSet d20 = generate_dataset(split, ap, w, kBoth, {SolverChoice::Nystrom, 20});
    const ScatterDataSet d40 = generate_dataset(split, ap, w, kBoth, {SolverChoice::Nystrom, 40});
    const double e10 = rel_diff(d10, d40), e20 = rel_diff(d20, d40);
    CHECK(e20 < e10 / 2.5);
    CHECK(e20 <= 2e-3);
}

TEST_CASE("zero incident field gives zero density")
{
    const NystromSystem sys(circle_scene(BoundaryCondition::impedance(1.0)), WaveConfig::from_wavelength(1.0), 10);
    const Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(sys.size(), 3);
    const Eigen::MatrixXcd dens = sys.solve(rhs);
    CHECK(dens.norm() == 0.0);
    const auto f = sys.scattered_field(dens, {Point(3, 4), Point(-5, 0)});
    CHECK(f.h3.norm() == 0.0);
    CHECK(f.grad1.norm() == 0.0);
}

TEST_CASE("interior resonance is reported")
{
    const double j0 = oracle::bisect([](double x) { return oracle::series_j(0, x); }, 2.0, 3.0);
    const Scene scene = circle_scene(BoundaryCondition::pec());
    CHECK_THROWS_AS(NystromSystem(scene, WaveConfig::from_wavenumber(j0), 10), SolverError);
    CHECK_NOTHROW(NystromSystem(scene, WaveConfig::from_wavenumber(j0 + 0.05), 10));
    CHECK_THROWS_AS(generate_dataset(scene, Aperture(4, 10.0, 4, 10.0), WaveConfig::from_wavenumber(j0), kBoth,
                                     {SolverChoice::Nystrom, 10}),
                    SolverError);
    CHECK_NOTHROW(generate_dataset(scene, Aperture(4, 10.0, 4, 10.0), WaveConfig::from_wavenumber(j0), kBoth,
                                   {SolverChoice::Mie, 10}));
}

TEST_CASE("two circles scatter more than the sum of their parts")
{
    const WaveConfig w = WaveConfig::from_wavelength(1.0);
    const Aperture ap(16, 50.0, 16, 50.0);
    const Scatterer left{ParametricBoundary::circle(2.0, Point(-2.5, 0)), BoundaryCondition::pec()};
    const Scatterer right{ParametricBoundary::circle(2.0, Point(2.5, 0)), BoundaryCondition::pec()};
    const ScatterDataSet both = generate_dataset({left, right}, ap, w, kBoth);
    CHECK(both.solver == "nystrom");
    const ScatterDataSet a = generate_dataset({left}, ap, w, kBoth, {SolverChoice::Mie, 10});
    const ScatterDataSet b = generate_dataset({right}, ap, w, kBoth, {SolverChoice::Mie, 10});
    ScatterDataSet born = a;
    for (std::size_t i = 0; i < born.values.size(); ++i) born.values[i] += b.values[i];
    CHECK(rel_diff(both, born) > 1e-3);

    // each circle alone is reproduced by the integral equation
    const ScatterDataSet a_ny = generate_dataset({left}, ap, w, kBoth, {SolverChoice::Nystrom, 10});
    CHECK(rel_diff(a_ny, a) <= 1e-8);
}

TEST_CASE("reciprocity of the scattered field")
{
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const Aperture ap(24, 30.0, 24, 30.0);
    const std::vector<Scene> scenes{
        circle_scene(BoundaryCondition::pec()),
        circle_scene(BoundaryCondition::penetrable(0.25), 1.0, Point(0.5, 0.5)),
        {{ParametricBoundary::kite(), BoundaryCondition::impedance(1.0)}},
    };
    for (const Scene& scene : scenes) {
        const ScatterDataSet d = generate_dataset(scene, ap, w, kBoth);
        double worst = 0.0;
        for (int s = 0; s < 24; ++s)
            for (int r = 0; r < 24; ++r)
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q) {
                        const cplx lhs = kBoth[q].cast<cplx>().dot(d.at(s, r, p));
                        const cplx rhs = kBoth[p].cast<cplx>().dot(d.at(r, s, q));
                        worst = std::max(worst, std::abs(lhs - rhs));
                    }
        CAPTURE(d.solver);
        CHECK(worst <= 1e-6 * d.max_magnitude());
    }
}

TEST_CASE("empty scene")
{
    const ScatterDataSet d = generate_dataset({}, Aperture(8, 5.0, 6, 5.0), WaveConfig::from_wavelength(1.0), kBoth);
    CHECK(d.values.size() == 8 * 6 * 2);
    CHECK(d.max_magnitude() == 0.0);
    CHECK(d.solver == "none");
}

TEST_CASE("generation is deterministic")
{
    const Scene scene{{ParametricBoundary::leaf(5, Point(), 0.6), BoundaryCondition::pec()}};
    const Aperture ap(12, 10.0, 12, 10.0);
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    const ScatterDataSet a = generate_dataset(scene, ap, w, kBoth);
    const ScatterDataSet b = generate_dataset(scene, ap, w, kBoth);
    CHECK(dataset_digest(a) == dataset_digest(b));
    CHECK(a.scene_digest == scene_digest(scene));
    CHECK(scene_digest(scene) != scene_digest(circle_scene(BoundaryCondition::pec())));
}

TEST_CASE("invalid requests")
{
    const WaveConfig w = WaveConfig::from_wavelength(1.0);
    const Scene scene = circle_scene(BoundaryCondition::pec(), 1.0, Point(4.0, 0.0));
    CHECK_THROWS_AS(generate_dataset(scene, Aperture(4, 4.5, 4, 10.0), w, kBoth), std::invalid_argument);
    CHECK_THROWS_AS(generate_dataset(scene, Aperture(4, 10.0, 4, 10.0), w, {Vector2d(1, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(generate_dataset(scene, Aperture(4, 10.0, 4, 10.0), w, {}), std::invalid_argument);
    const Scene kite{{ParametricBoundary::kite(), BoundaryCondition::pec()}};
    CHECK_THROWS_AS(generate_dataset(kite, Aperture(4, 10.0, 4, 10.0), w, kBoth, {SolverChoice::Mie, 10}),
                    std::invalid_argument);
    CHECK(parse_solver("nystrom") == SolverChoice::Nystrom);
    CHECK_THROWS_AS(parse_solver("fem"), std::invalid_argument);
}

TEST_CASE("noise")
{
    const Scene scene = circle_scene(BoundaryCondition::pec());
    const ScatterDataSet clean =
        generate_dataset(scene, Aperture(128, 100.0, 128, 100.0), WaveConfig::from_wavelength(0.5), {Vector2d(1, 0)});

    const ScatterDataSet same = add_noise(clean, 0.0, 3);
    CHECK(dataset_digest(same) == dataset_digest(clean));

    const double sigma = clean.max_magnitude();
    for (double mu : {0.1, 0.2, 0.3, 0.5}) {
        const ScatterDataSet noisy = add_noise(clean, mu, 42);
        double sum = 0.0, sq = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < clean.values.size(); ++i) {
            const CVector2 d = noisy.values[i] - clean.values[i];
            for (int c = 0; c < 2; ++c) {
                for (double v : {d(c).real(), d(c).imag()}) {
                    sum += v;
                    sq += v * v;
                    ++n;
                }
            }
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sq / n - mean * mean);
        CAPTURE(mu);
        CHECK(sd == doctest::Approx(mu * sigma).epsilon(0.05));
        CHECK(noisy.noise.applied);
        CHECK(noisy.noise.sigma == sigma);
        CHECK(dataset_digest(add_noise(clean, mu, 42)) == dataset_digest(noisy));
        CHECK(dataset_digest(add_noise(clean, mu, 43)) != dataset_digest(noisy));
    }
    CHECK_THROWS_AS(add_noise(clean, -0.1, 1), std::invalid_argument);
}
