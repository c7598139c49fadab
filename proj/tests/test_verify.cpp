#include "doctest.h"

#include "oracles.hpp"

#include <algorithm>
#include <numbers>

#include "json.hpp"

#include "emrtm/dataset.hpp"
#include "emrtm/imaging.hpp"
#include "emrtm/verify.hpp"

using namespace emrtm;
using Eigen::Vector2d;

namespace {

const WaveConfig kWave = WaveConfig::from_wavelength(1.0);

ModalSolution single_mode(const BoundaryCondition& bc, const WaveConfig& w, int m = 0)
{
    ModalCoefficients a;
    a.order = default_modal_order(w.k());
    a.values = Eigen::VectorXcd::Zero(2 * a.order + 1);
    a[m] = 1.0;
    return mie_solve(a, bc, 1.0, w);
}

} // namespace

TEST_CASE("exact Helmholtz-Kirchhoff identity at the origin")
{
    const IdentityReport r = hk_exact(Point::Zero(), Point::Zero(), 5.0 * kWave.lambda(), kWave, 512);
    CHECK(r.residual <= 1e-10);
    CHECK(r.pass);
    CHECK(r.runtime_seconds < 1.0);
}

TEST_CASE("exact identity converges spectrally in N")
{
    const Point x(0.3, 0.2), z(-0.4, 0.1);
    const double R = 5.0 * kWave.lambda();
    const double coarse = hk_exact(x, z, R, kWave, 8).residual;
    const double fine = hk_exact(x, z, R, kWave, 16).residual;
    CHECK(coarse > 1e-12);
    CHECK(fine <= coarse / 100.0);
}

TEST_CASE("exact identity does not depend on R")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5; ++i) {
        const Point x = oracle::random_point(rng, 1.0), z = oracle::random_point(rng, 1.0);
        CHECK(hk_exact(x, z, 5.0 * kWave.lambda(), kWave, 512).residual <= 1e-10);
        CHECK(hk_exact(x, z, 10.0 * kWave.lambda(), kWave, 1024).residual <= 1e-10);
    }
}

TEST_CASE("far-field identity at the origin")
{
    // k 2 pi R |g(0, R)|^2 against Im g(0, 0) = 1/4
    const double R = 200.0 * kWave.lambda();
    const double direct = kWave.k() * 2.0 * std::numbers::pi * R * std::norm(g2(Point::Zero(), Point(R, 0.0), kWave));
    const FarFieldResiduals f = hk_farfield_residuals(Point::Zero(), Point::Zero(), R, kWave, 512);
    CHECK(std::abs(direct - 0.25) <= 2e-3);
    CHECK(f.scalar == doctest::Approx(std::abs(direct - 0.25)).epsilon(1e-6));
}

TEST_CASE("far-field residuals decay with the ring radius")
{
    const Point x(0.3, 0.2), z(-0.4, 0.1);
    double prev_s = 1.0, prev_d = 1.0;
    for (double f : {100.0, 200.0, 400.0, 800.0}) {
        const FarFieldResiduals r = hk_farfield_residuals(x, z, f * kWave.lambda(), kWave, 512);
        CHECK(r.scalar < prev_s + 1e-9);
        CHECK(r.dyadic < prev_d + 1e-9);
        prev_s = r.scalar;
        prev_d = r.dyadic;
    }
}

TEST_CASE("far-field decay exponent lies in [0.8, 1.2]")
{
    const std::vector<double> radii{100.0, 200.0, 400.0};
    const IdentityReport r = hk_farfield(Point(0.3, 0.2), Point(-0.4, 0.1), radii, kWave);
    CAPTURE(r.metric("scalar_exponent"));
    CAPTURE(r.metric("dyadic_exponent"));
    CHECK(r.metric("scalar_exponent") >= 0.8);
    CHECK(r.metric("scalar_exponent") <= 1.2);
    CHECK(r.metric("dyadic_exponent") >= 0.8);
    CHECK(r.metric("dyadic_exponent") <= 1.2);
    CHECK(r.pass);
    CHECK(r.runtime_seconds < 10.0);
}

TEST_CASE("far-field exponent with an open upper bound")
{
    const IdentityReport r = hk_farfield(Point(0.3, 0.2), Point(-0.4, 0.1), {100.0, 200.0, 400.0}, kWave, 0.8,
                                         std::numeric_limits<double>::infinity());
    CHECK(r.pass);
    CHECK(r.metric("scalar_exponent") >= 0.8);
}

TEST_CASE("energy flux with no scattered field")
{
    ModalCoefficients zero;
    zero.order = 10;
    zero.values = Eigen::VectorXcd::Zero(21);
    const IdentityReport r = energy_flux(mie_solve(zero, BoundaryCondition::pec(), 1.0, kWave), 50.0);
    CHECK(r.metric("flux") == 0.0);
    CHECK(r.metric("far_field_power") == 0.0);
    CHECK(r.pass);
}

TEST_CASE("energy flux of a single mode on a PEC circle")
{
    const IdentityReport r = energy_flux(single_mode(BoundaryCondition::pec(), kWave), 1.0 + 100.0 * kWave.lambda());
    CHECK(r.metric("flux") > 0.0);
    CHECK(r.metric("far_field_power") > 0.0);
    CHECK(r.residual <= 1e-8);
    CHECK(std::abs(r.metric("absorbed")) <= 1e-10);
    CHECK(r.pass);
}

TEST_CASE("impedance boundaries absorb, lossless ones do not")
{
    const IdentityReport imp = energy_flux(single_mode(BoundaryCondition::impedance(1.0), kWave, 1), 50.0);
    CHECK(imp.metric("absorbed") > 1e-3);
    CHECK(imp.residual <= 1e-8);
    const IdentityReport pen = energy_flux(single_mode(BoundaryCondition::penetrable(0.25), kWave, 2), 50.0);
    CHECK(std::abs(pen.metric("absorbed")) <= 1e-10);
    CHECK(pen.pass);
}

TEST_CASE("no contrast, no scattered energy")
{
    const Scatterer same{ParametricBoundary::circle(1.0), BoundaryCondition::penetrable(1.0)};
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    for (const Point& z : spiral_points(10, Point::Zero(), 1.5)) {
        CHECK(scattered_energy(same, z, Vector2d(1, 0), w) <= 1e-26);
    }
    const ScatterDataSet d = generate_dataset({same}, Aperture(32, 20.0, 32, 20.0), w, {Vector2d(1, 0)});
    const Eigen::VectorXd img = image_at(d, spiral_points(10, Point::Zero(), 1.5));
    CHECK(img.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("scattered energy is small far from the scatterer")
{
    const Scatterer disc{ParametricBoundary::circle(1.0), BoundaryCondition::penetrable(0.25)};
    const WaveConfig w = WaveConfig::from_wavelength(0.5);
    double top = 0.0;
    for (const Point& z : spiral_points(50, Point::Zero(), 1.5)) {
        top = std::max(top, scattered_energy(disc, z, Vector2d(1, 0), w));
    }
    const double far = scattered_energy(disc, Point(1.0 + 5.0 * w.lambda(), 0.4), Vector2d(1, 0), w);
    CHECK(far * 5.0 <= top);
}

TEST_CASE("image is proportional to the scattered energy of the Im source")
{
    const Scatterer disc{ParametricBoundary::circle(1.0), BoundaryCondition::penetrable(0.25)};
    const IdentityReport r = theorem31_consistency(disc, spiral_points(50, Point::Zero(), 1.5),
                                                   WaveConfig::from_wavelength(0.5), Aperture(128, 100.0, 128, 100.0));
    CHECK(r.metric("correlation") >= 0.95);
    CHECK(r.metric("scale") > 0.0);
    CHECK(r.pass);
}

TEST_CASE("reciprocity check")
{
    const std::vector<Vector2d> both{Vector2d(1, 0), Vector2d(0, 1)};
    const Aperture ap(32, 20.0, 32, 20.0);
    const WaveConfig w = WaveConfig::from_wavelength(0.5);

    const ScatterDataSet zero({ap}, w, both);
    CHECK(reciprocity_check(zero).residual == 0.0);
    CHECK(reciprocity_check(zero).pass);

    const Scene disc{{ParametricBoundary::circle(1.0, Point(0.3, 0.0)), BoundaryCondition::pec()}};
    const ScatterDataSet d = generate_dataset(disc, ap, w, both);
    const IdentityReport ok = reciprocity_check(d);
    CHECK(ok.residual <= 1e-8);
    CHECK(ok.pass);

    // receivers relabelled in reverse order
    ScatterDataSet bad = d;
    for (int s = 0; s < 32; ++s)
        for (int r = 0; r < 32; ++r)
            for (int p = 0; p < 2; ++p) bad.at(s, r, p) = d.at(s, 31 - r, p);
    const IdentityReport broken = reciprocity_check(bad);
    CHECK(broken.residual >= 0.1);
    CHECK_FALSE(broken.pass);

    const ScatterDataSet apart = generate_dataset(disc, Aperture(32, 20.0, 16, 25.0), w, both);
    CHECK_THROWS_AS(reciprocity_check(apart), std::invalid_argument);
}

TEST_CASE("report serialisation")
{
    const IdentityReport r = hk_exact(Point(0.1, 0.0), Point(0.0, 0.2), 5.0, kWave, 256);
    const std::string line = to_json_line(r);
    CHECK(line.find('\n') == std::string::npos);
    const auto j = nlohmann::json::parse(line);
    CHECK(j["name"] == "hk_exact");
    CHECK(j["pass"] == r.pass);
    CHECK(j["residual"].get<double>() == r.residual);
    CHECK(j.contains("parameters"));
    CHECK(j.contains("runtime_seconds"));
    CHECK_THROWS(r.metric("no_such_metric"));
}

TEST_CASE("spiral points")
{
    const auto pts = spiral_points(50, Point(1.0, -1.0), 2.0);
    CHECK(pts.size() == 50);
    for (const Point& p : pts) CHECK((p - Point(1.0, -1.0)).norm() <= 2.0 + 1e-12);
}
