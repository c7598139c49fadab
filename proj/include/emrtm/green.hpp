#pragma once

#include <complex>

#include <Eigen/Dense>

namespace emrtm {

using Point = Eigen::Vector2d;
using CVector2 = Eigen::Vector2cd;
using Dyadic = Eigen::Matrix2cd;
using cplx = std::complex<double>;

/// Wave number and wavelength of a time-harmonic field (e^{ikr} outgoing).
class WaveConfig {
public:
    static WaveConfig from_wavenumber(double k);
    static WaveConfig from_wavelength(double lambda);

    double k() const { return k_; }
    double lambda() const { return lambda_; }

    bool operator==(const WaveConfig&) const = default;

private:
    WaveConfig(double k, double lambda) : k_(k), lambda_(lambda) {}
    double k_;
    double lambda_;
};

/// Fundamental solution of the 2D Helmholtz equation, (i/4) H0(k|x-y|).
cplx g2(const Point& x, const Point& y, const WaveConfig& wave);

/// Gradient of g2 with respect to x.
CVector2 grad_g2(const Point& x, const Point& y, const WaveConfig& wave);

/// Hessian of g2 with respect to x.
Dyadic hessian_g2(const Point& x, const Point& y, const WaveConfig& wave);

/// 2D dyadic Green function g I + Hess(g)/k^2. Exactly symmetric.
Dyadic dyadic_g2(const Point& x, const Point& y, const WaveConfig& wave);

/// Im of the dyadic Green function, (1/4)(I + grad grad / k^2) J0(k|x-z|).
/// Smooth through x = z, where it equals I/8.
Eigen::Matrix2d im_dyadic_g2(const Point& x, const Point& z, const WaveConfig& wave);

/// Everything the imaging kernels need from one source/receiver pair,
/// sharing a single Hankel evaluation.
struct GreenSample {
    cplx g;
    Dyadic dyadic;
};
GreenSample green_sample(const Point& x, const Point& y, const WaveConfig& wave);

/// g2 with its gradient and Hessian in x, from one Hankel evaluation.
struct GreenJet {
    cplx g;
    CVector2 grad;
    Dyadic hess;
};
GreenJet green_jet(const Point& x, const Point& y, const WaveConfig& wave);

/// Out-of-plane magnetic field H3 of an in-plane electric dipole p at x_s,
/// normalised so that the in-plane electric field (i/k)(d2 H3, -d1 H3)
/// equals dyadic_g2(x, x_s) p.
cplx dipole_h3(const Point& x, const Point& source, const Eigen::Vector2d& p, const WaveConfig& wave);

/// Gradient of dipole_h3 with respect to x.
CVector2 dipole_h3_gradient(const Point& x, const Point& source, const Eigen::Vector2d& p,
                            const WaveConfig& wave);

/// H3 whose electric field is Im(dyadic_g2(x, z)) p; smooth everywhere.
cplx im_dipole_h3(const Point& x, const Point& z, const Eigen::Vector2d& p, const WaveConfig& wave);

/// Gradient of im_dipole_h3 with respect to x.
CVector2 im_dipole_h3_gradient(const Point& x, const Point& z, const Eigen::Vector2d& p, const WaveConfig& wave);

/// In-plane electric field (i/k)(d2 H3, -d1 H3) from a gradient of H3.
inline CVector2 te_electric_field(const CVector2& grad_h3, const WaveConfig& wave)
{
    const cplx factor(0.0, 1.0 / wave.k());
    return CVector2(factor * grad_h3(1), -factor * grad_h3(0));
}

} // namespace emrtm
