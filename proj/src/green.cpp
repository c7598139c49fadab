#include "emrtm/green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "emrtm/specfun.hpp"

namespace emrtm {

namespace {

constexpr cplx kQuarterI{0.0, 0.25};

// Below this value of kr the Im-dyadic switches to its Taylor series.
constexpr double kImDyadicTaylorBelow = 1e-3;

double separation(const Point& x, const Point& y, const char* fn)
{
    const double r = (x - y).norm();
    if (!(r > 0.0)) {
        throw std::domain_error(std::string(fn) + ": coincident points");
    }
    return r;
}

// Hessian of a radial profile f(k r): k^2 f'' rr^T + (k/r) f' (I - rr^T).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> radial_hessian(const Eigen::Vector2d& rhat, double r, double k,
                                           Scalar d1, Scalar d2)
{
    const Eigen::Matrix2d rr = rhat * rhat.transpose();
    const Eigen::Matrix2d perp = Eigen::Matrix2d::Identity() - rr;
    return (k * k * d2) * rr.cast<Scalar>() + ((k / r) * d1) * perp.cast<Scalar>();
}

Dyadic hessian_from(const Eigen::Vector2d& diff, double r, double k, const CylinderPair& h)
{
    const double kr = k * r;
    // H0' = -H1, H0'' = -H0 + H1/(kr)
    const cplx d1 = -h.h1();
    const cplx d2 = -h.h0() + h.h1() / kr;
    return kQuarterI * radial_hessian<cplx>(diff / r, r, k, d1, d2);
}

Dyadic symmetrised(Dyadic m)
{
    const cplx off = 0.5 * (m(0, 1) + m(1, 0));
    m(0, 1) = off;
    m(1, 0) = off;
    return m;
}

} // namespace

WaveConfig WaveConfig::from_wavenumber(double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("WaveConfig: wave number must be positive and finite");
    }
    return WaveConfig(k, 2.0 * std::numbers::pi / k);
}

WaveConfig WaveConfig::from_wavelength(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("WaveConfig: wavelength must be positive and finite");
    }
    return WaveConfig(2.0 * std::numbers::pi / lambda, lambda);
}

cplx g2(const Point& x, const Point& y, const WaveConfig& wave)
{
    const double r = separation(x, y, "g2");
    return kQuarterI * bessel_jy01(wave.k() * r).h0();
}

CVector2 grad_g2(const Point& x, const Point& y, const WaveConfig& wave)
{
    const Eigen::Vector2d diff = x - y;
    const double r = separation(x, y, "grad_g2");
    const double k = wave.k();
    const cplx h1 = bessel_jy01(k * r).h1();
    const cplx radial = -cplx(0.0, 0.25 * k) * h1;
    return (radial / r) * diff.cast<cplx>();
}

Dyadic hessian_g2(const Point& x, const Point& y, const WaveConfig& wave)
{
    const Eigen::Vector2d diff = x - y;
    const double r = separation(x, y, "hessian_g2");
    return symmetrised(hessian_from(diff, r, wave.k(), bessel_jy01(wave.k() * r)));
}

GreenSample green_sample(const Point& x, const Point& y, const WaveConfig& wave)
{
    const Eigen::Vector2d diff = x - y;
    const double r = separation(x, y, "dyadic_g2");
    const double k = wave.k();
    const CylinderPair h = bessel_jy01(k * r);
    GreenSample out;
    out.g = kQuarterI * h.h0();
    out.dyadic = symmetrised(out.g * Dyadic::Identity() + hessian_from(diff, r, k, h) / (k * k));
    return out;
}

GreenJet green_jet(const Point& x, const Point& y, const WaveConfig& wave)
{
    const Eigen::Vector2d diff = x - y;
    const double r = separation(x, y, "green_jet");
    const double k = wave.k();
    const CylinderPair h = bessel_jy01(k * r);
    GreenJet out;
    out.g = kQuarterI * h.h0();
    out.grad = (-cplx(0.0, 0.25 * k) * h.h1() / r) * diff.cast<cplx>();
    out.hess = symmetrised(hessian_from(diff, r, k, h));
    return out;
}

Dyadic dyadic_g2(const Point& x, const Point& y, const WaveConfig& wave)
{
    return green_sample(x, y, wave).dyadic;
}

Eigen::Matrix2d im_dyadic_g2(const Point& x, const Point& z, const WaveConfig& wave)
{
    const Eigen::Vector2d diff = x - z;
    const double r = diff.norm();
    const double k = wave.k();
    const double kr = k * r;
    if (kr < kImDyadicTaylorBelow) {
        // J0(k|d|) = sum_n c_n (k^2 |d|^2)^n with c_n = (-1)^n / (4^n (n!)^2);
        // Hess |d|^{2n} = 2n |d|^{2n-2} I + 4n(n-1) |d|^{2n-4} d d^T.
        const double s = r * r;
        double c = 1.0;
        double j0 = 1.0;
        Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
        const Eigen::Matrix2d ddt = diff * diff.transpose();
        double k2n = 1.0;
        for (int n = 1; n <= 6; ++n) {
            c *= -1.0 / (4.0 * n * n);
            k2n *= k * k;
            j0 += c * k2n * std::pow(s, n);
            hess += (c * k2n * 2.0 * n * std::pow(s, n - 1)) * Eigen::Matrix2d::Identity();
            if (n >= 2) {
                hess += (c * k2n * 4.0 * n * (n - 1) * std::pow(s, n - 2)) * ddt;
            }
        }
        return 0.25 * (j0 * Eigen::Matrix2d::Identity() + hess / (k * k));
    }
    const CylinderPair h = bessel_jy01(kr);
    // J0' = -J1, J0'' = -J0 + J1/(kr)
    const double d1 = -h.j1;
    const double d2 = -h.j0 + h.j1 / kr;
    Eigen::Matrix2d out = 0.25 * (h.j0 * Eigen::Matrix2d::Identity()
                                  + radial_hessian<double>(diff / r, r, k, d1, d2) / (k * k));
    const double off = 0.5 * (out(0, 1) + out(1, 0));
    out(0, 1) = off;
    out(1, 0) = off;
    return out;
}

cplx dipole_h3(const Point& x, const Point& source, const Eigen::Vector2d& p, const WaveConfig& wave)
{
    const CVector2 grad = grad_g2(x, source, wave);
    return (p(1) * grad(0) - p(0) * grad(1)) / cplx(0.0, wave.k());
}

CVector2 dipole_h3_gradient(const Point& x, const Point& source, const Eigen::Vector2d& p,
                            const WaveConfig& wave)
{
    const Dyadic hess = hessian_g2(x, source, wave);
    // d_i H3 = (p2 d_i d_1 g - p1 d_i d_2 g) / (ik)
    const CVector2 out = p(1) * hess.col(0) - p(0) * hess.col(1);
    return out / cplx(0.0, wave.k());
}

cplx im_dipole_h3(const Point& x, const Point& z, const Eigen::Vector2d& p, const WaveConfig& wave)
{
    // Same construction with Im g = J0(kr)/4, whose gradient is -(k/4) J1 rhat.
    const Eigen::Vector2d diff = x - z;
    const double r = diff.norm();
    const double k = wave.k();
    if (k * r == 0.0) {
        return 0.0;
    }
    const double j1 = bessel_j(1, k * r);
    const Eigen::Vector2d grad = (-0.25 * k * j1 / r) * diff;
    return (p(1) * grad(0) - p(0) * grad(1)) / cplx(0.0, k);
}

CVector2 im_dipole_h3_gradient(const Point& x, const Point& z, const Eigen::Vector2d& p, const WaveConfig& wave)
{
    // Hess(J0/4) = k^2 (Im G - J0/4 I)
    const double k = wave.k();
    const double j0 = bessel_j(0, k * (x - z).norm());
    const Eigen::Matrix2d hess = k * k * (im_dyadic_g2(x, z, wave) - 0.25 * j0 * Eigen::Matrix2d::Identity());
    const Eigen::Vector2d out = p(1) * hess.col(0) - p(0) * hess.col(1);
    return out.cast<cplx>() / cplx(0.0, k);
}

} // namespace emrtm
