#include "emrtm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emrtm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

// Regime boundaries for the order-0/1 kernels. Below kSeriesLimit the
// ascending series loses at most ~2 digits to cancellation; above
// kAsymptoticLimit the Hankel expansion reaches machine precision before
// its terms start to grow.
constexpr double kSeriesLimit = 6.0;
constexpr double kAsymptoticLimit = 25.0;

constexpr double kRescaleAbove = 1e250;

void require_order(int m, const char* fn)
{
    if (m < 0) {
        throw std::domain_error(std::string(fn) + ": negative order " + std::to_string(m));
    }
}

CylinderPair ascending_series(double x)
{
    const double q = 0.25 * x * x;
    double j0 = 0.0, j1 = 0.0, y0s = 0.0, y1s = 0.0;
    double t0 = 1.0;  // (-q)^k / (k!)^2
    double t1 = 1.0;  // (-q)^k / (k! (k+1)!)
    double harmonic = 0.0;
    double psi_k1 = -kEulerGamma;        // psi(k+1)
    double psi_k2 = 1.0 - kEulerGamma;   // psi(k+2)
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            t0 *= -q / (double(k) * k);
            t1 *= -q / (double(k) * (k + 1));
            harmonic += 1.0 / k;
            psi_k1 += 1.0 / k;
            psi_k2 += 1.0 / (k + 1);
        }
        j0 += t0;
        j1 += t1;
        y0s += harmonic * t0;
        y1s += (psi_k1 + psi_k2) * t1;
        if (k > 2 && std::abs(t0) < 1e-18 * std::abs(j0) && std::abs(t1) < 1e-18 * std::abs(j1)) {
            break;
        }
    }
    j1 *= 0.5 * x;
    const double log_half = std::log(0.5 * x);
    CylinderPair out{};
    out.j0 = j0;
    out.j1 = j1;
    out.y0 = (2.0 / kPi) * ((log_half + kEulerGamma) * j0 - y0s);
    out.y1 = (2.0 / kPi) * log_half * j1 - 2.0 / (kPi * x) - (x / (2.0 * kPi)) * y1s;
    return out;
}

// Miller backward recurrence normalised by J0 + 2 sum J_2k = 1, followed by
// the Neumann series for Y0 and its term-wise derivative for Y1.
CylinderPair miller_neumann(double x)
{
    const int start = 2 * ((static_cast<int>(x) + 60) / 2);
    std::vector<double> v(static_cast<std::size_t>(start) + 2, 0.0);
    v[start] = 1e-30;
    for (int n = start; n >= 1; --n) {
        v[n - 1] = (2.0 * n / x) * v[n] - v[n + 1];
        if (std::abs(v[n - 1]) > kRescaleAbove) {
            for (int i = n - 1; i <= start; ++i) {
                v[i] /= kRescaleAbove;
            }
        }
    }
    double norm = v[0];
    for (int n = 2; n <= start; n += 2) {
        norm += 2.0 * v[n];
    }
    for (double& e : v) {
        e /= norm;
    }

    double s0 = 0.0, s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= start; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sign * v[2 * k] / k;
        s1 += sign * (v[2 * k - 1] - v[2 * k + 1]) / k;
    }
    const double lg = std::log(0.5 * x) + kEulerGamma;
    CylinderPair out{};
    out.j0 = v[0];
    out.j1 = v[1];
    out.y0 = (2.0 / kPi) * (lg * v[0] - 2.0 * s0);
    out.y1 = (2.0 / kPi) * (lg * v[1] - v[0] / x + s1);
    return out;
}

// Hankel large-argument expansion for orders 0 and 1.
void hankel_asymptotic(double mu, double x, double& p, double& q)
{
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double mag = std::abs(term);
        if (mag > prev) {
            break;
        }
        prev = mag;
        switch (k % 4) {
        case 0: p += term; break;
        case 1: q += term; break;
        case 2: p -= term; break;
        default: q -= term; break;
        }
        if (mag < 1e-17) {
            break;
        }
    }
}

CylinderPair asymptotic(double x)
{
    double p0, q0, p1, q1;
    hankel_asymptotic(0.0, x, p0, q0);
    hankel_asymptotic(4.0, x, p1, q1);
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double amp = std::sqrt(2.0 / (kPi * x)) * std::numbers::sqrt2 * 0.5;
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    const double cos0 = c + s, sin0 = s - c;
    const double cos1 = s - c, sin1 = -s - c;
    CylinderPair out{};
    out.j0 = amp * (p0 * cos0 - q0 * sin0);
    out.y0 = amp * (p0 * sin0 + q0 * cos0);
    out.j1 = amp * (p1 * cos1 - q1 * sin1);
    out.y1 = amp * (p1 * sin1 + q1 * cos1);
    return out;
}

// J_m for m = 0..max_order by backward recurrence, anchored to the accurate
// low-order pair (whichever of J0, J1 is larger).
void j_backward(int max_order, double x, const CylinderPair& base, std::span<double> j)
{
    const int m = std::max(max_order, 1);
    int start = m + static_cast<int>(std::sqrt(160.0 * std::max<double>(m, x))) + 20;
    start += start % 2;
    std::vector<double> v(static_cast<std::size_t>(start) + 2, 0.0);
    v[start] = 1e-30;
    for (int n = start; n >= 1; --n) {
        v[n - 1] = (2.0 * n / x) * v[n] - v[n + 1];
        if (std::abs(v[n - 1]) > kRescaleAbove) {
            for (int i = n - 1; i <= start; ++i) {
                v[i] /= kRescaleAbove;
            }
        }
    }
    const double scale = std::abs(base.j0) >= std::abs(base.j1) ? base.j0 / v[0] : base.j1 / v[1];
    for (int n = 0; n <= max_order; ++n) {
        j[n] = v[n] * scale;
    }
    j[0] = base.j0;
    if (max_order >= 1) {
        j[1] = base.j1;
    }
}

} // namespace

CylinderPair bessel_jy01(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_jy01: argument must be positive, got " + std::to_string(x));
    }
    if (x <= kSeriesLimit) {
        return ascending_series(x);
    }
    if (x < kAsymptoticLimit) {
        return miller_neumann(x);
    }
    return asymptotic(x);
}

void bessel_jy_sequence(int max_order, double x, std::span<double> j, std::span<double> y)
{
    require_order(max_order, "bessel_jy_sequence");
    if (j.size() < static_cast<std::size_t>(max_order) + 1
        || (!y.empty() && y.size() < static_cast<std::size_t>(max_order) + 1)) {
        throw std::invalid_argument("bessel_jy_sequence: output span too small");
    }
    if (x < 0.0 || std::isnan(x)) {
        throw std::domain_error("bessel_jy_sequence: negative argument " + std::to_string(x));
    }
    if (x == 0.0) {
        if (!y.empty()) {
            throw std::domain_error("bessel_jy_sequence: Y is singular at x = 0");
        }
        for (int n = 0; n <= max_order; ++n) {
            j[n] = (n == 0) ? 1.0 : 0.0;
        }
        return;
    }

    const CylinderPair base = bessel_jy01(x);

    if (max_order <= static_cast<int>(x)) {
        j[0] = base.j0;
        if (max_order >= 1) {
            j[1] = base.j1;
        }
        for (int n = 1; n < max_order; ++n) {
            j[n + 1] = (2.0 * n / x) * j[n] - j[n - 1];
        }
    } else {
        j_backward(max_order, x, base, j);
    }

    if (!y.empty()) {
        y[0] = base.y0;
        if (max_order >= 1) {
            y[1] = base.y1;
        }
        for (int n = 1; n < max_order; ++n) {
            y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
        }
    }
}

double bessel_j(int m, double x)
{
    require_order(m, "bessel_j");
    if (x < 0.0 || std::isnan(x)) {
        throw std::domain_error("bessel_j: negative argument " + std::to_string(x));
    }
    std::vector<double> j(static_cast<std::size_t>(m) + 1);
    bessel_jy_sequence(m, x, j, {});
    return j[m];
}

double bessel_y(int m, double x)
{
    require_order(m, "bessel_y");
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_y: argument must be positive, got " + std::to_string(x));
    }
    if (m <= 1) {
        const CylinderPair p = bessel_jy01(x);
        return m == 0 ? p.y0 : p.y1;
    }
    const CylinderPair p = bessel_jy01(x);
    double prev = p.y0, cur = p.y1;
    for (int n = 1; n < m; ++n) {
        const double next = (2.0 * n / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::complex<double> hankel1(int m, double x)
{
    require_order(m, "hankel1");
    if (!(x > 0.0)) {
        throw std::domain_error("hankel1: argument must be positive, got " + std::to_string(x));
    }
    return {bessel_j(m, x), bessel_y(m, x)};
}

double bessel_j_derivative(int m, double x)
{
    require_order(m, "bessel_j_derivative");
    if (m == 0) {
        return -bessel_j(1, x);
    }
    if (x == 0.0) {
        return m == 1 ? 0.5 : 0.0;
    }
    std::vector<double> j(static_cast<std::size_t>(m) + 1);
    bessel_jy_sequence(m, x, j, {});
    return j[m - 1] - (m / x) * j[m];
}

double bessel_y_derivative(int m, double x)
{
    require_order(m, "bessel_y_derivative");
    if (m == 0) {
        return -bessel_y(1, x);
    }
    return bessel_y(m - 1, x) - (m / x) * bessel_y(m, x);
}

std::complex<double> hankel1_derivative(int m, double x)
{
    require_order(m, "hankel1_derivative");
    if (m == 0) {
        return -hankel1(1, x);
    }
    return hankel1(m - 1, x) - (m / x) * hankel1(m, x);
}

HankelSequence hankel1_sequence(int max_order, double x)
{
    require_order(max_order, "hankel1_sequence");
    if (!(x > 0.0)) {
        throw std::domain_error("hankel1_sequence: argument must be positive, got " + std::to_string(x));
    }
    const std::size_t n = static_cast<std::size_t>(max_order) + 2;
    std::vector<double> j(n), y(n);
    bessel_jy_sequence(max_order + 1, x, j, y);
    HankelSequence out;
    out.h.resize(static_cast<std::size_t>(max_order) + 1);
    out.dh.resize(out.h.size());
    for (int m = 0; m <= max_order; ++m) {
        out.h[m] = {j[m], y[m]};
    }
    // H_m' = (m/x) H_m - H_{m+1}
    for (int m = 0; m <= max_order; ++m) {
        const std::complex<double> next{j[m + 1], y[m + 1]};
        out.dh[m] = (m / x) * out.h[m] - next;
    }
    return out;
}

BesselSequence bessel_j_sequence(int max_order, double x)
{
    require_order(max_order, "bessel_j_sequence");
    const std::size_t n = static_cast<std::size_t>(max_order) + 2;
    std::vector<double> j(n);
    bessel_jy_sequence(max_order + 1, x, j, {});
    BesselSequence out;
    out.j.assign(j.begin(), j.begin() + max_order + 1);
    out.dj.resize(out.j.size());
    for (int m = 0; m <= max_order; ++m) {
        out.dj[m] = (x == 0.0) ? (m == 1 ? 0.5 : 0.0) : (m / x) * j[m] - j[m + 1];
    }
    return out;
}

} // namespace emrtm
