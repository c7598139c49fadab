#pragma once

#include <complex>
#include <span>
#include <vector>

namespace emrtm {

/// Cylinder functions of non-negative integer order and real argument.
///
/// Orders are plain `int`s; negative orders are rejected. Callers that need
/// them use J_{-m} = (-1)^m J_m and the same reflection for Y and H.
/// All routines throw std::domain_error outside their stated domain.

double bessel_j(int m, double x);
double bessel_y(int m, double x);
std::complex<double> hankel1(int m, double x);

double bessel_j_derivative(int m, double x);
double bessel_y_derivative(int m, double x);
std::complex<double> hankel1_derivative(int m, double x);

/// J_0, J_1, Y_0, Y_1 in one evaluation; the hot path for Green functions.
struct CylinderPair {
    double j0, j1, y0, y1;
    std::complex<double> h0() const { return {j0, y0}; }
    std::complex<double> h1() const { return {j1, y1}; }
};
CylinderPair bessel_jy01(double x);

/// Fills j[m] = J_m(x) and y[m] = Y_m(x) for m = 0..max_order.
/// `y` may be empty when only J is wanted (x = 0 is then allowed).
void bessel_jy_sequence(int max_order, double x, std::span<double> j, std::span<double> y);

/// Orders 0..max_order of H^{(1)} together with their derivatives.
struct HankelSequence {
    std::vector<std::complex<double>> h;
    std::vector<std::complex<double>> dh;
};
HankelSequence hankel1_sequence(int max_order, double x);

/// Orders 0..max_order of J together with their derivatives.
struct BesselSequence {
    std::vector<double> j;
    std::vector<double> dj;
};
BesselSequence bessel_j_sequence(int max_order, double x);

inline double reflect_sign(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

} // namespace emrtm
