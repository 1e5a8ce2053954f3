#pragma once

#include <span>

namespace spf {

/// Jacobi polynomials P_n^{(alpha,beta)} normalized to be orthonormal on
/// [-1,1] with weight (1-x)^alpha (1+x)^beta. Writes degrees 0..out.size()-1.
void jacobi_normalized(double alpha, double beta, double x, std::span<double> out);

/// Values and first derivatives of the normalized Jacobi polynomials.
void jacobi_normalized_with_derivative(double alpha, double beta, double x,
                                       std::span<double> values,
                                       std::span<double> derivatives);

/// Orthonormal Legendre polynomial sqrt((2n+1)/2) P_n(x).
double legendre_orthonormal(int n, double x);

}  // namespace spf
