#include "spfilter/polynomials.hpp"

#include <cmath>
#include <vector>

namespace spf {

namespace {

// Recurrence coefficients of one (alpha, beta) family, grown on demand:
// a[n] P_n = (x - b[n]) P_{n-1} - a[n-1] P_{n-2}.
struct JacobiTable {
  double alpha = 0.0;
  double beta = 0.0;
  double p0 = 0.0;
  std::vector<double> a{0.0, 0.0};
  std::vector<double> b{0.0, 0.0};

  JacobiTable(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    const double ab = alpha + beta;
    const double gamma0 = std::pow(2.0, ab + 1.0) / (ab + 1.0) * std::tgamma(alpha + 1.0) *
                          std::tgamma(beta + 1.0) / std::tgamma(ab + 1.0);
    p0 = 1.0 / std::sqrt(gamma0);
    a[1] = 2.0 / (2.0 + ab) * std::sqrt((alpha + 1.0) * (beta + 1.0) / (ab + 3.0));
    b[1] = (beta - alpha) / (ab + 2.0);
  }

  void extend(std::size_t count) {
    const double ab = alpha + beta;
    for (std::size_t i = a.size() - 1; i + 1 < count; ++i) {
      const double n = static_cast<double>(i);
      const double h1 = 2.0 * n + ab;
      a.push_back(2.0 / (h1 + 2.0) *
                  std::sqrt((n + 1.0) * (n + 1.0 + ab) * (n + 1.0 + alpha) * (n + 1.0 + beta) /
                            (h1 + 1.0) / (h1 + 3.0)));
      b.push_back(-(alpha * alpha - beta * beta) / h1 / (h1 + 2.0));
    }
  }
};

JacobiTable& jacobi_table(double alpha, double beta, std::size_t count) {
  thread_local std::vector<JacobiTable> tables;
  JacobiTable* table = nullptr;
  for (auto& t : tables) {
    if (t.alpha == alpha && t.beta == beta) table = &t;
  }
  if (table == nullptr) table = &tables.emplace_back(alpha, beta);
  if (table->a.size() < count) table->extend(count);
  return *table;
}

}  // namespace

void jacobi_normalized(double alpha, double beta, double x, std::span<double> out) {
  const std::size_t count = out.size();
  if (count == 0) return;
  const JacobiTable& t = jacobi_table(alpha, beta, count);
  out[0] = t.p0;
  if (count == 1) return;
  out[1] = (x - t.b[1]) * out[0] / t.a[1];
  for (std::size_t n = 2; n < count; ++n)
    out[n] = ((x - t.b[n]) * out[n - 1] - t.a[n - 1] * out[n - 2]) / t.a[n];
}

void jacobi_normalized_with_derivative(double alpha, double beta, double x,
                                       std::span<double> values,
                                       std::span<double> derivatives) {
  jacobi_normalized(alpha, beta, x, values);
  const std::size_t count = values.size();
  if (count == 0) return;
  derivatives[0] = 0.0;
  if (count == 1) return;

  // d/dx P_n^{(a,b)} = sqrt(n (n+a+b+1)) P_{n-1}^{(a+1,b+1)} in the normalized family.
  thread_local std::vector<double> shifted;
  shifted.resize(count - 1);
  jacobi_normalized(alpha + 1.0, beta + 1.0, x, shifted);
  for (std::size_t n = 1; n < count; ++n) {
    const double dn = static_cast<double>(n);
    derivatives[n] = std::sqrt(dn * (dn + alpha + beta + 1.0)) * shifted[n - 1];
  }
}

double legendre_orthonormal(int n, double x) {
  if (n < 0) return 0.0;
  double p_prev = 1.0;
  double p = x;
  if (n == 0) return std::sqrt(0.5);
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return std::sqrt((2.0 * n + 1.0) / 2.0) * p;
}

}  // namespace spf
