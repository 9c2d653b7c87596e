#include "censorlab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace censorlab {

namespace {

// regularized lower incomplete gamma by series (x < a+1)
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma by continued fraction (x >= a+1)
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi-square needs dof > 0");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

double binomial_cdf_below(int k, int n, double p) {
  if (k <= 0) return 0.0;
  if (k > n) return 1.0;
  double lp = std::log(p), lq = std::log1p(-p);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double lt = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq;
    total += std::exp(lt);
  }
  return total > 1.0 ? 1.0 : total;
}

}  // namespace censorlab
