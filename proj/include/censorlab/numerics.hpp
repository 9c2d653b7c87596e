#pragma once

namespace censorlab {

// upper regularized incomplete gamma Q(a, x)
double gamma_q(double a, double x);

// P(chi2_dof >= stat)
double chi_square_pvalue(double stat, int dof);

// P(Bin(n, p) < k), exact sum in log space
double binomial_cdf_below(int k, int n, double p);

}  // namespace censorlab
