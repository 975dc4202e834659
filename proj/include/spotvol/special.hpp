#pragma once

namespace spotvol {

/// C(beta) = integral over (0,inf) of sin(x)/x^beta dx, beta in (0,2).
/// Composite quadrature to 200*pi plus an asymptotic tail; absolute error
/// below 1e-8.  C(1) is the Dirichlet integral pi/2.
double special_c(double beta);

/// D(beta) = integral over (0,inf) of (1-cos(x))/x^beta dx, beta in (1,2).
double special_d(double beta);

}  // namespace spotvol
