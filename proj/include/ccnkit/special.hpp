#pragma once

namespace ccn {

double normal_cdf(double x);
/// P(Z > x) for standard normal Z, accurate in the far tail.
double normal_sf(double x);

/// Survival function of chi-square with one degree of freedom, erfc(sqrt(x/2)).
/// Throws ValidationError for negative x.
double chi2_sf_1dof(double x);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

}  // namespace ccn
