#pragma once

namespace srcalloc {

// Regularized incomplete beta I_x(a, b), continued fraction evaluated with
// the modified Lentz method.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

// Inverse CDF for p in (0, 1), solved by bisection on the CDF.
double student_t_quantile(double p, double df);

}  // namespace srcalloc
