#pragma once

namespace gcol {

/// Modified Bessel function of the second kind K_nu(r).
///
/// Only integer and half-integer orders are supported. Half-integer orders use the
/// terminating closed form; integer orders start from K_0 and K_1 (power series for
/// r <= 2, Steed's continued fraction beyond) and recur upward.
///
/// Throws DomainError for r <= 0 and UnsupportedOrderError when 2*nu is not an integer.
double bessel_k(double nu, double r);

/// Scaled form s^alpha K_|alpha|(s), which is the Matern profile for alpha > 0.
///
/// Well behaved as s -> 0: at s == 0 it returns the limit 2^(alpha-1) Gamma(alpha) for
/// alpha > 0 and +infinity otherwise. Negative half-integer or integer alpha are allowed
/// for s > 0 (K is even in its order).
double scaled_bessel_k(double alpha, double s);

}  // namespace gcol
