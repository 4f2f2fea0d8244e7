#include "greedy_colloc/bessel.hpp"

#include "greedy_colloc/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gcol {
namespace {

constexpr double kSeriesLimit = 2.0;
constexpr int kMaxIterations = 10000;

// Returns 2*alpha as an integer, or throws for orders that are not multiples of 1/2.
int twice_order(double alpha) {
    const double twice = 2.0 * alpha;
    const double rounded = std::round(twice);
    if (!std::isfinite(alpha) || std::abs(twice - rounded) > 1e-12 || std::abs(rounded) > 200.0) {
        throw UnsupportedOrderError("Bessel K order " + std::to_string(alpha) +
                                    " is not an integer or half-integer");
    }
    return static_cast<int>(rounded);
}

// s^(n+1/2) K_(n+1/2)(s) = sqrt(pi/2) e^-s sum_k (n+k)!/(k!(n-k)!) 2^-k s^(n-k)
double scaled_half_integer(int n, double s) {
    double coeff = 1.0;  // (n+k)!/(k!(n-k)!) 2^-k at k = 0
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        sum += coeff * std::pow(s, n - k);
        coeff *= static_cast<double>((n + k + 1) * (n - k)) / (2.0 * (k + 1));
    }
    return std::sqrt(std::numbers::pi / 2.0) * std::exp(-s) * sum;
}

// s^n K_n(s) from the ascending series; accurate for 0 < s <= 2.
double scaled_integer_series(int n, double s) {
    const double t = 0.25 * s * s;
    double head = 0.0;
    if (n > 0) {
        // 2^(n-1) sum_{k<n} (n-k-1)!/k! (-t)^k
        double term = std::tgamma(static_cast<double>(n));
        for (int k = 0; k < n; ++k) {
            head += term;
            if (k + 1 < n) {
                term *= -t / (static_cast<double>(k + 1) * static_cast<double>(n - k - 1));
            }
        }
        head *= std::ldexp(1.0, n - 1);
    }

    // (-1)^n s^n (s/2)^n sum_k t^k/(k!(n+k)!) [ -ln(s/2) + (psi(k+1) + psi(n+k+1))/2 ]
    const double log_half = std::log(0.5 * s);
    double psi_k = -std::numbers::egamma;  // psi(k+1)
    double psi_nk = -std::numbers::egamma;  // psi(n+k+1)
    for (int j = 1; j <= n; ++j) psi_nk += 1.0 / j;
    double weight = 1.0 / std::tgamma(static_cast<double>(n + 1));  // t^k/(k!(n+k)!)
    double tail = 0.0;
    for (int k = 0; k < kMaxIterations; ++k) {
        const double term = weight * (-log_half + 0.5 * (psi_k + psi_nk));
        tail += term;
        if (std::abs(term) <= 1e-17 * std::abs(tail) && k > 2) break;
        weight *= t / (static_cast<double>(k + 1) * static_cast<double>(n + k + 1));
        psi_k += 1.0 / (k + 1);
        psi_nk += 1.0 / (n + k + 1);
    }
    const double prefactor = std::pow(s, n) * std::pow(0.5 * s, n) * ((n % 2 == 0) ? 1.0 : -1.0);
    return head + prefactor * tail;
}

// K_0(x), K_1(x) for x > 2 via Steed's continued fraction (Temme's CF2 with mu = 0).
void k0_k1_continued_fraction(double x, double& k0, double& k1) {
    constexpr double eps = 1e-17;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIterations; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h *= a1;
    k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

void k0_k1(double x, double& k0, double& k1) {
    if (x <= kSeriesLimit) {
        k0 = scaled_integer_series(0, x);
        k1 = scaled_integer_series(1, x) / x;
    } else {
        k0_k1_continued_fraction(x, k0, k1);
    }
}

double integer_order_recurrence(int n, double r) {
    double k_prev = 0.0;
    double k_curr = 0.0;
    k0_k1(r, k_prev, k_curr);
    if (n == 0) return k_prev;
    for (int k = 1; k < n; ++k) {
        const double k_next = k_prev + (2.0 * k / r) * k_curr;
        k_prev = k_curr;
        k_curr = k_next;
    }
    return k_curr;
}

}  // namespace

double bessel_k(double nu, double r) {
    if (!(r > 0.0)) throw DomainError("bessel_k requires r > 0");
    const int twice = twice_order(nu);
    if (twice < 0) throw UnsupportedOrderError("bessel_k requires nu >= 0");
    if (twice % 2 != 0) {
        const int n = (twice - 1) / 2;
        return scaled_half_integer(n, r) / std::pow(r, nu);
    }
    return integer_order_recurrence(twice / 2, r);
}

double scaled_bessel_k(double alpha, double s) {
    const int twice = twice_order(alpha);
    if (s < 0.0 || std::isnan(s)) throw DomainError("scaled_bessel_k requires s >= 0");
    if (s == 0.0) {
        if (twice <= 0) return std::numeric_limits<double>::infinity();
        return std::tgamma(alpha) * std::pow(2.0, alpha - 1.0);
    }
    if (twice < 0) {
        // s^alpha K_|alpha| = s^(2 alpha) * s^|alpha| K_|alpha|
        return std::pow(s, 2.0 * alpha) * scaled_bessel_k(-alpha, s);
    }
    if (twice % 2 != 0) return scaled_half_integer((twice - 1) / 2, s);
    const int n = twice / 2;
    if (s <= kSeriesLimit) return scaled_integer_series(n, s);
    return std::pow(s, n) * integer_order_recurrence(n, s);
}

}  // namespace gcol
