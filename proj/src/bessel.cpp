#include "conewave/bessel.hpp"

#include "conewave/errors.hpp"

#include <cmath>
#include <vector>

namespace conewave {

namespace {

// J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_k (-x^2/4)^k / (k! (nu+1)_k).
// Cancellation in the alternating sum limits this branch to x <~ 12.
double series_j(double nu, double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    return lead * sum;
}

// Hankel's expansion sums; terms are added down to their minimum.
BesselPQ pq_sums(double nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = HUGE_VAL;
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * x * k);
        if (std::abs(term) >= prev) break; // divergent tail reached
        prev = std::abs(term);
        const int phase = (k / 2) % 2; // + + - - + + ...
        const double signed_term = phase ? -term : term;
        if (k % 2)
            q += signed_term;
        else
            p += signed_term;
        if (std::abs(term) < 1e-18) break;
    }
    return {p, q};
}

double asymptotic_j(double nu, double x)
{
    const auto [p, q] = pq_sums(nu, x);
    const double w = x - (0.5 * nu + 0.25) * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(w) - q * std::sin(w));
}

// Backward recurrence from a high order, normalized with
// sum_k c_k J_{nu+2k}(x) = (x/2)^nu, c_k = (nu+2k) Gamma(nu+k) / k!.
double miller_j(double nu, double x)
{
    const int top = static_cast<int>(x + 14.0 * std::cbrt(x) + 28.0 + nu);
    const int m = top + (top % 2); // even so the normalization sum ends cleanly

    double fp = 0.0;     // surrogate J_{nu+k+2}
    double fc = 1e-155;  // surrogate J_{nu+k+1}
    double j_target = 0.0;
    double norm = 0.0;

    // c_k / c_0 for the even-order normalization sum; the k = 0 ratio is 1
    // and the recursion through it is indeterminate at nu = 0, so use the
    // closed form (nu+2k) Gamma(nu+k) / (k! Gamma(nu+1)) directly.
    std::vector<double> c(static_cast<std::size_t>(m / 2) + 1);
    c[0] = 1.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        const double kk = static_cast<double>(k);
        c[k] = (nu + 2.0 * kk) *
               std::exp(std::lgamma(nu + kk) - std::lgamma(kk + 1.0) - std::lgamma(nu + 1.0));
    }

    for (int k = m; k >= 0; --k) {
        const double fm = 2.0 * (nu + k + 1.0) / x * fc - fp;
        fp = fc;
        fc = fm;
        // fc now surrogates J_{nu+k}
        if (k % 2 == 0) norm += c[static_cast<std::size_t>(k / 2)] * fc;
        if (k == 0) j_target = fc;
        if (std::abs(fc) > 1e250) { // rescale to avoid overflow
            fc *= 1e-250;
            fp *= 1e-250;
            norm *= 1e-250;
            if (k == 0) j_target *= 1e-250;
        }
    }
    // sum c_k J = (x/2)^nu  =>  J_nu = f_0 * (x/2)^nu / (Gamma(nu+1) * norm~)
    return j_target * std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0)) / norm;
}

double asym_threshold(double nu)
{
    return std::max(18.0, 2.2 * nu * nu + 6.0);
}

} // namespace

BesselPQ bessel_pq(double nu, double x)
{
    if (nu < 0.0) throw DomainError("bessel_pq: order must be >= 0");
    if (x < asym_threshold(nu))
        throw DomainError("bessel_pq: argument below the asymptotic threshold");
    return pq_sums(nu, x);
}

double bessel_asymptotic_threshold(double nu)
{
    return asym_threshold(nu);
}

double bessel_j(double nu, double x)
{
    if (nu < 0.0) throw DomainError("bessel_j: order must be >= 0");
    if (x < 0.0) throw DomainError("bessel_j: argument must be >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x <= 12.0) return series_j(nu, x);
    if (x >= asym_threshold(nu)) return asymptotic_j(nu, x);
    return miller_j(nu, x);
}

double bessel_j_prime(double nu, double x)
{
    if (x == 0.0) return nu == 1.0 ? 0.5 : 0.0;
    // J'_nu = (nu/x) J_nu - J_{nu+1}; stays inside nu >= 0.
    return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

} // namespace conewave
