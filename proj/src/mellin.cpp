#include "conewave/mellin.hpp"

#include "conewave/errors.hpp"
#include "conewave/io.hpp"
#include "conewave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>

namespace conewave::mellin {

namespace {

double smoothstep01(double x)
{
    // C-infinity bridge: 0 at x <= 0, 1 at x >= 1
    auto psi = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
    const double a = psi(x);
    return a / (a + psi(1.0 - x));
}

} // namespace

double Cutoff::operator()(double rho) const
{
    if (rho <= 0.0) return kind == Kind::sharp ? 1.0 : 1.0;
    if (kind == Kind::sharp) return rho <= rho_c ? 1.0 : 0.0;
    if (rho <= 0.5 * rho_c) return 1.0;
    if (rho >= rho_c) return 0.0;
    return smoothstep01((rho_c - rho) / (0.5 * rho_c));
}

std::string Cutoff::name() const
{
    return (kind == Kind::sharp ? "sharp[0," : "smooth[0,") + fmt_double(rho_c) + "]";
}

namespace {

// Core transform; *truncated is set when the level cap was reached while the
// panel tail was still significant (sigma close to the convergence abscissa).
std::complex<double> mellin_core(const std::function<double(double)>& u,
                                 std::complex<double> sigma, const Cutoff& cutoff,
                                 bool* truncated)
{
    // Integrand chi(rho) u(rho) rho^{-i sigma - 1} on geometric panels
    // [rho_c 2^{-k-1}, rho_c 2^{-k}]; each panel is smooth and carries a
    // bounded log-phase increment, so a fixed Gauss rule per panel suffices.
    const std::complex<double> expo = std::complex<double>(-1.0, 0.0) -
                                      std::complex<double>(0.0, 1.0) * sigma;
    auto integrand = [&](double rho) -> std::complex<double> {
        return cutoff(rho) * u(rho) * std::pow(rho, expo);
    };

    const int panels_per_level = std::max(1, 1 + static_cast<int>(std::abs(sigma.real()) / 6.0));
    std::complex<double> acc = 0.0;
    double hi = cutoff.rho_c;
    int growing = 0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (int level = 0; level < 400; ++level) {
        const double lo = 0.5 * hi;
        std::complex<double> part = 0.0;
        const double h = (hi - lo) / panels_per_level;
        for (int p = 0; p < panels_per_level; ++p) {
            const double a = lo + p * h, b = a + h;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < 16; ++i)
                part += half * gl16_weights()[i] * integrand(mid + half * gl16_nodes()[i]);
        }
        acc += part;
        const double mag = std::abs(part);
        scale = std::max(scale, std::abs(acc));
        if (mag > prev_mag && mag > 1e-14 * scale) {
            if (++growing >= 6)
                throw ConvergenceError(
                    "mellin: partial integrals diverge toward the rho = 0 endpoint "
                    "(Im sigma at or below the decay order); |last panel| = " +
                    fmt_double(mag));
        } else {
            growing = 0;
        }
        prev_mag = mag;
        if (mag < 1e-16 * std::max(scale, 1e-300) && level > 8) {
            if (truncated) *truncated = false;
            return acc;
        }
        hi = lo;
    }
    if (truncated) *truncated = prev_mag > 1e-12 * std::max(scale, 1e-300);
    return acc;
}

} // namespace

std::complex<double> mellin(const std::function<double(double)>& u,
                            std::complex<double> sigma, const Cutoff& cutoff)
{
    return mellin_core(u, sigma, cutoff, nullptr);
}

MellinScan mellin_scan(const std::function<double(double)>& u, const Cutoff& cutoff,
                       double re_sigma, double im_lo, double im_hi, std::size_t count)
{
    MellinScan scan;
    scan.cutoff = cutoff;
    for (std::size_t i = 0; i < count; ++i) {
        const double im = im_lo + (im_hi - im_lo) * i / (count - 1);
        const std::complex<double> sigma(re_sigma, im);
        scan.sigma_samples.push_back(sigma);
        try {
            scan.values.push_back(mellin(u, sigma, cutoff));
        } catch (const ConvergenceError&) {
            scan.values.push_back({std::numeric_limits<double>::quiet_NaN(), 0.0});
        }
    }
    return scan;
}

void write_scan_csv(const MellinScan& scan, const std::filesystem::path& path)
{
    CsvWriter csv(path, {"re_sigma", "im_sigma", "re_M", "im_M"});
    for (std::size_t i = 0; i < scan.sigma_samples.size(); ++i)
        csv.row_doubles({scan.sigma_samples[i].real(), scan.sigma_samples[i].imag(),
                         scan.values[i].real(), scan.values[i].imag()});
}

namespace {

struct GCurve {
    std::vector<double> beta, g;
};

// Samples g(beta) = 1/|M(-i beta)| over [lo, hi] on the convergent side,
// stopping at divergence or once the geometric quadrature can no longer
// resolve the near-pole tail.
GCurve sample_g(const std::function<double(double)>& u, const Cutoff& cutoff,
                double lo, double hi, std::size_t grid)
{
    GCurve out;
    for (std::size_t i = 0; i < grid; ++i) {
        const double b = lo + (hi - lo) * i / (grid - 1);
        try {
            bool truncated = false;
            const auto m = mellin_core(u, std::complex<double>(0.0, -b), cutoff, &truncated);
            const double mag = std::abs(m);
            if (truncated || !(mag > 0.0) || !std::isfinite(mag)) break;
            out.beta.push_back(b);
            out.g.push_back(1.0 / mag);
        } catch (const ConvergenceError&) {
            break;
        }
    }
    return out;
}

double extrapolate_root(const GCurve& c)
{
    const std::size_t k = c.g.size();
    const double x1 = c.beta[k - 2], x2 = c.beta[k - 1];
    const double y1 = c.g[k - 2], y2 = c.g[k - 1];
    const double slope = (y2 - y1) / (x2 - x1);
    if (slope >= 0.0)
        throw ConvergenceError("locate_pole: 1/|M| not decreasing toward the strip edge");
    return x2 - y2 / slope;
}

} // namespace

PoleEstimate locate_pole(const std::function<double(double)>& u, const Cutoff& cutoff,
                         double beta_lo, double beta_hi, std::size_t grid)
{
    // g(beta) = 1/|M(-i beta)| vanishes linearly at the pole: a coarse pass
    // brackets it, a local pass just inside the convergent edge pins it down.
    GCurve coarse = sample_g(u, cutoff, beta_lo, beta_hi, grid);
    if (coarse.beta.size() < 4)
        throw ConvergenceError("locate_pole: no convergent strip inside the search range");

    std::size_t imin = 0;
    for (std::size_t i = 1; i < coarse.g.size(); ++i)
        if (coarse.g[i] < coarse.g[imin]) imin = i;

    PoleEstimate est;
    est.reciprocal_min = coarse.g[imin];
    if (imin + 1 < coarse.g.size()) {
        // interior minimum: parabola vertex of g^2 (|M| peaks inside the strip)
        const double x0 = coarse.beta[imin - 1], x1 = coarse.beta[imin],
                     x2 = coarse.beta[imin + 1];
        const double y0 = coarse.g[imin - 1] * coarse.g[imin - 1],
                     y1 = coarse.g[imin] * coarse.g[imin],
                     y2 = coarse.g[imin + 1] * coarse.g[imin + 1];
        const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
        const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
        const double b =
            (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
        est.sigma = std::complex<double>(0.0, -(a != 0.0 ? -b / (2.0 * a) : x1));
        return est;
    }

    // boundary minimum: refine with a fine local grid ending just inside the
    // convergent edge, then extrapolate the final linear stretch to zero
    double root = extrapolate_root(coarse);
    const double step = (beta_hi - beta_lo) / (grid - 1);
    for (int pass = 0; pass < 2; ++pass) {
        const double lo = std::max(beta_lo, root - 6.0 * step);
        const double hi = std::min(beta_hi, root - 0.002);
        if (hi <= lo) break;
        GCurve fine = sample_g(u, cutoff, lo, hi, 24);
        if (fine.beta.size() >= 3) {
            root = extrapolate_root(fine);
            est.reciprocal_min = fine.g.back();
        }
    }
    est.sigma = std::complex<double>(0.0, -root);
    return est;
}

namespace {

// R(s) samples recast as a function of rho = 1/s with a power-law tail fitted
// on the last trusted decade; the model extends the data below the sampled
// range, which is what carries the asymptotics into the Mellin strip.
struct RhoFunction {
    std::vector<double> log_rho; // ascending
    std::vector<double> value;
    double rho_min = 0.0;
    double tail_amp = 0.0;
    double tail_power = 0.0; // R ~ amp * rho^power as rho -> 0

    double operator()(double rho) const
    {
        if (rho <= rho_min) return tail_amp * std::pow(rho, tail_power);
        const double lr = std::log(rho);
        auto it = std::lower_bound(log_rho.begin(), log_rho.end(), lr);
        if (it == log_rho.begin()) return value.front();
        if (it == log_rho.end()) return value.back();
        const std::size_t h = it - log_rho.begin();
        const double f = (lr - log_rho[h - 1]) / (log_rho[h] - log_rho[h - 1]);
        return (1.0 - f) * value[h - 1] + f * value[h];
    }

    // Mellin transform of the samples plus the closed-form integral of the
    // power-law tail; the tail term carries the meromorphic structure, so
    // the value is defined in the whole strip (simple pole at -i tail_power).
    std::complex<double> transform(std::complex<double> sigma, const Cutoff& cutoff) const
    {
        if (rho_min > 0.45 * cutoff.rho_c)
            throw DomainError("mellin_pole_scan: samples must reach well below the cutoff");
        const std::complex<double> expo = std::complex<double>(-1.0, 0.0) -
                                          std::complex<double>(0.0, 1.0) * sigma;
        std::complex<double> acc = 0.0;
        double hi = cutoff.rho_c;
        while (hi > rho_min) {
            const double lo = std::max(0.5 * hi, rho_min);
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int i = 0; i < 16; ++i) {
                const double rho = mid + half * gl16_nodes()[i];
                acc += half * gl16_weights()[i] * cutoff(rho) * (*this)(rho) *
                       std::pow(rho, expo);
            }
            hi = lo;
        }
        const std::complex<double> p(tail_power, 0.0);
        const std::complex<double> denom = p - std::complex<double>(0.0, 1.0) * sigma;
        acc += tail_amp * std::pow(rho_min, denom) / denom;
        return acc;
    }
};

// Leading power-law of the tail: a rough log-log slope on the last
// half-decade, then a golden-section refinement of the exponent with the
// two-term basis {s^-p, s^-(p+1)} absorbing the first correction.
struct TailModel {
    double power = 0.0;
    double amp = 0.0;
};

TailModel fit_tail(const std::vector<double>& s, const std::vector<double>& val)
{
    std::vector<double> ts, tv;
    const double lo_rough = s.back() / std::sqrt(10.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] >= lo_rough && val[i] != 0.0) {
            ts.push_back(s[i]);
            tv.push_back(val[i]);
        }
    if (ts.size() < 6)
        throw DomainError("mellin_pole_scan: too few samples in the last half-decade "
                          "for the tail model");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double x = std::log(ts[i]);
        const double y = std::log(std::abs(tv[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(ts.size());
    const double p_rough = -(m * sxy - sx * sy) / (m * sxx - sx * sx);

    // refinement window: last 1.5 decades
    ts.clear();
    tv.clear();
    const double lo_fit = s.back() / std::pow(10.0, 1.5);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] >= lo_fit) {
            ts.push_back(s[i]);
            tv.push_back(val[i]);
        }

    auto two_term = [&](double p) {
        // least squares on {s^-p, s^-(p+1)}; returns (residual, leading amp)
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double f1 = std::pow(ts[i], -p);
            const double f2 = f1 / ts[i];
            a11 += f1 * f1;
            a12 += f1 * f2;
            a22 += f2 * f2;
            b1 += tv[i] * f1;
            b2 += tv[i] * f2;
        }
        const double det = a11 * a22 - a12 * a12;
        const double c1 = (a22 * b1 - a12 * b2) / det;
        const double c2 = (a11 * b2 - a12 * b1) / det;
        double res = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double f1 = std::pow(ts[i], -p);
            const double d = tv[i] - c1 * f1 - c2 * f1 / ts[i];
            res += d * d;
        }
        return std::pair<double, double>(res, c1);
    };

    double lo = 0.75 * p_rough, hi = 1.25 * p_rough;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = two_term(x1).first, f2 = two_term(x2).first;
    for (int it = 0; it < 70 && hi - lo > 1e-7; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = two_term(x1).first;
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = two_term(x2).first;
        }
    }
    TailModel model;
    model.power = 0.5 * (lo + hi);
    model.amp = two_term(model.power).second;
    return model;
}

RhoFunction make_rho_function(const std::vector<double>& s, const std::vector<double>& val)
{
    RhoFunction fn;
    // rho ascending means s descending
    for (std::size_t i = s.size(); i-- > 0;) {
        fn.log_rho.push_back(std::log(1.0 / s[i]));
        fn.value.push_back(val[i]);
    }
    fn.rho_min = 1.0 / s.back();
    const TailModel tail = fit_tail(s, val);
    fn.tail_power = tail.power;
    fn.tail_amp = tail.amp;
    return fn;
}

} // namespace

PoleScanResult mellin_pole_scan(const radiation::RadiationSamples& R,
                                double im_min, double im_max, double re_window,
                                const Cutoff& cutoff, std::size_t max_poles)
{
    if (!(im_min < im_max && im_max <= 0.0))
        throw DomainError("mellin_pole_scan: strip must satisfy im_min < im_max <= 0");

    std::vector<double> s, val;
    for (std::size_t i = 0; i < R.s_grid.size(); ++i) {
        if (!R.trusted[i]) continue;
        if (1.0 / R.s_grid[i] > cutoff.rho_c) continue; // outside the cutoff anyway
        s.push_back(R.s_grid[i]);
        val.push_back(R.values[i]);
    }
    if (s.size() < 8)
        throw DomainError("mellin_pole_scan: too few trusted samples under the cutoff");

    PoleScanResult result;
    for (std::size_t pole = 0; pole < max_poles; ++pole) {
        RhoFunction fn = make_rho_function(s, val);
        const double beta_lo = std::max(0.05, -im_max);
        const double beta_hi = -im_min;
        if (std::getenv("CONEWAVE_DEBUG"))
            std::cerr << "pole-scan iter " << pole << ": tail_power=" << fn.tail_power
                      << " tail_amp=" << fn.tail_amp << "\n";
        if (fn.tail_power <= beta_lo || fn.tail_power > beta_hi + 0.5) break;

        // h(beta) = 1/M(-i beta) passes through zero at the pole (M is real
        // on the axis for real data); bracket the first small-|h| sign change
        // and bisect it
        const std::size_t grid = 240;
        std::vector<double> bs(grid), h(grid);
        for (std::size_t i = 0; i < grid; ++i) {
            bs[i] = beta_lo + (beta_hi - beta_lo) * i / (grid - 1);
            const auto m = fn.transform({0.0, -bs[i]}, cutoff);
            h[i] = 1.0 / m.real();
        }
        std::vector<double> mags;
        for (double v : h) mags.push_back(std::abs(v));
        std::nth_element(mags.begin(), mags.begin() + grid / 2, mags.end());
        const double med = mags[grid / 2];

        double beta = -1.0;
        for (std::size_t i = 0; i + 1 < grid; ++i) {
            if (h[i] * h[i + 1] >= 0.0) continue;
            if (std::getenv("CONEWAVE_DEBUG"))
                std::cerr << "  crossing at beta~" << bs[i] << " |h|=(" << std::abs(h[i])
                          << "," << std::abs(h[i + 1]) << ") med=" << med << "\n";
            if (std::min(std::abs(h[i]), std::abs(h[i + 1])) > 0.5 * med)
                continue; // a zero of M, not a pole
            double a = bs[i], b = bs[i + 1];
            double ha = h[i];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                const double hm = 1.0 / fn.transform({0.0, -mid}, cutoff).real();
                if (ha * hm <= 0.0)
                    b = mid;
                else {
                    a = mid;
                    ha = hm;
                }
            }
            beta = 0.5 * (a + b);
            break;
        }
        if (beta < beta_lo || beta > beta_hi) break;
        PoleEstimate est;
        est.sigma = std::complex<double>(0.0, -beta);
        est.reciprocal_min = std::abs(1.0 / fn.transform({0.0, -(beta - 1e-4)}, cutoff).real());

        if (re_window > 0.0) {
            // scan Re sigma just inside the convergent side of the pole
            const double b_safe = std::max(beta_lo, beta - 0.05);
            double best_re = 0.0, best_mag = 0.0;
            for (int k = -8; k <= 8; ++k) {
                const double re = re_window * k / 8.0;
                const double mag = std::abs(fn.transform({re, -b_safe}, cutoff));
                if (mag > best_mag) {
                    best_mag = mag;
                    best_re = re;
                }
            }
            est.sigma = std::complex<double>(best_re, est.sigma.imag());
        }
        result.poles.push_back(est);

        // subtract the located term so the next pole's strip becomes
        // accessible; the amplitude comes from the same two-term tail fit
        const double amp = fn.tail_amp;
        result.subtracted_amplitudes.push_back(amp);
        for (std::size_t i = 0; i < s.size(); ++i) val[i] -= amp * std::pow(s[i], -beta);
    }
    return result;
}

} // namespace conewave::mellin
