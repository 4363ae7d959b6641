#include "conewave/radiation.hpp"

#include "conewave/errors.hpp"
#include "conewave/io.hpp"
#include "conewave/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace conewave::radiation {

namespace {

// Polynomial extrapolation in x = 1/r to x = 0 (Neville), order capped at 3:
// only the last (order+1) nodes participate.
struct Extrapolated {
    double value = 0.0;
    double error_est = 0.0;
    bool monotone = true;
};

Extrapolated richardson(const std::vector<double>& r_list, const std::vector<double>& raw)
{
    const std::size_t order = std::min<std::size_t>(r_list.size() - 1, 3);
    const std::size_t m = order + 1;
    const std::size_t off = r_list.size() - m;

    std::vector<double> x(m), t(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = 1.0 / r_list[off + i];
        t[i] = raw[off + i];
    }
    double scale = 0.0;
    for (double v : t) scale = std::max(scale, std::abs(v));
    const double noise = 1e-7 * scale + 1e-12;

    Extrapolated out;
    double prev_diff = HUGE_VAL;
    double prev_level = t[m - 1];
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t i = 0; i + level < m; ++i)
            t[i] = (x[i + level] * t[i] - x[i] * t[i + 1]) / (x[i + level] - x[i]);
        const double diff = std::abs(t[0] - prev_level);
        // a genuine divergent tail grows strongly; small wobble at the
        // evaluator's own precision is not evidence against convergence
        if (diff > 3.0 * prev_diff && diff > noise) out.monotone = false;
        prev_diff = diff;
        prev_level = t[0];
        out.error_est = diff;
    }
    out.value = t[0];
    return out;
}

template <typename EvalFn>
RadiationSamples extract_impl(int mode_j, double nu, int n,
                              const std::vector<double>& s_grid,
                              const std::vector<double>& r_list, EvalFn&& eval)
{
    if (r_list.size() < 3)
        throw DomainError("extract_radiation: need >= 3 radii for extrapolation");
    for (std::size_t i = 1; i < r_list.size(); ++i)
        if (!(r_list[i] > r_list[i - 1]))
            throw DomainError("extract_radiation: r_list must be increasing");

    RadiationSamples out;
    out.mode_j = mode_j;
    out.nu = nu;
    out.n = n;
    out.s_grid = s_grid;
    out.r_list = r_list;
    out.values.resize(s_grid.size());
    out.error_est.resize(s_grid.size());
    out.trusted.assign(s_grid.size(), true);
    out.raw.resize(s_grid.size());

    const double kappa = 0.5 * (n - 1);
    const double s_trust = r_list.front() / 5.0;

    parallel_for(s_grid.size(), [&](std::size_t i) {
        const double s = s_grid[i];
        std::vector<double> raw(r_list.size());
        for (std::size_t k = 0; k < r_list.size(); ++k)
            raw[k] = std::pow(r_list[k], kappa) * eval(s, k);
        const auto ext = richardson(r_list, raw);
        out.values[i] = ext.value;
        out.error_est[i] = ext.error_est;
        out.raw[i] = std::move(raw);
        if (!ext.monotone || s > s_trust) out.trusted[i] = false;
    });
    return out;
}

std::vector<std::size_t> window_indices(const RadiationSamples& R, const Window& window,
                                        bool require_trusted = true)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < R.s_grid.size(); ++i) {
        if (R.s_grid[i] < window.lo || R.s_grid[i] > window.hi) continue;
        if (require_trusted && !R.trusted[i]) continue;
        idx.push_back(i);
    }
    if (idx.size() < 4)
        throw DomainError("radiation window contains fewer than 4 trusted samples");
    return idx;
}

} // namespace

double RadiationSamples::r_min() const
{
    return r_list.empty() ? 0.0 : r_list.front();
}

RadiationSamples extract_radiation(const solver::HankelModeField& field,
                                   const std::vector<double>& s_grid,
                                   const std::vector<double>& r_list, int mode_j)
{
    // one retarded evaluator per radius, shared across all s
    std::vector<solver::HankelModeField::Retarded> evals;
    evals.reserve(r_list.size());
    for (double r : r_list) evals.push_back(field.retarded(r));
    return extract_impl(mode_j, field.nu(), field.n(), s_grid, r_list,
                        [&](double s, std::size_t k) { return evals[k](s); });
}

RadiationSamples extract_radiation(const solver::ModeSolution& sol,
                                   const std::vector<double>& s_grid,
                                   const std::vector<double>& r_list, int mode_j)
{
    auto interp = [&](double t, double r) {
        const auto& tg = sol.t_grid;
        const auto& rg = sol.r_grid;
        if (t < tg.front() || t > tg.back() || r < rg.front() || r > rg.back())
            throw DomainError("extract_radiation: (s + r, r) outside the stored grid");
        const std::size_t ti =
            std::min<std::size_t>(std::upper_bound(tg.begin(), tg.end(), t) - tg.begin(),
                                  tg.size() - 1) - 1;
        const std::size_t ri =
            std::min<std::size_t>(std::upper_bound(rg.begin(), rg.end(), r) - rg.begin(),
                                  rg.size() - 1) - 1;
        const double ft = (t - tg[ti]) / (tg[ti + 1] - tg[ti]);
        const double fr = (r - rg[ri]) / (rg[ri + 1] - rg[ri]);
        return (1 - ft) * (1 - fr) * sol.at(ti, ri) + ft * (1 - fr) * sol.at(ti + 1, ri) +
               (1 - ft) * fr * sol.at(ti, ri + 1) + ft * fr * sol.at(ti + 1, ri + 1);
    };
    return extract_impl(mode_j, sol.nu, sol.n, s_grid, r_list,
                        [&](double s, std::size_t k) { return interp(s + r_list[k], r_list[k]); });
}

ExpansionFit fit_expansion(const RadiationSamples& R, const std::vector<BasisTerm>& terms,
                           const Window& window)
{
    if (terms.empty())
        throw DomainError("fit_expansion: empty basis");
    if (window.lo < 1.0)
        throw DomainError("fit_expansion: window must satisfy s_min >= 1");
    const auto idx = window_indices(R, window);

    std::size_t cols = 0;
    for (const auto& t : terms) cols += t.include_log ? 2 : 1;

    Eigen::MatrixXd design(idx.size(), cols);
    Eigen::VectorXd rhs(idx.size());
    for (std::size_t row = 0; row < idx.size(); ++row) {
        const double s = R.s_grid[idx[row]];
        rhs(row) = R.values[idx[row]];
        std::size_t c = 0;
        for (const auto& t : terms) {
            const double base = std::pow(s, -t.lambda);
            design(row, c++) = base;
            if (t.include_log) design(row, c++) = base * std::log(s);
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    // the normal system's condition is the square of the design's
    if (smin <= 0.0 || (smax / smin) * (smax / smin) > 1e12)
        throw ConditioningError("fit_expansion: normal system condition exceeds 1e12; "
                                "use fewer terms or a wider window");
    Eigen::VectorXd a = svd.solve(rhs);

    ExpansionFit fit;
    fit.terms = terms;
    fit.window = window;
    fit.coefficients.assign(a.data(), a.data() + a.size());
    const double rnorm = rhs.norm();
    fit.residual = rnorm > 0.0 ? (design * a - rhs).norm() / rnorm : 0.0;
    return fit;
}

ExpansionFit fit_expansion(const RadiationSamples& R,
                           const std::vector<spectrum::ExponentEntry>& ladder,
                           std::size_t n_terms, const Window& window)
{
    if (n_terms == 0 || n_terms > ladder.size())
        throw DomainError("fit_expansion: n_terms must be in [1, ladder size]");
    std::vector<BasisTerm> terms;
    for (std::size_t i = 0; i < n_terms; ++i)
        terms.push_back({ladder[i].lambda, ladder[i].log_flag});
    return fit_expansion(R, terms, window);
}

RefinedExponent refine_leading_exponent(const RadiationSamples& R, double lambda0,
                                        std::size_t n_terms, const Window& window,
                                        double search_rel)
{
    auto residual_at = [&](double lam) {
        std::vector<BasisTerm> terms;
        for (std::size_t k = 0; k < n_terms; ++k)
            terms.push_back({lam + static_cast<double>(k), false});
        return fit_expansion(R, terms, window).residual;
    };

    double lo = lambda0 * (1.0 - search_rel);
    double hi = lambda0 * (1.0 + search_rel);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = residual_at(x1), f2 = residual_at(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-6 * lambda0; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = residual_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = residual_at(x2);
        }
    }
    RefinedExponent out;
    out.lambda = 0.5 * (lo + hi);
    std::vector<BasisTerm> terms;
    for (std::size_t k = 0; k < n_terms; ++k)
        terms.push_back({out.lambda + static_cast<double>(k), false});
    out.fit = fit_expansion(R, terms, window);
    return out;
}

std::vector<PeeledTerm> peel_exponents(const RadiationSamples& R, std::size_t max_terms,
                                       const Window& window)
{
    if (window.hi < 10.0 * window.lo)
        throw DomainError("peel_exponents: window must span at least one decade");
    const auto idx = window_indices(R, window);

    std::vector<double> s, val;
    for (std::size_t i : idx) {
        s.push_back(R.s_grid[i]);
        val.push_back(R.values[i]);
    }
    double base_norm = 0.0;
    for (double v : val) base_norm += v * v;
    base_norm = std::sqrt(base_norm);
    if (base_norm == 0.0) return {};

    auto slope_fit = [&](std::size_t lo, std::size_t hi) {
        // least-squares slope of log|val| vs log s over [lo, hi)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            if (val[i] == 0.0) continue;
            const double x = std::log(s[i]);
            const double y = std::log(std::abs(val[i]));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m < 3) throw DomainError("peel_exponents: too few usable samples in the top decade");
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };

    std::vector<PeeledTerm> out;
    double prev_residual = HUGE_VAL;
    for (std::size_t term = 0; term < max_terms; ++term) {
        // top decade of the window
        std::size_t lo = 0;
        while (lo < s.size() && s[lo] < window.hi / 10.0) ++lo;
        if (s.size() - lo < 4) break;

        PeeledTerm peel;
        const double slope_all = slope_fit(lo, s.size());
        // drift = local slope change between the two ends of the window
        const std::size_t endlen = std::max<std::size_t>(4, std::min<std::size_t>(6, s.size() / 3));
        const double drift =
            std::abs(slope_fit(0, endlen) - slope_fit(s.size() - endlen, s.size()));
        peel.lambda = -slope_all;
        peel.slope_drift = drift;
        peel.mixed = drift > 0.02;

        // amplitude on the top decade
        double num = 0.0, den = 0.0;
        for (std::size_t i = lo; i < s.size(); ++i) {
            const double phi = std::pow(s[i], -peel.lambda);
            num += val[i] * phi;
            den += phi * phi;
        }
        peel.amplitude = num / den;

        double res = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double rem = val[i] - peel.amplitude * std::pow(s[i], -peel.lambda);
            res += rem * rem;
        }
        res = std::sqrt(res) / base_norm;
        if (res >= prev_residual) break; // peel no longer improves
        out.push_back(peel);
        for (std::size_t i = 0; i < s.size(); ++i)
            val[i] -= peel.amplitude * std::pow(s[i], -peel.lambda);
        prev_residual = res;
        if (res < 1e-3) break;
    }
    return out;
}

void write_radiation_csv(const RadiationSamples& R, const std::filesystem::path& path)
{
    CsvWriter csv(path, {"s", "value", "error_est", "trusted"});
    for (std::size_t i = 0; i < R.s_grid.size(); ++i)
        csv.row({fmt_double(R.s_grid[i]), fmt_double(R.values[i]),
                 fmt_double(R.error_est[i]), R.trusted[i] ? "1" : "0"});
}

void write_fit_csv(const ExpansionFit& fit, const std::filesystem::path& path)
{
    CsvWriter csv(path, {"lambda", "log_basis", "coefficient"});
    std::size_t c = 0;
    for (const auto& t : fit.terms) {
        csv.row({fmt_double(t.lambda), "0", fmt_double(fit.coefficients[c++])});
        if (t.include_log)
            csv.row({fmt_double(t.lambda), "1", fmt_double(fit.coefficients[c++])});
    }
}

} // namespace conewave::radiation
