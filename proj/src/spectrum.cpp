#include "conewave/spectrum.hpp"

#include "conewave/errors.hpp"
#include "conewave/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace conewave::spectrum {

LinkSpectrum::LinkSpectrum(std::vector<Entry> entries, Source source, double alpha)
    : entries_(std::move(entries)), source_(source), alpha_(alpha)
{
    if (entries_.empty())
        throw DomainError("LinkSpectrum: empty spectrum");
    if (entries_.front().mu_sq != 0.0 || entries_.front().multiplicity != 1)
        throw DomainError("LinkSpectrum: first entry must be mu^2 = 0 with multiplicity 1");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].mu_sq < 0.0)
            throw DomainError("LinkSpectrum: negative eigenvalue");
        if (entries_[i].multiplicity <= 0)
            throw DomainError("LinkSpectrum: nonpositive multiplicity");
        if (i > 0 && !(entries_[i - 1].mu_sq < entries_[i].mu_sq))
            throw DomainError("LinkSpectrum: entries must be strictly ascending");
    }
}

LinkSpectrum LinkSpectrum::circle(double alpha, int j_max)
{
    if (!(alpha > 0.0))
        throw DomainError("circle spectrum: alpha must be positive");
    if (j_max < 0)
        throw DomainError("circle spectrum: j_max must be >= 0");
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(j_max) + 1);
    for (int j = 0; j <= j_max; ++j) {
        const double jj = static_cast<double>(j);
        entries.push_back({jj * jj / (alpha * alpha), j == 0 ? 1 : 2});
    }
    return LinkSpectrum(std::move(entries), Source::circle, alpha);
}

LinkSpectrum LinkSpectrum::explicit_list(std::vector<Entry> raw)
{
    std::sort(raw.begin(), raw.end(),
              [](const Entry& a, const Entry& b) { return a.mu_sq < b.mu_sq; });
    std::vector<Entry> merged;
    for (const Entry& e : raw) {
        if (!merged.empty() && merged.back().mu_sq == e.mu_sq)
            merged.back().multiplicity += e.multiplicity;
        else
            merged.push_back(e);
    }
    return LinkSpectrum(std::move(merged), Source::explicit_list, 0.0);
}

LinkSpectrum LinkSpectrum::from_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("spectrum file not found: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("spectrum file " + path.string() + ": " + e.what());
    }
    if (!j.is_array())
        throw ConfigError("spectrum file " + path.string() + ": expected a JSON array of [mu_sq, multiplicity] pairs");
    std::vector<Entry> entries;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2)
            throw ConfigError("spectrum file " + path.string() + ": each entry must be [mu_sq, multiplicity]");
        entries.push_back({item[0].get<double>(), item[1].get<int>()});
    }
    return explicit_list(std::move(entries));
}

double LinkSpectrum::circle_alpha() const
{
    if (source_ != Source::circle)
        throw DomainError("circle_alpha: spectrum is not a circle spectrum");
    return alpha_;
}

double nu_of(int n, double mu_sq)
{
    if (n < 2)
        throw DomainError("nu_of: cone dimension n must be >= 2");
    if (mu_sq < 0.0)
        throw DomainError("nu_of: mu^2 must be >= 0");
    const double half = 0.5 * (n - 2);
    return std::sqrt(half * half + mu_sq);
}

namespace {

bool is_half_integer(double nu)
{
    const double m = nu - 0.5;
    return m == std::round(m);
}

} // namespace

ResonanceLadder resonances(int n, const LinkSpectrum& spec, double strip_depth)
{
    if (n < 2)
        throw DomainError("resonances: cone dimension n must be >= 2");
    if (!(strip_depth > 0.0))
        throw DomainError("resonances: strip_depth must be positive");

    ResonanceLadder ladder;
    ladder.cone_dim = n;
    ladder.strip_depth = strip_depth;

    const auto& entries = spec.entries();
    for (std::size_t j = 0; j < entries.size(); ++j) {
        const double nu = nu_of(n, entries[j].mu_sq);
        if (!(0.5 + nu < strip_depth)) break; // entries ascend, so nu does too
        const bool excl = is_half_integer(nu);
        for (int k = 0;; ++k) {
            const double rate = 0.5 + k + nu;
            if (!(rate < strip_depth)) break;
            Resonance res;
            res.j = static_cast<int>(j);
            res.k = k;
            res.nu = nu;
            res.sigma = std::complex<double>(0.0, -rate);
            res.multiplicity = entries[j].multiplicity;
            res.excluded = excl;
            ladder.items.push_back(res);
        }
    }

    std::stable_sort(ladder.items.begin(), ladder.items.end(),
                     [](const Resonance& a, const Resonance& b) {
                         if (a.decay_rate() != b.decay_rate())
                             return a.decay_rate() < b.decay_rate();
                         if (a.j != b.j) return a.j < b.j;
                         return a.k < b.k;
                     });
    return ladder;
}

namespace {

std::vector<ExponentEntry> collapse_rates(const std::vector<Resonance>& items)
{
    // Exact comparison on lambda: collisions come from exact arithmetic
    // relations (e.g. integer nu), not from round-off coincidences.
    std::map<double, ExponentEntry> by_rate;
    for (const auto& r : items) {
        const double lam = r.decay_rate();
        auto it = by_rate.find(lam);
        if (it == by_rate.end()) {
            by_rate[lam] = {lam, r.multiplicity, r.excluded};
        } else {
            it->second.multiplicity += r.multiplicity;
            it->second.log_flag = true; // distinct (j,k) collided
            if (r.excluded) it->second.log_flag = true;
        }
    }
    std::vector<ExponentEntry> out;
    out.reserve(by_rate.size());
    for (const auto& [lam, e] : by_rate) out.push_back(e);
    return out;
}

} // namespace

std::vector<ExponentEntry> exponent_ladder(const ResonanceLadder& ladder)
{
    if (ladder.items.empty())
        throw DomainError("exponent_ladder: empty ladder");
    return collapse_rates(ladder.items);
}

std::vector<ExponentEntry> mode_exponent_ladder(const ResonanceLadder& ladder, int j)
{
    std::vector<Resonance> filtered;
    for (const auto& r : ladder.items)
        if (r.j == j) filtered.push_back(r);
    if (filtered.empty())
        throw DomainError("mode_exponent_ladder: mode j=" + std::to_string(j) +
                          " has no resonances inside the strip");
    return collapse_rates(filtered);
}

void write_ladder_csv(const ResonanceLadder& ladder, const std::filesystem::path& path)
{
    CsvWriter csv(path, {"j", "k", "nu", "im_sigma", "multiplicity", "excluded"});
    for (const auto& r : ladder.items) {
        csv.row({std::to_string(r.j), std::to_string(r.k), fmt_double(r.nu),
                 fmt_double(r.sigma.imag()), std::to_string(r.multiplicity),
                 r.excluded ? "1" : "0"});
    }
}

} // namespace conewave::spectrum
