#ifndef CONEWAVE_SPECTRUM_HPP
#define CONEWAVE_SPECTRUM_HPP

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace conewave::spectrum {

// Spectrum of the link Laplacian: ascending distinct eigenvalues mu^2 with
// multiplicities.  The first entry is always (0, 1) (connected link).
class LinkSpectrum {
public:
    struct Entry {
        double mu_sq;
        int multiplicity;
    };

    enum class Source { circle, explicit_list };

    static LinkSpectrum circle(double alpha, int j_max);

    // Exact duplicates in the input are merged (multiplicities added); no
    // tolerance is applied to nearly-equal values.
    static LinkSpectrum explicit_list(std::vector<Entry> entries);

    static LinkSpectrum from_json_file(const std::filesystem::path& path);

    const std::vector<Entry>& entries() const { return entries_; }
    Source source() const { return source_; }
    double circle_alpha() const; // throws unless source is circle

private:
    LinkSpectrum(std::vector<Entry> entries, Source source, double alpha);

    std::vector<Entry> entries_;
    Source source_;
    double alpha_ = 0.0;
};

// nu_j = sqrt(((n-2)/2)^2 + mu_j^2); n >= 2 is dim C(Z).
double nu_of(int n, double mu_sq);

struct Resonance {
    int j;                      // eigenvalue index in the LinkSpectrum
    int k;                      // ladder index, k = 0, 1, ...
    double nu;
    std::complex<double> sigma; // -i (1/2 + k + nu)
    int multiplicity;
    bool excluded;              // nu in 1/2 + Z

    double decay_rate() const { return -sigma.imag(); } // 1/2 + k + nu
};

struct ResonanceLadder {
    int cone_dim = 2;
    double strip_depth = 0.0;
    std::vector<Resonance> items; // Im(sigma) descending, i.e. decay ascending
};

// All (j, k) with 1/2 + k + nu_j < strip_depth (open bound).  Excluded
// resonances are emitted with the flag set, never dropped.
ResonanceLadder resonances(int n, const LinkSpectrum& spec, double strip_depth);

struct ExponentEntry {
    double lambda;     // decay exponent 1/2 + k + nu
    int multiplicity;  // summed over coinciding (j, k) pairs
    bool log_flag;     // collision of distinct (j, k) or excluded contributor
};

// Distinct decay rates of a ladder.  Coincidence is exact comparison on the
// computed lambda values.
std::vector<ExponentEntry> exponent_ladder(const ResonanceLadder& ladder);

// Ladder of decay exponents seen by one angular mode j: 1/2 + nu_j + k.
std::vector<ExponentEntry> mode_exponent_ladder(const ResonanceLadder& ladder, int j);

// CSV with columns j,k,nu,im_sigma,multiplicity,excluded.
void write_ladder_csv(const ResonanceLadder& ladder, const std::filesystem::path& path);

} // namespace conewave::spectrum

#endif
