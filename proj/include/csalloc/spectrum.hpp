#ifndef CSALLOC_SPECTRUM_HPP
#define CSALLOC_SPECTRUM_HPP

#include "csalloc/signal.hpp"

#include <cstdint>
#include <vector>

namespace csalloc {

/// A contiguous frequency band [start, start + width) with a flat magnitude.
struct BandSpec {
    std::size_t start = 0;
    std::size_t width = 1;
    double amplitude = 1.0;

    std::size_t end() const { return start + width; } // one past last bin
};

enum class ProfileKind {
    FlatBand,      // single band, unit-style flat magnitude
    MultiBand,     // several disjoint flat bands
    StepwisePower, // bands with step-wise decaying magnitudes
    Triangular,    // linear ramp from peak down across one support
    PowerLaw,      // |S(start + i)| = peak * (i + 1)^(-exponent)
};

/// Parametric magnitude-spectrum description. Phases are zero unless a
/// seeded random-phase mode is requested at generation time.
struct SpectrumProfile {
    ProfileKind kind = ProfileKind::FlatBand;
    std::vector<BandSpec> bands; // FlatBand: 1 entry; Triangular/PowerLaw: 1 entry whose
                                 // amplitude is the peak value
    double exponent = 1.0;       // PowerLaw only

    /// Peak magnitude over all bands.
    double peak() const;
    /// Union of band supports, ascending.
    std::vector<std::size_t> support() const;
    /// Total number of in-band bins.
    std::size_t support_width() const;
};

/// Step-wise power-decay profile with dyadic widths (W, W, 2W, 4W, ...) and
/// amplitudes (2^k - 1) * amplitude, largest first.
SpectrumProfile dyadic_stepwise(std::size_t start, std::size_t base_width,
                                std::size_t num_bands, double amplitude);

/// Step-wise profile from explicit per-band widths and amplitudes laid out
/// contiguously from `start`.
SpectrumProfile stepwise(std::size_t start, const std::vector<std::size_t>& widths,
                         const std::vector<double>& amplitudes);

SpectrumProfile flat_band(std::size_t start, std::size_t width, double amplitude = 1.0);
SpectrumProfile triangular(std::size_t start, std::size_t width, double peak = 1.0);
SpectrumProfile power_law(std::size_t start, std::size_t width, double peak, double exponent);

enum class PhaseMode { Zero, Random };

/// Realize a profile as a length-N frequency-domain signal. Magnitudes follow
/// the profile exactly; phases are zero, or seeded uniform-random when
/// PhaseMode::Random is given. Overlapping bands are rejected.
ComplexSignal generate_spectrum(const SpectrumProfile& profile, std::size_t n,
                                PhaseMode phase = PhaseMode::Zero,
                                std::uint64_t phase_seed = 0);

/// Main-lobe width 2N/(W+1) of the band-limited prototype signal.
double main_lobe_width(std::size_t band_width, std::size_t n);

/// Closed-form time signal of a flat band of width W starting at k0 under
/// the unitary convention:
///   s(n) = (1/sqrt(N)) * exp(j*2*pi*n*(k0 + (W-1)/2)/N) * sin(pi*W*n/N) / sin(pi*n/N)
/// with the removable singularity at n = 0 evaluated as its limit W.
ComplexSignal flat_band_closed_form(std::size_t n, std::size_t k0, std::size_t width,
                                    double amplitude = 1.0);

} // namespace csalloc

#endif
