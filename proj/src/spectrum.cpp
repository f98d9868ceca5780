#include "csalloc/spectrum.hpp"

#include "csalloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csalloc {

double SpectrumProfile::peak() const {
    double p = 0.0;
    for (const BandSpec& b : bands) p = std::max(p, b.amplitude);
    return p;
}

std::vector<std::size_t> SpectrumProfile::support() const {
    std::vector<std::size_t> out;
    for (const BandSpec& b : bands)
        for (std::size_t k = b.start; k < b.end(); ++k) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SpectrumProfile::support_width() const {
    std::size_t w = 0;
    for (const BandSpec& b : bands) w += b.width;
    return w;
}

SpectrumProfile dyadic_stepwise(std::size_t start, std::size_t base_width,
                                std::size_t num_bands, double amplitude) {
    if (base_width == 0 || num_bands == 0)
        throw std::invalid_argument("dyadic_stepwise: empty band layout");
    SpectrumProfile profile;
    profile.kind = ProfileKind::StepwisePower;
    std::size_t cursor = start;
    for (std::size_t i = 0; i < num_bands; ++i) {
        // widths W, W, 2W, 4W, ...; amplitudes (2^k - 1)A, largest first
        std::size_t width = (i == 0) ? base_width : base_width << (i - 1);
        double amp = static_cast<double>((std::uint64_t{1} << (num_bands - i)) - 1) * amplitude;
        profile.bands.push_back({cursor, width, amp});
        cursor += width;
    }
    return profile;
}

SpectrumProfile stepwise(std::size_t start, const std::vector<std::size_t>& widths,
                         const std::vector<double>& amplitudes) {
    if (widths.size() != amplitudes.size() || widths.empty())
        throw std::invalid_argument("stepwise: widths/amplitudes mismatch");
    SpectrumProfile profile;
    profile.kind = ProfileKind::StepwisePower;
    std::size_t cursor = start;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        profile.bands.push_back({cursor, widths[i], amplitudes[i]});
        cursor += widths[i];
    }
    return profile;
}

SpectrumProfile flat_band(std::size_t start, std::size_t width, double amplitude) {
    SpectrumProfile profile;
    profile.kind = ProfileKind::FlatBand;
    profile.bands.push_back({start, width, amplitude});
    return profile;
}

SpectrumProfile triangular(std::size_t start, std::size_t width, double peak) {
    SpectrumProfile profile;
    profile.kind = ProfileKind::Triangular;
    profile.bands.push_back({start, width, peak});
    return profile;
}

SpectrumProfile power_law(std::size_t start, std::size_t width, double peak, double exponent) {
    if (exponent <= 0.0) throw std::invalid_argument("power_law: exponent must be positive");
    SpectrumProfile profile;
    profile.kind = ProfileKind::PowerLaw;
    profile.bands.push_back({start, width, peak});
    profile.exponent = exponent;
    return profile;
}

namespace {

void check_bands(const SpectrumProfile& profile, std::size_t n) {
    if (profile.bands.empty()) throw std::invalid_argument("profile has no bands");
    std::vector<BandSpec> sorted = profile.bands;
    std::sort(sorted.begin(), sorted.end(),
              [](const BandSpec& a, const BandSpec& b) { return a.start < b.start; });
    std::size_t prev_end = 0;
    bool first = true;
    for (const BandSpec& b : sorted) {
        if (b.width == 0) throw std::invalid_argument("band width must be positive");
        if (b.end() > n) throw std::invalid_argument("band exceeds spectrum length");
        if (!first && b.start < prev_end) throw std::invalid_argument("bands overlap");
        prev_end = b.end();
        first = false;
    }
}

} // namespace

ComplexSignal generate_spectrum(const SpectrumProfile& profile, std::size_t n, PhaseMode phase,
                                std::uint64_t phase_seed) {
    if (n == 0) throw std::invalid_argument("spectrum length must be positive");
    check_bands(profile, n);

    ComplexSignal spectrum = ComplexSignal::zeros(n, Domain::Frequency);
    switch (profile.kind) {
    case ProfileKind::FlatBand:
    case ProfileKind::MultiBand:
    case ProfileKind::StepwisePower:
        for (const BandSpec& b : profile.bands)
            for (std::size_t k = b.start; k < b.end(); ++k) spectrum[k] = b.amplitude;
        break;
    case ProfileKind::Triangular: {
        const BandSpec& b = profile.bands.front();
        // magnitude at offset i is peak * (W - i) / W; minimum bin is peak/W
        for (std::size_t i = 0; i < b.width; ++i)
            spectrum[b.start + i] =
                b.amplitude * static_cast<double>(b.width - i) / static_cast<double>(b.width);
        break;
    }
    case ProfileKind::PowerLaw: {
        const BandSpec& b = profile.bands.front();
        for (std::size_t i = 0; i < b.width; ++i)
            spectrum[b.start + i] =
                b.amplitude * std::pow(static_cast<double>(i + 1), -profile.exponent);
        break;
    }
    }

    if (phase == PhaseMode::Random) {
        Rng rng(phase_seed);
        for (std::size_t k = 0; k < n; ++k) {
            if (spectrum[k] == Complex(0.0)) continue;
            double theta = rng.uniform_real() * 2.0 * std::numbers::pi;
            spectrum[k] *= Complex(std::cos(theta), std::sin(theta));
        }
    }
    return spectrum;
}

double main_lobe_width(std::size_t band_width, std::size_t n) {
    if (band_width == 0 || band_width >= n)
        throw std::invalid_argument("main_lobe_width: need 1 <= W < N");
    return 2.0 * static_cast<double>(n) / (static_cast<double>(band_width) + 1.0);
}

ComplexSignal flat_band_closed_form(std::size_t n, std::size_t k0, std::size_t width,
                                    double amplitude) {
    if (width == 0 || k0 + width > n)
        throw std::invalid_argument("flat_band_closed_form: band must fit in [0, N)");
    const double nn = static_cast<double>(n);
    const double center = static_cast<double>(k0) + (static_cast<double>(width) - 1.0) / 2.0;
    const double scale = amplitude / std::sqrt(nn);

    std::vector<Complex> values(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        double kernel;
        if (t == 0) {
            kernel = static_cast<double>(width); // removable singularity, limit W
        } else {
            kernel = std::sin(std::numbers::pi * static_cast<double>(width) * x / nn) /
                     std::sin(std::numbers::pi * x / nn);
        }
        const double angle = 2.0 * std::numbers::pi * x * center / nn;
        values[t] = scale * kernel * Complex(std::cos(angle), std::sin(angle));
    }
    return ComplexSignal(std::move(values), Domain::Time);
}

} // namespace csalloc
