#include "csalloc/allocation.hpp"

#include "csalloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace csalloc {

std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::URS: return "urs";
    case Scheme::NRS: return "nrs";
    case Scheme::VD: return "vd";
    case Scheme::HD: return "hd";
    case Scheme::HU: return "hu";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "urs") return Scheme::URS;
    if (name == "nrs") return Scheme::NRS;
    if (name == "vd") return Scheme::VD;
    if (name == "hd") return Scheme::HD;
    if (name == "hu") return Scheme::HU;
    throw std::invalid_argument("unknown scheme: " + name);
}

IndexSet AllocationPlan::all_samples() const {
    if (sampled_sets.empty()) return IndexSet::empty(0);
    IndexSet acc = sampled_sets.front();
    for (std::size_t i = 1; i < sampled_sets.size(); ++i) acc = acc.unite(sampled_sets[i]);
    return acc;
}

std::vector<std::size_t> AllocationPlan::effective_counts() const {
    if (cumulative_sets.empty()) return per_band_counts;
    std::vector<std::size_t> counts;
    counts.reserve(cumulative_sets.size());
    for (const IndexSet& s : cumulative_sets) counts.push_back(s.size());
    return counts;
}

IndexSet sample_urs(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m > n) throw std::invalid_argument("sample_urs: M exceeds N");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    Rng rng(seed);
    return IndexSet(sample_without_replacement(pool, m, rng), n);
}

namespace {

std::vector<std::size_t> band_pool(const std::vector<BandSpec>& bands, std::size_t n) {
    std::set<std::size_t> seen;
    for (const BandSpec& b : bands) {
        if (b.end() > n) throw std::invalid_argument("band exceeds grid");
        for (std::size_t k = b.start; k < b.end(); ++k)
            if (!seen.insert(k).second) throw std::invalid_argument("bands overlap");
    }
    return std::vector<std::size_t>(seen.begin(), seen.end());
}

std::vector<IndexSet> split_by_band(const std::vector<std::size_t>& draw,
                                    const std::vector<BandSpec>& bands, std::size_t n) {
    std::vector<IndexSet> sets;
    sets.reserve(bands.size());
    for (const BandSpec& b : bands) {
        std::vector<std::size_t> mine;
        for (std::size_t k : draw)
            if (k >= b.start && k < b.end()) mine.push_back(k);
        sets.emplace_back(std::move(mine), n);
    }
    return sets;
}

} // namespace

AllocationPlan sample_inband(const std::vector<BandSpec>& bands, std::size_t n, std::size_t m,
                             std::uint64_t seed) {
    std::vector<std::size_t> pool = band_pool(bands, n);
    if (m > pool.size()) throw std::invalid_argument("sample_inband: M exceeds total band width");

    Rng rng(seed);
    std::vector<std::size_t> draw = sample_without_replacement(pool, m, rng);

    AllocationPlan plan;
    plan.scheme = Scheme::NRS;
    plan.total_budget = m;
    plan.seed = seed;
    plan.sampled_sets = split_by_band(draw, bands, n);
    for (const IndexSet& s : plan.sampled_sets) plan.per_band_counts.push_back(s.size());
    return plan;
}

AllocationPlan sample_per_band(const std::vector<BandSpec>& bands, std::size_t n,
                               const std::vector<std::size_t>& counts, std::uint64_t seed) {
    if (counts.size() != bands.size())
        throw std::invalid_argument("sample_per_band: one count per band required");
    band_pool(bands, n); // validates disjointness and range

    AllocationPlan plan;
    plan.scheme = Scheme::NRS;
    plan.seed = seed;
    Rng rng(seed);
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const BandSpec& b = bands[i];
        if (counts[i] > b.width)
            throw std::invalid_argument("sample_per_band: count exceeds band width");
        std::vector<std::size_t> pool(b.width);
        for (std::size_t k = 0; k < b.width; ++k) pool[k] = b.start + k;
        plan.sampled_sets.emplace_back(sample_without_replacement(pool, counts[i], rng), n);
        plan.per_band_counts.push_back(counts[i]);
        plan.total_budget += counts[i];
    }
    return plan;
}

AllocationPlan sample_hu(const SliceSchedule& schedule, std::size_t n,
                         const std::vector<std::size_t>& new_counts, std::uint64_t seed) {
    if (new_counts.size() != schedule.stages())
        throw std::invalid_argument("sample_hu: one count per slice required");

    AllocationPlan plan;
    plan.scheme = Scheme::HU;
    plan.seed = seed;
    Rng rng(seed);
    IndexSet cumulative = IndexSet::empty(n);
    IndexSet prev_support = IndexSet::empty(n);
    for (std::size_t m = 0; m < schedule.stages(); ++m) {
        const IndexSet& support = schedule.slices[m].support;
        if (!support.contains_all(prev_support))
            throw std::invalid_argument("sample_hu: slice supports must be nested");
        // New draws come from the region this slice adds; earlier samples are
        // reused, not redrawn.
        std::vector<std::size_t> pool;
        for (std::size_t k : support.indices())
            if (!prev_support.contains(k)) pool.push_back(k);
        if (new_counts[m] > pool.size())
            throw std::invalid_argument("sample_hu: count exceeds new slice region");
        IndexSet fresh(sample_without_replacement(pool, new_counts[m], rng), n);
        cumulative = cumulative.unite(fresh);
        plan.sampled_sets.push_back(fresh);
        plan.cumulative_sets.push_back(cumulative);
        plan.per_band_counts.push_back(new_counts[m]);
        plan.total_budget += new_counts[m];
        prev_support = support;
    }
    return plan;
}

AllocationPlan sample_hd(const SliceSchedule& schedule, std::size_t n,
                         const std::vector<std::size_t>& counts, std::uint64_t seed) {
    if (counts.size() != schedule.stages())
        throw std::invalid_argument("sample_hd: one count per slice required");

    AllocationPlan plan;
    plan.scheme = Scheme::HD;
    plan.seed = seed;
    Rng rng(seed);
    for (std::size_t m = 0; m < schedule.stages(); ++m) {
        const IndexSet& support = schedule.slices[m].support;
        if (counts[m] > support.size())
            throw std::invalid_argument("sample_hd: count exceeds slice support");
        plan.sampled_sets.emplace_back(
            sample_without_replacement(support.indices(), counts[m], rng), n);
        plan.per_band_counts.push_back(counts[m]);
        plan.total_budget += counts[m];
    }
    return plan;
}

std::vector<std::size_t> allocate_dyadic(std::size_t m, Scheme scheme) {
    if (m == 0) throw std::invalid_argument("allocate_dyadic: zero budget");
    std::vector<double> fractions;
    switch (scheme) {
    case Scheme::VD: fractions = {1.0, 1.0, 0.5, 0.25}; break;
    case Scheme::HD: fractions = {1.0, 0.5, 0.25, 0.125}; break;
    case Scheme::HU: fractions = {1.0, 0.25, 0.125, 0.0625}; break;
    default: throw std::invalid_argument("allocate_dyadic: scheme must be VD, HD, or HU");
    }
    std::vector<std::size_t> counts;
    counts.reserve(fractions.size());
    for (double f : fractions)
        counts.push_back(static_cast<std::size_t>(std::floor(static_cast<double>(m) * f + 0.5)));
    return counts;
}

std::vector<double> density_profile(std::size_t m0, std::size_t k_max, DensityLaw law) {
    if (m0 == 0) throw std::invalid_argument("density_profile: M0 must be >= 1");
    std::vector<double> rho;
    rho.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        double kk = static_cast<double>(k);
        rho.push_back(law == DensityLaw::InverseLinear ? static_cast<double>(m0) / kk
                                                       : static_cast<double>(m0) / (kk * kk));
    }
    return rho;
}

namespace {

std::vector<double> slice_floors(const SpectrumProfile& profile, std::size_t b) {
    const double peak = profile.peak();
    const bool stepped = profile.kind == ProfileKind::FlatBand ||
                         profile.kind == ProfileKind::MultiBand ||
                         profile.kind == ProfileKind::StepwisePower;
    std::vector<double> floors;
    if (stepped) {
        std::vector<double> levels;
        for (const BandSpec& band : profile.bands) levels.push_back(band.amplitude);
        std::sort(levels.begin(), levels.end(), std::greater<>());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        if (b > levels.size())
            throw std::invalid_argument(
                "horizontal_slices: more slices than distinct magnitude levels");
        // Slice m keeps everything above the next level down; deepest slice
        // reaches the whole support.
        for (std::size_t m = 1; m <= b; ++m)
            floors.push_back(m < b ? levels[m] : 0.0);
    } else {
        for (std::size_t m = 1; m <= b; ++m)
            floors.push_back(peak * static_cast<double>(b - m) / static_cast<double>(b));
    }
    return floors;
}

} // namespace

SliceSchedule horizontal_slices(const SpectrumProfile& profile, std::size_t n, std::size_t b) {
    if (b == 0) throw std::invalid_argument("horizontal_slices: need B >= 1");
    for (std::size_t i = 1; i < profile.bands.size(); ++i)
        if (profile.bands[i].amplitude > profile.bands[i - 1].amplitude)
            throw std::invalid_argument("horizontal_slices: band magnitudes must be nonincreasing");

    const ComplexSignal spectrum = generate_spectrum(profile, n);
    const std::vector<double> floors = slice_floors(profile, b);
    const double peak = profile.peak();

    SliceSchedule schedule;
    double ceiling = peak;
    for (std::size_t m = 0; m < b; ++m) {
        std::vector<std::size_t> support;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(spectrum[k]) > floors[m]) support.push_back(k);
        schedule.slices.push_back({IndexSet(std::move(support), n), floors[m], ceiling});
        ceiling = floors[m];
    }
    return schedule;
}

std::size_t estimate_min_samples(std::size_t k, std::size_t n, double c) {
    if (k == 0 || n < 2 || c <= 0.0)
        throw std::invalid_argument("estimate_min_samples: need K >= 1, N >= 2, C > 0");
    return static_cast<std::size_t>(
        std::ceil(c * static_cast<double>(k) * std::log(static_cast<double>(n))));
}

std::vector<double> stage_factors_from_profile(const SpectrumProfile& profile, std::size_t n,
                                               const SliceSchedule& schedule) {
    const ComplexSignal spectrum = generate_spectrum(profile, n);
    const std::size_t b = schedule.stages();

    // Mass of the horizontal slab between a slice's floor and ceiling.
    std::vector<double> masses(b, 0.0);
    for (std::size_t m = 0; m < b; ++m) {
        const Slice& slice = schedule.slices[m];
        for (std::size_t k = 0; k < n; ++k) {
            double mag = std::abs(spectrum[k]);
            masses[m] += std::clamp(mag, slice.floor, slice.ceiling) - slice.floor;
        }
    }

    std::vector<double> factors(b, 1.0);
    double remaining = 0.0;
    for (double mass : masses) remaining += mass;
    for (std::size_t m = 0; m < b; ++m) {
        if (remaining <= 0.0) throw std::invalid_argument("stage_factors: empty slab mass");
        factors[m] = masses[m] / remaining;
        remaining -= masses[m];
    }
    factors[b - 1] = 1.0; // final stage always retrieves the whole residual
    return factors;
}

} // namespace csalloc
