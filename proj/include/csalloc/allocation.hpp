#ifndef CSALLOC_ALLOCATION_HPP
#define CSALLOC_ALLOCATION_HPP

#include "csalloc/projection.hpp"
#include "csalloc/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csalloc {

enum class Scheme { URS, NRS, VD, HD, HU };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Per-band/per-slice sample counts plus the concrete sampled index sets.
/// For HU plans the per-slice sets are the NEW draws; cumulative sets carry
/// the reuse of all earlier slices.
struct AllocationPlan {
    Scheme scheme = Scheme::URS;
    std::vector<std::size_t> per_band_counts;
    std::vector<IndexSet> sampled_sets;    // one per band/slice (new draws for HU)
    std::vector<IndexSet> cumulative_sets; // HU only: slice m's effective sample set
    std::size_t total_budget = 0;
    std::uint64_t seed = 0;

    /// All distinct sampled indices across bands/slices.
    IndexSet all_samples() const;
    /// HU: effective (cumulative) counts per slice.
    std::vector<std::size_t> effective_counts() const;
};

/// One horizontal slice: nested support plus the magnitude range it covers.
struct Slice {
    IndexSet support;
    double floor = 0.0;   // magnitudes strictly above this belong to the slice or higher
    double ceiling = 0.0; // top of the slice's magnitude range
};

/// Top-magnitude slice first; supports are nested for monotone profiles.
struct SliceSchedule {
    std::vector<Slice> slices;

    std::size_t stages() const { return slices.size(); }
};

/// M distinct indices drawn uniformly from [0, N) without replacement.
IndexSet sample_urs(std::size_t n, std::size_t m, std::uint64_t seed);

/// In-band sampling: M indices drawn uniformly from the union of bands.
/// Expected per-band counts are proportional to band widths.
AllocationPlan sample_inband(const std::vector<BandSpec>& bands, std::size_t n, std::size_t m,
                             std::uint64_t seed);

/// In-band sampling with explicit per-band counts.
AllocationPlan sample_per_band(const std::vector<BandSpec>& bands, std::size_t n,
                               const std::vector<std::size_t>& counts, std::uint64_t seed);

/// Nested-slice sampling with reuse: slice m draws `new_counts[m]` fresh
/// indices from its support minus everything drawn before; cumulative sets
/// grow monotonically.
AllocationPlan sample_hu(const SliceSchedule& schedule, std::size_t n,
                         const std::vector<std::size_t>& new_counts, std::uint64_t seed);

/// Per-slice draws without reuse (horizontal division): slice m draws
/// `counts[m]` indices from its own support, independently.
AllocationPlan sample_hd(const SliceSchedule& schedule, std::size_t n,
                         const std::vector<std::size_t>& counts, std::uint64_t seed);

/// Sample counts per band for the three allocation schemes of the dyadic
/// four-band comparison: VD [M, M, M/2, M/4], HD [M, M/2, M/4, M/8],
/// HU new-samples [M, M/4, M/8, M/16]. Fractions round half-up.
std::vector<std::size_t> allocate_dyadic(std::size_t m, Scheme scheme);

enum class DensityLaw {
    InverseLinear, // rho(k) = M0 / k
    InverseSquare, // rho(k) = M0 / k^2 (density proportional to squared magnitude)
};

/// Sampling-density profile rho(k), k = 1..k_max. Both decay laws are
/// exposed; the squared-magnitude law is the default.
std::vector<double> density_profile(std::size_t m0, std::size_t k_max,
                                    DensityLaw law = DensityLaw::InverseSquare);

/// Split a profile into B nested horizontal slices, top magnitude first.
/// Step-wise profiles slice at the distinct step levels; continuous profiles
/// (triangular, power-law) use uniformly spaced magnitude thresholds.
SliceSchedule horizontal_slices(const SpectrumProfile& profile, std::size_t n, std::size_t b);

/// ceil(C * K * ln N) samples required for K components on an N grid.
std::size_t estimate_min_samples(std::size_t k, std::size_t n, double c = 2.0);

/// Stage retrieval fractions from horizontal-slab magnitude masses:
/// f_m = mass(slab m) / mass(slabs m..B). Equal-mass slices give
/// 1/B, 1/(B-1), ..., 1.
std::vector<double> stage_factors_from_profile(const SpectrumProfile& profile, std::size_t n,
                                               const SliceSchedule& schedule);

} // namespace csalloc

#endif
