#ifndef CSALLOC_FFT_HPP
#define CSALLOC_FFT_HPP

#include "csalloc/signal.hpp"

namespace csalloc {

/// Unitary forward transform (1/sqrt(N) on both directions), time -> frequency.
/// Power-of-two lengths use an iterative radix-2 kernel; anything else falls
/// back to direct summation, which is fine at desk scale.
ComplexSignal dft(const ComplexSignal& signal);

/// Unitary inverse transform, frequency -> time. Exact inverse of dft().
ComplexSignal idft(const ComplexSignal& spectrum);

namespace detail {
/// Transform of a raw buffer without domain bookkeeping.
/// sign = -1 forward, +1 inverse; output scaled by 1/sqrt(N).
std::vector<Complex> unitary_fft(const std::vector<Complex>& in, int sign);
} // namespace detail

} // namespace csalloc

#endif
