#include "csalloc/fft.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace csalloc {

double energy(const ComplexSignal& signal) {
    double total = 0.0;
    for (const Complex& v : signal.values()) total += std::norm(v);
    return total;
}

namespace detail {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Twiddle tables are cached per (N, sign); solver loops transform the same
// length thousands of times.
const std::vector<Complex>& twiddles(std::size_t n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, std::vector<Complex>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& table = cache[{n, sign}];
    if (table.empty()) {
        table.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double angle = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            table[k] = Complex(std::cos(angle), std::sin(angle));
        }
    }
    return table;
}

void radix2_inplace(std::vector<Complex>& data, int sign) {
    const std::size_t n = data.size();
    const int log2n = std::countr_zero(n);

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const std::vector<Complex>& w = twiddles(n, sign);
    for (int s = 1; s <= log2n; ++s) {
        const std::size_t m = std::size_t{1} << s;
        const std::size_t stride = n >> s;
        for (std::size_t k = 0; k < n; k += m) {
            for (std::size_t j = 0; j < m / 2; ++j) {
                Complex t = w[j * stride] * data[k + j + m / 2];
                Complex u = data[k + j];
                data[k + j] = u + t;
                data[k + j + m / 2] = u - t;
            }
        }
    }
}

std::vector<Complex> direct_transform(const std::vector<Complex>& in, int sign) {
    const std::size_t n = in.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            double angle = sign * kTwoPi * static_cast<double>(k) * static_cast<double>(m) /
                           static_cast<double>(n);
            acc += in[m] * Complex(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace

std::vector<Complex> unitary_fft(const std::vector<Complex>& in, int sign) {
    const std::size_t n = in.size();
    if (n == 0) throw std::invalid_argument("transform of empty signal");

    std::vector<Complex> out;
    if (std::has_single_bit(n)) {
        out = in;
        radix2_inplace(out, sign);
    } else {
        out = direct_transform(in, sign);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Complex& v : out) v *= scale;
    return out;
}

} // namespace detail

ComplexSignal dft(const ComplexSignal& signal) {
    if (signal.domain() != Domain::Time)
        throw std::invalid_argument("dft expects a time-domain signal");
    return ComplexSignal(detail::unitary_fft(signal.values(), -1), Domain::Frequency);
}

ComplexSignal idft(const ComplexSignal& spectrum) {
    if (spectrum.domain() != Domain::Frequency)
        throw std::invalid_argument("idft expects a frequency-domain signal");
    return ComplexSignal(detail::unitary_fft(spectrum.values(), +1), Domain::Time);
}

} // namespace csalloc
