#ifndef CSALLOC_SIGNAL_HPP
#define CSALLOC_SIGNAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace csalloc {

using Complex = std::complex<double>;

/// Which domain a vector of samples lives in. Fixed at construction.
enum class Domain { Time, Frequency };

/// A length-N vector of complex samples tagged with its domain.
/// Measurement vectors may be empty; transforms require N >= 1.
class ComplexSignal {
public:
    ComplexSignal() : domain_(Domain::Time) {} // empty; reassigned before use
    ComplexSignal(std::vector<Complex> values, Domain domain)
        : values_(std::move(values)), domain_(domain) {}

    static ComplexSignal zeros(std::size_t n, Domain domain) {
        return ComplexSignal(std::vector<Complex>(n), domain);
    }

    std::size_t size() const { return values_.size(); }
    Domain domain() const { return domain_; }

    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }

    const Complex& operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }

private:
    std::vector<Complex> values_;
    Domain domain_;
};

/// Sum of squared moduli. Parseval-equal across domains under the
/// unitary transform convention.
double energy(const ComplexSignal& signal);

} // namespace csalloc

#endif
