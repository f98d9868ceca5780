#include "csalloc/projection.hpp"

#include "csalloc/fft.hpp"

#include <algorithm>
#include <stdexcept>

namespace csalloc {

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t ambient)
    : indices_(std::move(indices)), ambient_(ambient) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw std::invalid_argument("IndexSet: duplicate indices");
    if (!indices_.empty() && indices_.back() >= ambient_)
        throw std::invalid_argument("IndexSet: index out of range");
}

IndexSet IndexSet::full(std::size_t ambient) {
    std::vector<std::size_t> all(ambient);
    for (std::size_t i = 0; i < ambient; ++i) all[i] = i;
    return IndexSet(std::move(all), ambient);
}

bool IndexSet::contains(std::size_t k) const {
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

bool IndexSet::contains_all(const IndexSet& other) const {
    return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                         other.indices_.end());
}

IndexSet IndexSet::unite(const IndexSet& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("IndexSet: ambient mismatch");
    std::vector<std::size_t> merged;
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                   other.indices_.end(), std::back_inserter(merged));
    return IndexSet(std::move(merged), ambient_);
}

bool IndexSet::intersects(const IndexSet& other) const {
    auto a = indices_.begin();
    auto b = other.indices_.begin();
    while (a != indices_.end() && b != other.indices_.end()) {
        if (*a == *b) return true;
        if (*a < *b)
            ++a;
        else
            ++b;
    }
    return false;
}

IndexSet complement(const IndexSet& sel) {
    std::vector<std::size_t> out;
    out.reserve(sel.ambient() - sel.size());
    auto it = sel.indices().begin();
    for (std::size_t k = 0; k < sel.ambient(); ++k) {
        if (it != sel.indices().end() && *it == k) {
            ++it;
            continue;
        }
        out.push_back(k);
    }
    return IndexSet(std::move(out), sel.ambient());
}

ProjectionOperator::ProjectionOperator(IndexSet selected, IndexSet suppressed)
    : selected_(std::move(selected)), suppressed_(std::move(suppressed)) {
    if (suppressed_.ambient() != selected_.ambient())
        throw std::invalid_argument("ProjectionOperator: ambient mismatch");
    if (selected_.intersects(suppressed_))
        throw std::invalid_argument("ProjectionOperator: selected and suppressed overlap");
}

ProjectionOperator::ProjectionOperator(IndexSet selected)
    : selected_(std::move(selected)), suppressed_(IndexSet::empty(selected_.ambient())) {}

std::vector<std::size_t> ProjectionOperator::constrained_rows() const {
    std::vector<std::size_t> rows = selected_.indices();
    rows.insert(rows.end(), suppressed_.indices().begin(), suppressed_.indices().end());
    return rows;
}

ProjectionOperator extend(const ProjectionOperator& op) {
    if (op.suppressed().size() != 0)
        throw std::invalid_argument("extend: operator already carries a suppressed block");
    return ProjectionOperator(op.selected(), complement(op.selected()));
}

ComplexSignal extend_vector(const ComplexSignal& v, std::size_t n) {
    if (v.size() > n) throw std::invalid_argument("extend_vector: input longer than target");
    std::vector<Complex> out(n);
    std::copy(v.values().begin(), v.values().end(), out.begin());
    return ComplexSignal(std::move(out), v.domain());
}

ComplexSignal measure(const ProjectionOperator& op, const ComplexSignal& s) {
    if (s.size() != op.ambient())
        throw std::invalid_argument("measure: signal length does not match operator");
    ComplexSignal spectrum = dft(s);
    std::vector<Complex> out;
    out.reserve(op.rows());
    for (std::size_t k : op.selected().indices()) out.push_back(spectrum[k]);
    out.resize(op.rows()); // suppressed block is zero by construction (assumed support)
    return ComplexSignal(std::move(out), Domain::Frequency);
}

ComplexSignal apply_adjoint(const ProjectionOperator& op, const ComplexSignal& y) {
    if (y.size() != op.rows())
        throw std::invalid_argument("apply_adjoint: vector length does not match operator rows");
    std::vector<Complex> scattered(op.ambient());
    std::size_t r = 0;
    for (std::size_t k : op.selected().indices()) scattered[k] = y[r++];
    for (std::size_t k : op.suppressed().indices()) scattered[k] = y[r++];
    return idft(ComplexSignal(std::move(scattered), Domain::Frequency));
}

} // namespace csalloc
