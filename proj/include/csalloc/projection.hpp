#ifndef CSALLOC_PROJECTION_HPP
#define CSALLOC_PROJECTION_HPP

#include "csalloc/signal.hpp"

#include <cstddef>
#include <vector>

namespace csalloc {

/// Strictly ordered set of distinct indices inside [0, ambient).
class IndexSet {
public:
    IndexSet(std::vector<std::size_t> indices, std::size_t ambient);

    static IndexSet empty(std::size_t ambient) { return IndexSet({}, ambient); }
    static IndexSet full(std::size_t ambient);

    std::size_t size() const { return indices_.size(); }
    std::size_t ambient() const { return ambient_; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    bool contains(std::size_t k) const;
    bool contains_all(const IndexSet& other) const;

    IndexSet unite(const IndexSet& other) const;
    bool intersects(const IndexSet& other) const;

    bool operator==(const IndexSet& other) const = default;

private:
    std::vector<std::size_t> indices_; // sorted, unique
    std::size_t ambient_;
};

/// Sorted complement of `sel` within [0, ambient).
IndexSet complement(const IndexSet& sel);

/// Row selection of the DFT: `selected` are the measured rows, `suppressed`
/// the rows constrained to zero. Stored as index sets; products with the
/// transform go through fast transform + gather, never a dense matrix.
class ProjectionOperator {
public:
    ProjectionOperator(IndexSet selected, IndexSet suppressed);
    explicit ProjectionOperator(IndexSet selected);

    std::size_t ambient() const { return selected_.ambient(); }
    const IndexSet& selected() const { return selected_; }
    const IndexSet& suppressed() const { return suppressed_; }

    /// Number of constraint rows, |selected| + |suppressed|.
    std::size_t rows() const { return selected_.size() + suppressed_.size(); }

    /// Square operator: selected and suppressed together cover [0, N).
    bool is_extended() const { return rows() == ambient(); }

    /// Constrained row indices in block order: selected first, then suppressed.
    std::vector<std::size_t> constrained_rows() const;

private:
    IndexSet selected_;
    IndexSet suppressed_;
};

/// Fill the suppressed block with the complement of `selected`, making the
/// operator a square row permutation of the identity.
ProjectionOperator extend(const ProjectionOperator& op);

/// Append N - M zeros to a length-M vector.
ComplexSignal extend_vector(const ComplexSignal& v, std::size_t n);

/// Measurement: entries of dft(s) at the selected rows (in order), followed
/// by |suppressed| zeros when the operator is extended.
ComplexSignal measure(const ProjectionOperator& op, const ComplexSignal& s);

/// Adjoint of the constrained-row map: scatter y into an N-vector at
/// selected-then-suppressed positions and apply the inverse transform.
ComplexSignal apply_adjoint(const ProjectionOperator& op, const ComplexSignal& y);

} // namespace csalloc

#endif
