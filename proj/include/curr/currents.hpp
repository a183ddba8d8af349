#pragma once

#include <map>
#include <memory>
#include <set>

#include "curr/mesh.hpp"

namespace curr {

using Mult = long long;

/// Integral k-current carried by the k-simplices of an embedded complex.
/// Entries map simplex ids to nonzero integer multiplicities; the sign is
/// relative to the sorted vertex order of the simplex. The entry map is the
/// canonical form: equal currents compare equal.
class SimplicialCurrent {
public:
    SimplicialCurrent(std::shared_ptr<const EmbeddedComplex> complex, int dim)
        : complex_(std::move(complex)), dim_(dim) {
        check_dim();
    }
    SimplicialCurrent(std::shared_ptr<const EmbeddedComplex> complex, int dim,
                      const std::vector<std::pair<Index, Mult>>& entries);

    const EmbeddedComplex& complex() const { return *complex_; }
    const std::shared_ptr<const EmbeddedComplex>& complex_ptr() const { return complex_; }
    int dim() const { return dim_; }
    const std::map<Index, Mult>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    Mult multiplicity(Index s) const {
        auto it = entries_.find(s);
        return it == entries_.end() ? 0 : it->second;
    }

    void add(Index simplex, Mult mult);

    bool operator==(const SimplicialCurrent& other) const {
        return complex_ == other.complex_ && dim_ == other.dim_ && entries_ == other.entries_;
    }

private:
    std::shared_ptr<const EmbeddedComplex> complex_;
    int dim_;
    std::map<Index, Mult> entries_;

    void check_dim() const;
};

struct MassReport {
    double total = 0;
    std::map<Index, double> per_simplex;
};

/// M(T) = sum over carried simplices of |multiplicity| * k-volume.
MassReport mass(const SimplicialCurrent& T);

/// Alternating-sign face boundary; exact in integer arithmetic.
SimplicialCurrent boundary(const SimplicialCurrent& T);

/// T restricted to the given set of k-simplex ids.
SimplicialCurrent restrict_to(const SimplicialCurrent& T, const std::set<Index>& ids);

/// Ids with nonzero multiplicity (the carrier of the current).
std::set<Index> canonical_set(const SimplicialCurrent& T);

SimplicialCurrent current_add(const SimplicialCurrent& A, const SimplicialCurrent& B);
SimplicialCurrent current_sub(const SimplicialCurrent& A, const SimplicialCurrent& B);
SimplicialCurrent current_scale(const SimplicialCurrent& T, Mult c);

} // namespace curr
