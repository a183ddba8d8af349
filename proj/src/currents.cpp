#include "curr/currents.hpp"

#include "curr/errors.hpp"

namespace curr {

void SimplicialCurrent::check_dim() const {
    if (dim_ < 0 || dim_ > complex_->top_dim())
        throw InputError("current dimension " + std::to_string(dim_) + " not present in complex");
}

SimplicialCurrent::SimplicialCurrent(std::shared_ptr<const EmbeddedComplex> complex, int dim,
                                     const std::vector<std::pair<Index, Mult>>& entries)
    : complex_(std::move(complex)), dim_(dim) {
    check_dim();
    for (auto [s, m] : entries) add(s, m);
}

void SimplicialCurrent::add(Index simplex, Mult mult) {
    if (simplex < 0 || simplex >= complex_->simplex_count(dim_))
        throw InputError("chain entry references unknown simplex id " + std::to_string(simplex));
    if (mult == 0) return;
    auto [it, inserted] = entries_.try_emplace(simplex, mult);
    if (!inserted) {
        it->second += mult;
        if (it->second == 0) entries_.erase(it);
    }
}

MassReport mass(const SimplicialCurrent& T) {
    MassReport r;
    for (auto [s, m] : T.entries()) {
        const double c = std::abs(static_cast<double>(m)) * T.complex().volume(T.dim(), s);
        r.per_simplex[s] = c;
        r.total += c;
    }
    return r;
}

SimplicialCurrent boundary(const SimplicialCurrent& T) {
    if (T.dim() == 0) throw UnsupportedError("boundary of a 0-current is not defined");
    SimplicialCurrent out(T.complex_ptr(), T.dim() - 1);
    for (auto [s, m] : T.entries()) {
        auto fs = T.complex().faces(T.dim(), s);
        Mult sign = 1;
        for (Index f : fs) {
            out.add(f, sign * m);
            sign = -sign;
        }
    }
    return out;
}

SimplicialCurrent restrict_to(const SimplicialCurrent& T, const std::set<Index>& ids) {
    for (Index s : ids)
        if (s < 0 || s >= T.complex().simplex_count(T.dim()))
            throw InputError("restrict: id " + std::to_string(s) + " is not a " +
                             std::to_string(T.dim()) + "-simplex of the complex");
    SimplicialCurrent out(T.complex_ptr(), T.dim());
    for (auto [s, m] : T.entries())
        if (ids.count(s)) out.add(s, m);
    return out;
}

std::set<Index> canonical_set(const SimplicialCurrent& T) {
    std::set<Index> out;
    for (auto [s, m] : T.entries()) out.insert(s);
    return out;
}

SimplicialCurrent current_add(const SimplicialCurrent& A, const SimplicialCurrent& B) {
    if (A.complex_ptr() != B.complex_ptr()) throw InputError("chain arithmetic requires a shared complex");
    if (A.dim() != B.dim()) throw InputError("chain arithmetic requires equal dimensions");
    SimplicialCurrent out = A;
    for (auto [s, m] : B.entries()) out.add(s, m);
    return out;
}

SimplicialCurrent current_sub(const SimplicialCurrent& A, const SimplicialCurrent& B) {
    if (A.complex_ptr() != B.complex_ptr()) throw InputError("chain arithmetic requires a shared complex");
    if (A.dim() != B.dim()) throw InputError("chain arithmetic requires equal dimensions");
    SimplicialCurrent out = A;
    for (auto [s, m] : B.entries()) out.add(s, -m);
    return out;
}

SimplicialCurrent current_scale(const SimplicialCurrent& T, Mult c) {
    SimplicialCurrent out(T.complex_ptr(), T.dim());
    if (c == 0) return out;
    for (auto [s, m] : T.entries()) out.add(s, c * m);
    return out;
}

} // namespace curr
