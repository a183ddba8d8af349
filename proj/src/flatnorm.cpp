#include "curr/flatnorm.hpp"

#include <cmath>

#include "curr/errors.hpp"

namespace curr {

const char* to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::optimal: return "optimal";
        case SolverStatus::infeasible: return "infeasible";
        case SolverStatus::unbounded: return "unbounded";
    }
    return "?";
}

FlatNormResult flat_norm(const SimplicialCurrent& T, std::ostream* dump_lp) {
    const auto& c = T.complex();
    const int k = T.dim();
    FlatNormResult out;
    out.residual.dim = k;
    out.filling.dim = k + 1;

    const Index nk = c.simplex_count(k);
    const Index nk1 = (k + 1 <= c.top_dim()) ? c.simplex_count(k + 1) : 0;

    if (nk1 == 0) {
        // no filling space: the optimum is S = 0, residual = T
        for (auto [s, m] : T.entries()) out.residual.entries[s] = static_cast<double>(m);
        out.value = mass(T).total;
        return out;
    }

    LpProblem p;
    p.rows = nk;
    p.rhs.assign(static_cast<std::size_t>(nk), 0.0);
    for (auto [s, m] : T.entries()) p.rhs[static_cast<std::size_t>(s)] = static_cast<double>(m);

    // residual split variables
    for (Index e = 0; e < nk; ++e) {
        const double vol = c.volume(k, e);
        p.add_column(vol, {{e, 1.0}}, "rp" + std::to_string(e));
        p.add_column(vol, {{e, -1.0}}, "rm" + std::to_string(e));
    }
    // filling split variables with boundary coefficients
    for (Index t = 0; t < nk1; ++t) {
        const double vol = c.volume(k + 1, t);
        std::vector<std::pair<int, double>> col;
        auto fs = c.faces(k + 1, t);
        double sign = 1.0;
        for (Index f : fs) {
            col.emplace_back(f, sign);
            sign = -sign;
        }
        p.add_column(vol, col, "sp" + std::to_string(t));
        for (auto& e : col) e.second = -e.second;
        p.add_column(vol, col, "sm" + std::to_string(t));
    }

    if (dump_lp) write_lp_format(p, *dump_lp);

    LpResult sol = solve_lp(p);
    if (sol.status != LpStatus::optimal) {
        out.solver_status = (sol.status == LpStatus::infeasible) ? SolverStatus::infeasible
                                                                 : SolverStatus::unbounded;
        return out;
    }
    out.value = sol.value;
    for (Index e = 0; e < nk; ++e) {
        const double v = sol.x[static_cast<std::size_t>(2 * e)] - sol.x[static_cast<std::size_t>(2 * e + 1)];
        if (std::abs(v) > 1e-11) out.residual.entries[e] = v;
    }
    const std::size_t base = static_cast<std::size_t>(2 * nk);
    for (Index t = 0; t < nk1; ++t) {
        const double v = sol.x[base + static_cast<std::size_t>(2 * t)] -
                         sol.x[base + static_cast<std::size_t>(2 * t + 1)];
        if (std::abs(v) > 1e-11) out.filling.entries[t] = v;
    }
    return out;
}

FlatNormResult flat_distance(const SimplicialCurrent& A, const SimplicialCurrent& B,
                             std::ostream* dump_lp) {
    if (A.dim() != B.dim()) throw InputError("flat_distance requires chains of equal dimension");
    if (A.complex_ptr() == B.complex_ptr()) return flat_norm(current_sub(A, B), dump_lp);
    OverlayComplex ov = overlay_2d(A.complex_ptr(), B.complex_ptr());
    SimplicialCurrent a = transport_chain(ov, A, 1);
    SimplicialCurrent b = transport_chain(ov, B, 2);
    return flat_norm(current_sub(a, b), dump_lp);
}

} // namespace curr
