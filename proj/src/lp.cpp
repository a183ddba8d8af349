#include "curr/lp.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "curr/errors.hpp"

namespace curr {

int LpProblem::add_column(double c, std::vector<std::pair<int, double>> entries, std::string name) {
    cost.push_back(c);
    columns.push_back(std::move(entries));
    names.push_back(std::move(name));
    return cols++;
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kReducedEps = 1e-9;

/// Full tableau with an extra reduced-cost row kept up to date through
/// pivots; columns are n structural + m artificial, rows scaled so rhs >= 0.
class Tableau {
public:
    explicit Tableau(const LpProblem& p) : m_(p.rows), n_(p.cols) {
        width_ = n_ + m_ + 1;
        data_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0.0);
        basis_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const double s = p.rhs[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
            at(i, n_ + m_) = s * p.rhs[static_cast<std::size_t>(i)];
            at(i, n_ + i) = 1.0;
            basis_[static_cast<std::size_t>(i)] = n_ + i;
        }
        for (int j = 0; j < n_; ++j)
            for (auto [r, v] : p.columns[static_cast<std::size_t>(j)]) {
                const double s = p.rhs[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
                at(r, j) += s * v;
            }
    }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(c)]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(c)]; }
    int rhs_col() const { return n_ + m_; }

    LpStatus optimize(const std::vector<double>& obj, int limit) {
        // rebuild the reduced-cost row for this objective
        double* rc = &at(m_, 0);
        for (int j = 0; j <= n_ + m_; ++j) rc[j] = (j <= n_ + m_ - 1) ? obj_at(obj, j) : 0.0;
        for (int i = 0; i < m_; ++i) {
            const double cb = obj_at(obj, basis_[static_cast<std::size_t>(i)]);
            if (cb == 0) continue;
            const double* row = &at(i, 0);
            for (int j = 0; j <= n_ + m_; ++j) rc[j] -= cb * row[j];
        }

        const long long max_iter = 400LL * (m_ + n_) + 5000;
        long long iter = 0;
        bool bland = false;
        int stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        while (true) {
            if (++iter > max_iter) throw Error("simplex iteration limit exceeded");
            int enter = -1;
            double best = -kReducedEps;
            for (int j = 0; j < limit; ++j) {
                const double r = rc[j];
                if (bland) {
                    if (r < -kReducedEps) {
                        enter = j;
                        break;
                    }
                } else if (r < best) {
                    best = r;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a > kPivotEps) {
                    const double ratio = at(i, rhs_col()) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leave >= 0 &&
                         basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
            const double cur = -at(m_, rhs_col());
            if (cur >= last_obj - 1e-13) {
                if (++stall > 3 * (m_ + 8)) bland = true;
            } else {
                stall = 0;
            }
            last_obj = cur;
        }
    }

    void pivot(int leave, int enter) {
        const double inv = 1.0 / at(leave, enter);
        double* prow = &at(leave, 0);
        for (int c = 0; c < width_; ++c) prow[c] *= inv;
        prow[enter] = 1.0;
        for (int r = 0; r <= m_; ++r) {
            if (r == leave) continue;
            double* row = &at(r, 0);
            const double f = row[enter];
            if (f == 0) continue;
            for (int c = 0; c < width_; ++c) row[c] -= f * prow[c];
            row[enter] = 0.0;
        }
        basis_[static_cast<std::size_t>(leave)] = enter;
    }

    int m() const { return m_; }
    const std::vector<int>& basis() const { return basis_; }

    /// Pivot artificial variables out of the basis where a structural column
    /// allows it; fully artificial rows stay (they carry zero rhs).
    void expel_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            int enter = -1;
            for (int j = 0; j < n_; ++j)
                if (std::abs(at(i, j)) > 1e-9) {
                    enter = j;
                    break;
                }
            if (enter >= 0) pivot(i, enter);
        }
    }

private:
    int m_, n_, width_;
    std::vector<double> data_;
    std::vector<int> basis_;

    double obj_at(const std::vector<double>& obj, int j) const {
        return static_cast<std::size_t>(j) < obj.size() ? obj[static_cast<std::size_t>(j)] : 0.0;
    }
};

} // namespace

LpResult solve_lp(const LpProblem& p) {
    LpResult res;
    if (p.rows == 0) {
        res.x.assign(static_cast<std::size_t>(p.cols), 0.0);
        res.value = 0;
        return res;
    }
    Tableau t(p);

    // phase 1: drive out the artificial variables
    std::vector<double> phase1(static_cast<std::size_t>(p.cols + p.rows), 0.0);
    for (int j = p.cols; j < p.cols + p.rows; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
    if (t.optimize(phase1, p.cols + p.rows) == LpStatus::unbounded)
        throw Error("phase-1 simplex reported unbounded");
    double art = 0;
    for (int i = 0; i < t.m(); ++i)
        if (t.basis()[static_cast<std::size_t>(i)] >= p.cols) art += t.at(i, t.rhs_col());
    if (art > 1e-7) {
        res.status = LpStatus::infeasible;
        return res;
    }
    t.expel_artificials();

    // phase 2
    std::vector<double> obj(p.cost);
    const LpStatus st = t.optimize(obj, p.cols);
    if (st == LpStatus::unbounded) {
        res.status = LpStatus::unbounded;
        return res;
    }
    res.status = LpStatus::optimal;
    res.x.assign(static_cast<std::size_t>(p.cols), 0.0);
    for (int i = 0; i < t.m(); ++i) {
        const int b = t.basis()[static_cast<std::size_t>(i)];
        if (b < p.cols) res.x[static_cast<std::size_t>(b)] = t.at(i, t.rhs_col());
    }
    res.value = 0;
    for (int j = 0; j < p.cols; ++j) res.value += p.cost[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    return res;
}

void write_lp_format(const LpProblem& p, std::ostream& os) {
    auto name = [&](int j) {
        return (static_cast<std::size_t>(j) < p.names.size() && !p.names[static_cast<std::size_t>(j)].empty())
                   ? p.names[static_cast<std::size_t>(j)]
                   : ("x" + std::to_string(j));
    };
    os << "Minimize\n obj:";
    for (int j = 0; j < p.cols; ++j) {
        const double c = p.cost[static_cast<std::size_t>(j)];
        if (c == 0) continue;
        os << (c >= 0 ? " + " : " - ");
        os << std::abs(c) << " " << name(j);
    }
    os << "\nSubject To\n";
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(p.rows));
    for (int j = 0; j < p.cols; ++j)
        for (auto [r, v] : p.columns[static_cast<std::size_t>(j)]) rows[static_cast<std::size_t>(r)].emplace_back(j, v);
    for (int r = 0; r < p.rows; ++r) {
        os << " c" << r << ":";
        for (auto [j, v] : rows[static_cast<std::size_t>(r)]) {
            os << (v >= 0 ? " + " : " - ");
            os << std::abs(v) << " " << name(j);
        }
        os << " = " << p.rhs[static_cast<std::size_t>(r)] << "\n";
    }
    os << "End\n";
}

} // namespace curr
