#include "disclose/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disclose/errors.hpp"

namespace disclose {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-13;
constexpr double kCostTol = 1e-11;
constexpr int kDegenerateRun = 50;

class Tableau {
public:
    Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
    double& rhs(int i) { return at(i, cols_); }
    // Row `rows_` is the objective: reduced costs, value in the rhs slot (negated).
    double& cost(int j) { return at(rows_, j); }

    void pivot(int pr, int pc) {
        double* prow = &at(pr, 0);
        const double inv = 1.0 / prow[pc];
        for (int j = 0; j <= cols_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (int i = 0; i <= rows_; ++i) {
            if (i == pr) continue;
            double* row = &at(i, 0);
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        }
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

// Runs simplex iterations on the objective row. `allowed` masks columns that may enter.
int run(Tableau& t, std::vector<int>& basis, const std::vector<char>& allowed, int max_iter) {
    int degenerate = 0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const bool bland = degenerate >= kDegenerateRun;
        int pc = -1;
        double best = kCostTol;
        for (int j = 0; j < t.cols(); ++j) {
            if (!allowed[j]) continue;
            double d = t.cost(j);
            if (d > best) {
                pc = j;
                if (bland) break;
                best = d;
            }
        }
        if (pc < 0) return iter;
        // Harris ratio test: relaxed minimum first, then the largest pivot within it.
        double cmax = 0.0;
        for (int i = 0; i < t.rows(); ++i) cmax = std::max(cmax, std::fabs(t.at(i, pc)));
        const double ptol = std::max<double>(kPivotTol, 1e-9 * cmax);
        double bound = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.rows(); ++i) {
            double a = t.at(i, pc);
            if (a <= ptol) continue;
            bound = std::min(bound, (std::max(t.rhs(i), 0.0) + kFeasTol) / a);
        }
        int pr = -1;
        double best_a = 0.0, ratio = 0.0;
        for (int i = 0; i < t.rows(); ++i) {
            double a = t.at(i, pc);
            if (a <= ptol) continue;
            double q = std::max(t.rhs(i), 0.0) / a;
            if (q > bound) continue;
            if (a > best_a || (bland && a == best_a && basis[i] < basis[pr])) {
                best_a = a;
                pr = i;
                ratio = q;
            }
        }
        if (pr < 0) throw DomainError("lp_maximize: objective unbounded");
        degenerate = ratio <= 1e-15 ? degenerate + 1 : 0;
        t.pivot(pr, pc);
        basis[pr] = pc;
    }
    throw DomainError("lp_maximize: iteration limit reached");
}

} // namespace

LpResult lp_maximize(const std::vector<double>& c, const std::vector<std::vector<double>>& A_eq,
                     const std::vector<double>& b_eq, const std::vector<std::vector<double>>& A_le,
                     const std::vector<double>& b_le) {
    const int nv = static_cast<int>(c.size());
    const int ne = static_cast<int>(A_eq.size());
    const int nl = static_cast<int>(A_le.size());
    if (static_cast<int>(b_eq.size()) != ne || static_cast<int>(b_le.size()) != nl)
        throw DomainError("lp_maximize: dimension mismatch");
    const int rows = ne + nl;
    const int cols = nv + nl + ne; // structural, slack, artificial
    Tableau t(rows, cols);
    std::vector<int> basis(rows);

    for (int i = 0; i < ne; ++i) {
        if (static_cast<int>(A_eq[i].size()) != nv) throw DomainError("lp_maximize: row length");
        const double sign = b_eq[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < nv; ++j) t.at(i, j) = sign * A_eq[i][j];
        t.at(i, nv + nl + i) = 1.0;
        t.rhs(i) = sign * b_eq[i];
        basis[i] = nv + nl + i;
    }
    for (int k = 0; k < nl; ++k) {
        const int i = ne + k;
        if (static_cast<int>(A_le[k].size()) != nv) throw DomainError("lp_maximize: row length");
        if (b_le[k] < -1e-12) throw DomainError("lp_maximize: negative inequality bound");
        for (int j = 0; j < nv; ++j) t.at(i, j) = A_le[k][j];
        t.at(i, nv + k) = 1.0;
        t.rhs(i) = std::max(b_le[k], 0.0);
        basis[i] = nv + k;
    }

    const int max_iter = 50 * (rows + cols) + 1000;
    LpResult out;

    // Phase one: maximize minus the sum of artificials.
    if (ne > 0) {
        for (int i = 0; i < ne; ++i)
            for (int j = 0; j <= cols; ++j)
                if (j < nv + nl || j == cols) t.at(rows, j) += t.at(i, j);
        std::vector<char> allowed(cols, 1);
        for (int i = 0; i < ne; ++i) allowed[nv + nl + i] = 0;
        out.iterations += run(t, basis, allowed, max_iter);
        if (t.rhs(rows) > 1e-9) throw InfeasibleLp("lp_maximize: infeasible (phase one residual)");
        // Drive remaining artificials out of the basis where possible.
        for (int i = 0; i < rows; ++i) {
            if (basis[i] < nv + nl) continue;
            int pc = -1;
            double best = 1e-9;
            for (int j = 0; j < nv + nl; ++j)
                if (std::fabs(t.at(i, j)) > best) {
                    best = std::fabs(t.at(i, j));
                    pc = j;
                }
            if (pc >= 0) {
                t.pivot(i, pc);
                basis[i] = pc;
            }
        }
    }

    // Phase two.
    for (int j = 0; j <= cols; ++j) t.cost(j) = 0.0;
    for (int j = 0; j < nv; ++j) t.cost(j) = c[j];
    for (int i = 0; i < rows; ++i) {
        const int b = basis[i];
        const double cb = b < nv ? c[b] : 0.0;
        if (cb == 0.0) continue;
        for (int j = 0; j <= cols; ++j) t.cost(j) -= cb * t.at(i, j);
    }
    std::vector<char> allowed(cols, 1);
    for (int i = 0; i < ne; ++i) allowed[nv + nl + i] = 0;
    out.iterations += run(t, basis, allowed, max_iter);

    out.x.assign(nv, 0.0);
    for (int i = 0; i < rows; ++i)
        if (basis[i] < nv) out.x[basis[i]] = static_cast<double>(std::max(t.rhs(i), 0.0));
    out.value = 0.0;
    for (int j = 0; j < nv; ++j) out.value += c[j] * out.x[j];
    return out;
}

} // namespace disclose
