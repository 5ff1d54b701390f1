#include "a4cb/elim.hpp"

namespace a4cb {

namespace {

// one Bareiss step dividing by the previous pivot; exact in an integral domain
void eliminate_below(LaurentMatrix& m, std::size_t pr, std::size_t pc, const LaurentPoly& prev_pivot) {
    const std::size_t rows = m.size();
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    const LaurentPoly& pivot = m[pr][pc];
    for (std::size_t r = pr + 1; r < rows; ++r) {
        if (m[r][pc].is_zero()) {
            // still rescale the row to keep the Bareiss invariant
            for (std::size_t c = pc + 1; c < cols; ++c) {
                if (m[r][c].is_zero()) continue;
                m[r][c] = lp_div_exact(lp_mul(pivot, m[r][c]), prev_pivot);
            }
            continue;
        }
        LaurentPoly factor = m[r][pc];
        m[r][pc] = LaurentPoly::zero();
        for (std::size_t c = pc + 1; c < cols; ++c) {
            LaurentPoly t = lp_sub(lp_mul(pivot, m[r][c]), lp_mul(factor, m[pr][c]));
            m[r][c] = t.is_zero() ? std::move(t) : lp_div_exact(t, prev_pivot);
        }
    }
}

// forward elimination; returns pivot columns, leaves m in echelon form
std::vector<std::size_t> forward(LaurentMatrix& m) {
    std::vector<std::size_t> pivot_cols;
    const std::size_t rows = m.size();
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    LaurentPoly prev_pivot = LaurentPoly::one();
    std::size_t pr = 0;
    for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
        std::size_t sel = pr;
        while (sel < rows && m[sel][pc].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[pr], m[sel]);
        eliminate_below(m, pr, pc, prev_pivot);
        prev_pivot = m[pr][pc];
        pivot_cols.push_back(pc);
        ++pr;
    }
    return pivot_cols;
}

}  // namespace

int ff_rank(LaurentMatrix m) {
    return static_cast<int>(forward(m).size());
}

std::optional<std::vector<LaurentPoly>> ff_solve(LaurentMatrix a, std::vector<LaurentPoly> b) {
    const std::size_t rows = a.size();
    if (b.size() != rows) throw internal_error("ff_solve: rhs size mismatch");
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (std::size_t r = 0; r < rows; ++r) a[r].push_back(std::move(b[r]));

    std::vector<std::size_t> pivot_cols = forward(a);
    if (pivot_cols.size() != cols || (cols > 0 && pivot_cols.back() >= cols)) {
        // column rank deficit, or a pivot landed in the rhs column: inconsistent
        return std::nullopt;
    }
    for (std::size_t r = pivot_cols.size(); r < rows; ++r) {
        if (!a[r][cols].is_zero()) return std::nullopt;
    }
    // back substitution; the true solution has Laurent entries, so each
    // division must be exact
    std::vector<LaurentPoly> x(cols);
    for (std::size_t k = cols; k-- > 0;) {
        LaurentPoly rhs = a[k][cols];
        for (std::size_t c = k + 1; c < cols; ++c) {
            if (a[k][c].is_zero() || x[c].is_zero()) continue;
            rhs = lp_sub(rhs, lp_mul(a[k][c], x[c]));
        }
        if (rhs.is_zero()) {
            x[k] = LaurentPoly::zero();
            continue;
        }
        LaurentPoly q;
        if (!lp_try_div_exact(rhs, a[k][pivot_cols[k]], q)) return std::nullopt;
        x[k] = std::move(q);
    }
    return x;
}

}  // namespace a4cb
