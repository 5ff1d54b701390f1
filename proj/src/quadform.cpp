#include <a4cb/quadform.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace a4cb {

namespace {

constexpr int kMaxArity = 64;
constexpr int kMaxCoeff = 1000000;
constexpr int kMaxBound = 10000;
constexpr std::size_t kMaxCounterexamples = 16;

std::size_t tri_index(int n, int i, int j) {
    // strict upper triangle, row-major: (i,j) with i < j
    return std::size_t(i) * std::size_t(n) - std::size_t(i) * std::size_t(i + 1) / 2 +
           std::size_t(j - i - 1);
}

std::string vec_to_string(const std::vector<int>& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(x[i]);
    }
    s += ')';
    return s;
}

// min over t in {0..b} of d*t^2 + e*t
long long min_quadratic(long long d, long long e, long long b) {
    auto f = [&](long long t) { return d * t * t + e * t; };
    long long m = std::min(f(0), f(b));
    if (d > 0) {
        long long t0 = -e / (2 * d);  // truncated; real argmin is within 1
        for (long long t = t0 - 1; t <= t0 + 1; ++t)
            if (t > 0 && t < b) m = std::min(m, f(t));
    }
    return m;
}

struct WitnessSearch {
    int n;
    long long b;
    std::vector<long long> dg;       // diagonal
    std::vector<long long> cpl;      // n*n symmetric couplings, zero diagonal
    std::vector<long long> negsum;   // negsum[k*n+j] = b * sum of negative
                                     // couplings c[i][j] over k <= i < j
    std::vector<long long> pull;     // pull[j] = sum over fixed i of c[i][j]*x_i
    std::vector<int> x;
    PositivityVerdict* out;
    bool need_le0 = true;  // still looking for q(x) <= 0
    bool need_lt0 = true;  // still looking for q(x) < 0

    void classify_leaf(long long value) {
        if (std::all_of(x.begin(), x.end(), [](int t) { return t == 0; })) return;
        if (need_le0 && value <= 0) {
            out->weakly_positive = false;
            out->witness = x;
            out->witness_value = value;
            need_le0 = false;
        }
        if (need_lt0 && value < 0) {
            out->nonnegative = false;
            out->negative_witness = x;
            out->negative_value = value;
            need_lt0 = false;
        }
    }

    void dfs(int k, long long value) {
        ++out->nodes_visited;
        if (k == n) {
            classify_leaf(value);
            return;
        }
        long long lb = value;
        for (int j = k; j < n; ++j)
            lb += min_quadratic(dg[std::size_t(j)],
                                pull[std::size_t(j)] + negsum[std::size_t(k) * std::size_t(n) + std::size_t(j)], b);
        if (lb > 0) return;
        if (!need_le0 && lb >= 0) return;
        const long long p0 = pull[std::size_t(k)];
        long long t = 0;
        for (; t <= b; ++t) {
            if (t > 0)
                for (int j = k + 1; j < n; ++j)
                    pull[std::size_t(j)] += cpl[std::size_t(k) * std::size_t(n) + std::size_t(j)];
            x[std::size_t(k)] = int(t);
            dfs(k + 1, value + dg[std::size_t(k)] * t * t + p0 * t);
            if (!need_le0 && !need_lt0) break;
        }
        if (t > b) t = b;  // loop ran to completion
        for (int j = k + 1; j < n; ++j)
            pull[std::size_t(j)] -= cpl[std::size_t(k) * std::size_t(n) + std::size_t(j)] * t;
        x[std::size_t(k)] = 0;
    }
};

}  // namespace

QuadForm QuadForm::unit(std::string name, int n) {
    if (n < 1 || n > kMaxArity)
        throw form_error("quadratic form arity must be in 1.." + std::to_string(kMaxArity) +
                         ", got " + std::to_string(n));
    QuadForm q;
    q.name = std::move(name);
    q.n = n;
    q.diag.assign(std::size_t(n), 1);
    q.off.assign(std::size_t(n) * std::size_t(n - 1) / 2, 0);
    return q;
}

int QuadForm::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw form_error("coefficient index out of range for form of arity " + std::to_string(n));
    if (i == j) return diag[std::size_t(i)];
    if (i > j) std::swap(i, j);
    return off[tri_index(n, i, j)];
}

void QuadForm::set_coeff(int i, int j, int c) {
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw form_error("coefficient index out of range for form of arity " + std::to_string(n));
    if (i == j) {
        diag[std::size_t(i)] = c;
        return;
    }
    if (i > j) std::swap(i, j);
    off[tri_index(n, i, j)] = c;
}

void QuadForm::add_product(const std::vector<int>& u, const std::vector<int>& w, int scale) {
    if (int(u.size()) != n || int(w.size()) != n)
        throw form_error("add_product: factor length does not match arity " + std::to_string(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int d = scale * u[std::size_t(i)] * w[std::size_t(j)];
            if (d == 0) continue;
            set_coeff(i, j, coeff(i, j) + d);
        }
}

bool QuadForm::is_unit() const {
    return std::all_of(diag.begin(), diag.end(), [](int d) { return d == 1; });
}

long long QuadForm::eval(const std::vector<int>& x) const {
    if (int(x.size()) != n)
        throw form_error("eval: vector length " + std::to_string(x.size()) +
                         " does not match arity " + std::to_string(n));
    long long v = 0;
    for (int i = 0; i < n; ++i)
        v += (long long)diag[std::size_t(i)] * x[std::size_t(i)] * x[std::size_t(i)];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            long long c = off[tri_index(n, i, j)];
            if (c) v += c * x[std::size_t(i)] * x[std::size_t(j)];
        }
    return v;
}

std::string QuadForm::to_string() const {
    std::string s = "n=" + std::to_string(n) + "\n";
    for (int i = 0; i < n; ++i)
        if (diag[std::size_t(i)] != 1)
            s += "q " + std::to_string(i + 1) + " " + std::to_string(i + 1) + " " +
                 std::to_string(diag[std::size_t(i)]) + "\n";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int c = off[tri_index(n, i, j)];
            if (c)
                s += "q " + std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
                     std::to_string(c) + "\n";
        }
    return s;
}

PositivityVerdict weakly_positive(const QuadForm& q, int bound) {
    if (q.n < 1) throw form_error("weakly_positive: form has no variables");
    if (bound < 1 || bound > kMaxBound)
        throw form_error("weakly_positive: bound must be in 1.." + std::to_string(kMaxBound));

    // overflow guard: every intermediate value is bounded by a few multiples
    // of (sum |diag| + 2 * sum |off|) * bound^2
    unsigned long long mass = 0;
    for (int d : q.diag) mass += (unsigned long long)std::abs(d);
    for (int c : q.off) mass += 2ull * (unsigned long long)std::abs(c);
    if (mass > 0 && (unsigned long long)bound * (unsigned long long)bound >
                        (1ull << 61) / mass)
        throw form_error("weakly_positive: bound too large for this form's coefficients");

    PositivityVerdict verdict;
    verdict.form_name = q.name;
    verdict.search_bound = bound;

    WitnessSearch s;
    s.n = q.n;
    s.b = bound;
    s.dg.assign(q.diag.begin(), q.diag.end());
    s.cpl.assign(std::size_t(q.n) * std::size_t(q.n), 0);
    for (int i = 0; i < q.n; ++i)
        for (int j = i + 1; j < q.n; ++j) {
            long long c = q.off[tri_index(q.n, i, j)];
            s.cpl[std::size_t(i) * std::size_t(q.n) + std::size_t(j)] = c;
            s.cpl[std::size_t(j) * std::size_t(q.n) + std::size_t(i)] = c;
        }
    s.negsum.assign(std::size_t(q.n) * std::size_t(q.n), 0);
    for (int j = 0; j < q.n; ++j)
        for (int k = j - 1; k >= 0; --k) {
            long long below = s.negsum[std::size_t(k + 1) * std::size_t(q.n) + std::size_t(j)];
            long long c = s.cpl[std::size_t(k) * std::size_t(q.n) + std::size_t(j)];
            s.negsum[std::size_t(k) * std::size_t(q.n) + std::size_t(j)] =
                below + (c < 0 ? c * bound : 0);
        }
    s.pull.assign(std::size_t(q.n), 0);
    s.x.assign(std::size_t(q.n), 0);
    s.out = &verdict;
    s.dfs(0, 0);

    // a witness must re-verify by direct evaluation
    if (verdict.witness && q.eval(*verdict.witness) != verdict.witness_value)
        throw form_error("weakly_positive: witness failed re-verification");
    if (verdict.negative_witness &&
        q.eval(*verdict.negative_witness) != verdict.negative_value)
        throw form_error("weakly_positive: negative witness failed re-verification");
    return verdict;
}

std::string PositivityVerdict::to_string() const {
    std::string s = form_name + " bound=" + std::to_string(search_bound) +
                    ": weakly_positive=" + (weakly_positive ? "yes" : "no") +
                    " nonnegative=" + (nonnegative ? "yes" : "no");
    if (witness)
        s += "\n  witness " + vec_to_string(*witness) + " value " +
             std::to_string(witness_value);
    if (negative_witness)
        s += "\n  negative witness " + vec_to_string(*negative_witness) + " value " +
             std::to_string(negative_value);
    return s;
}

std::vector<long long> ParamLinearForm::materialize(const PBWIndex& a) const {
    std::vector<long long> vals;
    vals.reserve(coeffs.size());
    for (const LinForm& f : coeffs) vals.push_back(f.eval(a));
    return vals;
}

long long ParamLinearForm::eval(const PBWIndex& a, const std::vector<int>& x) const {
    if (int(x.size()) != arity)
        throw form_error("eval: vector length " + std::to_string(x.size()) +
                         " does not match arity " + std::to_string(arity));
    long long v = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        long long atom = 0;
        for (int i = 0; i < arity; ++i)
            atom += (long long)atoms[j][std::size_t(i)] * x[std::size_t(i)];
        v += coeffs[j].eval(a) * atom;
    }
    return v;
}

std::string ParamLinearForm::to_string() const {
    std::string s = name + " (arity " + std::to_string(arity) + ")\n";
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        s += "  coeff(" + atom_names[j] + ") = " + coeffs[j].to_string() + "\n";
    return s;
}

LNonnegReport region_implies_L_nonneg(const ParamLinearForm& L, const Region& r, int max_entry) {
    if (max_entry < 0) throw form_error("region_implies_L_nonneg: max_entry must be >= 0");
    LNonnegReport rep;
    rep.form_name = L.name;
    if (r.ineqs.empty()) return rep;
    PBWIndex a;
    for (;;) {
        if (r.contains(a)) {
            ++rep.points_checked;
            for (std::size_t j = 0; j < L.coeffs.size(); ++j) {
                long long val = L.coeffs[j].eval(a);
                if (val < 0) {
                    rep.holds = false;
                    if (rep.counterexamples.size() < kMaxCounterexamples)
                        rep.counterexamples.push_back({a, L.atom_names[j], val});
                }
            }
        }
        int i = 9;
        while (i >= 0 && a[i] == max_entry) a[i--] = 0;
        if (i < 0) break;
        ++a[i];
    }
    return rep;
}

std::string LNonnegReport::to_string() const {
    std::string s = form_name + ": all coefficients >= 0 on " +
                    std::to_string(points_checked) + " region points: " +
                    (holds ? "yes" : "no");
    for (const auto& ce : counterexamples)
        s += "\n  point " + ce.point.to_string() + " coeff(" + ce.atom + ") = " +
             std::to_string(ce.value);
    return s;
}

namespace {

std::vector<int> unit_atom(int arity, int i) {
    std::vector<int> v(std::size_t(arity), 0);
    v[std::size_t(i)] = 1;
    return v;
}

ParamLinearForm make_base_linear(std::string name, const char* x2c, const char* x5c) {
    static const char* kNames[10] = {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "m", "s", "p"};
    const char* coeff_text[10] = {"a10 - a8", x2c,        "a2 - a6", "a5 - a8", x5c,
                                  "a1 + a2 - a5 - a6",    "a1 - a5", "a9 - a6", "a7 - a3",
                                  "a6 + a7 - a2 - a3"};
    ParamLinearForm f;
    f.name = std::move(name);
    f.arity = 10;
    for (int j = 0; j < 10; ++j) {
        f.atom_names.push_back(kNames[j]);
        f.atoms.push_back(unit_atom(10, j));
        f.coeffs.push_back(LinForm::parse(coeff_text[std::size_t(j)]));
    }
    return f;
}

ParamLinearForm make_lp3() {
    ParamLinearForm f;
    f.name = "LP3";
    f.arity = 11;
    auto add = [&](std::string atom, std::vector<int> vec, const char* coeff) {
        f.atom_names.push_back(std::move(atom));
        f.atoms.push_back(std::move(vec));
        f.coeffs.push_back(LinForm::parse(coeff));
    };
    add("x1", unit_atom(11, 0), "a10 - a8");
    add("x2", unit_atom(11, 1), "a8 + a9 - a5 - a6");
    add("x3", unit_atom(11, 2), "a2 + a5 - a1 - a6");
    add("x4", unit_atom(11, 3), "a1 - a8");
    add("x5", unit_atom(11, 4), "a5 + a6 + a7 - a1 - a2 - a3");
    add("x6", unit_atom(11, 5), "a2 - a6");
    std::vector<int> x7w(11, 0);
    x7w[6] = 1;
    x7w[10] = -1;
    add("x7-w", x7w, "a5 - a1");
    add("m", unit_atom(11, 7), "a9 - a6");
    add("s", unit_atom(11, 8), "a7 - a3");
    add("p", unit_atom(11, 9), "a6 + a7 - a2 - a3");
    std::vector<int> grp(11, 0);
    grp[3] = 1;
    grp[2] = -1;
    grp[5] = -1;
    grp[10] = -1;
    add("x4-x3-x6-w", grp, "a5 - a1");
    return f;
}

QuadForm make_qm(std::string name) {
    // variable order x1..x7, m, s, p (0-based indices 0..9)
    QuadForm q = QuadForm::unit(std::move(name), 10);
    struct Entry {
        int i, j, c;
    };
    static const Entry kOff[] = {
        // x2x4 x2m x3x6 x3x7 x3s x3p x4m x5x6 x5x7 x5s x5p x6x7 x6s 2x6p x7p sp
        {1, 3, 1}, {1, 7, 1}, {2, 5, 1}, {2, 6, 1}, {2, 8, 1}, {2, 9, 1},
        {3, 7, 1}, {4, 5, 1}, {4, 6, 1}, {4, 8, 1}, {4, 9, 1}, {5, 6, 1},
        {5, 8, 1}, {5, 9, 2}, {6, 9, 1}, {8, 9, 1},
        // -x1x4 -x1m -x2x6 -x2x7 -x2s -x2p -x3x4 -x3m -x4x7 -x4p -x6m -ms
        {0, 3, -1}, {0, 7, -1}, {1, 5, -1}, {1, 6, -1}, {1, 8, -1}, {1, 9, -1},
        {2, 3, -1}, {2, 7, -1}, {3, 6, -1}, {3, 9, -1}, {5, 7, -1}, {7, 8, -1},
    };
    for (const Entry& e : kOff) q.set_coeff(e.i, e.j, e.c);
    return q;
}

QuadForm make_qp3() {
    // QM on x1..x7,m,s,p extended by w (index 10, no quadratic mass of its
    // own), plus 2*(x4-x3-x6-w)*(x7-w)
    QuadForm qm = make_qm("QP3");
    QuadForm q = QuadForm::unit("QP3", 11);
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j) q.set_coeff(i, j, qm.coeff(i, j));
    q.set_coeff(10, 10, 0);
    std::vector<int> grp(11, 0);
    grp[3] = 1;
    grp[2] = -1;
    grp[5] = -1;
    grp[10] = -1;
    std::vector<int> x7w(11, 0);
    x7w[6] = 1;
    x7w[10] = -1;
    q.add_product(grp, x7w, 2);
    return q;
}

FormLibrary make_library() {
    FormLibrary lib;
    lib.linear.emplace("LM", make_base_linear("LM", "a8 + a9 - a5 - a6",
                                              "a5 + a6 + a7 - a1 - a2 - a3"));
    lib.linear.emplace("LP1", make_base_linear("LP1", "a5 + a6 - a8 - a9",
                                               "a5 + a6 + a7 - a1 - a2 - a3"));
    lib.linear.emplace("LP2", make_base_linear("LP2", "a8 + a9 - a5 - a6",
                                               "a1 + a2 + a3 - a5 - a6 - a7"));
    lib.linear.emplace("LP3", make_lp3());
    lib.quadratic.emplace("QM", make_qm("QM"));
    lib.quadratic.emplace("QP1", make_qm("QP1"));
    lib.quadratic.emplace("QP2", make_qm("QP2"));
    lib.quadratic.emplace("QP3", make_qp3());
    return lib;
}

}  // namespace

const FormLibrary& builtin_forms() {
    static const FormLibrary lib = make_library();
    return lib;
}

QuadForm load_quad_form(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int arity = -1;
    QuadForm q;
    std::set<std::pair<int, int>> seen;
    auto fail = [&](const std::string& msg) {
        throw form_error("form file line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (arity < 0) {
            // header "n=<arity>", tolerating spaces around '='
            std::string rest;
            std::getline(ls, rest);
            std::string header = tok + rest;
            header.erase(std::remove_if(header.begin(), header.end(),
                                        [](unsigned char c) { return std::isspace(c); }),
                         header.end());
            if (header.size() < 3 || header[0] != 'n' || header[1] != '=')
                fail("expected header n=<arity>");
            std::size_t pos = 0;
            int nval = 0;
            try {
                nval = std::stoi(header.substr(2), &pos);
            } catch (const std::exception&) {
                fail("expected header n=<arity>");
            }
            if (pos != header.size() - 2) fail("expected header n=<arity>");
            if (nval < 1 || nval > kMaxArity)
                fail("arity must be in 1.." + std::to_string(kMaxArity));
            arity = nval;
            q = QuadForm::unit(name, arity);
            continue;
        }
        if (tok != "q") fail("expected a line 'q i j <coeff>'");
        long long i = 0, j = 0, c = 0;
        if (!(ls >> i >> j >> c)) fail("expected a line 'q i j <coeff>'");
        if (ls >> tok) fail("trailing text after coefficient");
        if (i < 1 || i > arity || j < 1 || j > arity)
            fail("index out of range 1.." + std::to_string(arity));
        if (c < -kMaxCoeff || c > kMaxCoeff)
            fail("coefficient out of range +-" + std::to_string(kMaxCoeff));
        std::pair<int, int> key{int(std::min(i, j)), int(std::max(i, j))};
        if (!seen.insert(key).second)
            fail("duplicate entry for (" + std::to_string(i) + "," + std::to_string(j) + ")");
        q.set_coeff(int(i) - 1, int(j) - 1, int(c));
    }
    if (arity < 0) throw form_error("form file is empty; expected header n=<arity>");
    return q;
}

}  // namespace a4cb
