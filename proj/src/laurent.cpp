#include "a4cb/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

namespace a4cb {

LaurentPoly LaurentPoly::monomial(Int coeff, std::int32_t exp) {
    LaurentPoly p;
    if (coeff != 0) p.terms_.emplace_back(exp, std::move(coeff));
    return p;
}

bool LaurentPoly::is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

std::int32_t LaurentPoly::min_degree() const {
    if (terms_.empty()) throw internal_error("min_degree of zero polynomial");
    return terms_.front().first;
}

std::int32_t LaurentPoly::max_degree() const {
    if (terms_.empty()) throw internal_error("max_degree of zero polynomial");
    return terms_.back().first;
}

const Int& LaurentPoly::coeff(std::int32_t exp) const {
    static const Int kZero = 0;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                               [](const Term& t, std::int32_t e) { return t.first < e; });
    if (it == terms_.end() || it->first != exp) return kZero;
    return it->second;
}

void LaurentPoly::add_term(std::int32_t exp, const Int& c) {
    if (c == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                               [](const Term& t, std::int32_t e) { return t.first < e; });
    if (it != terms_.end() && it->first == exp) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    } else {
        terms_.insert(it, Term{exp, c});
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
    add_scaled(rhs, 1);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
    add_scaled(rhs, -1);
    return *this;
}

void LaurentPoly::add_scaled(const LaurentPoly& p, const Int& c, std::int32_t shift) {
    if (c == 0 || p.terms_.empty()) return;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + p.terms_.size());
    auto a = terms_.begin();
    auto b = p.terms_.begin();
    while (a != terms_.end() || b != p.terms_.end()) {
        if (b == p.terms_.end() || (a != terms_.end() && a->first < b->first + shift)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || a->first > b->first + shift) {
            merged.emplace_back(b->first + shift, c * b->second);
            ++b;
        } else {
            Int s = a->second + c * b->second;
            if (s != 0) merged.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
}

void LaurentPoly::add_mul(const LaurentPoly& p, const LaurentPoly& c) {
    for (const auto& [exp, coeff] : c.terms_) add_scaled(p, coeff, exp);
}

void LaurentPoly::mul_monomial(const Int& c, std::int32_t exp) {
    if (c == 0) {
        terms_.clear();
        return;
    }
    for (auto& t : terms_) {
        t.first += exp;
        if (c != 1) t.second *= c;
    }
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    // accumulate into a dense window to avoid repeated merges
    std::int32_t lo = a.min_degree() + b.min_degree();
    std::int32_t hi = a.max_degree() + b.max_degree();
    std::vector<Int> dense(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) dense[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0) r.terms_.emplace_back(lo + static_cast<std::int32_t>(i), std::move(dense[i]));
    return r;
}

LaurentPoly LaurentPoly::bar() const {
    LaurentPoly r;
    r.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.terms_.emplace_back(-it->first, it->second);
    return r;
}

bool LaurentPoly::is_bar_fixed() const { return *this == bar(); }

Int LaurentPoly::eval_at_one() const {
    Int s = 0;
    for (const auto& t : terms_) s += t.second;
    return s;
}

std::size_t LaurentPoly::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [e, c] : terms_) {
        h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(c.convert_to<long long>() & 0xffffffff) + (h << 6) + (h >> 2);
    }
    return h;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // exponents descending
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Int c = it->second;
        std::int32_t e = it->first;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
            first = false;
        } else {
            if (c < 0) {
                os << " - ";
                c = -c;
            } else {
                os << " + ";
            }
        }
        if (c != 1 || e == 0) os << c.str();
        if (e != 0) {
            if (c != 1) os << "*";
            os << "v";
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

struct Cursor {
    std::string_view s;
    std::size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return s[i];
    }
};

long long parse_int(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.i;
    if (c.i < c.s.size() && (c.s[c.i] == '+' || c.s[c.i] == '-')) ++c.i;
    std::size_t digits = 0;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
        ++c.i;
        ++digits;
    }
    if (digits == 0) throw parse_error("expected integer in polynomial at offset " + std::to_string(start));
    return std::stoll(std::string(c.s.substr(start, c.i - start)));
}

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text) {
    // grammar: term (('+'|'-') term)*;  term = [int ['*']] ['v' ['^' int]]
    LaurentPoly r;
    Cursor c{text};
    if (c.eof()) throw parse_error("empty polynomial");
    bool first = true;
    while (!c.eof()) {
        int sign = 1;
        c.skip_ws();
        if (c.s[c.i] == '+' || c.s[c.i] == '-') {
            sign = c.s[c.i] == '-' ? -1 : 1;
            ++c.i;
        } else if (!first) {
            throw parse_error("expected '+' or '-' at offset " + std::to_string(c.i));
        }
        first = false;
        c.skip_ws();
        Int coeff = 1;
        bool have_coeff = false;
        if (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
            coeff = parse_int(c);
            have_coeff = true;
            c.skip_ws();
            if (c.i < c.s.size() && c.s[c.i] == '*') ++c.i;
            c.skip_ws();
        }
        std::int32_t exp = 0;
        if (c.i < c.s.size() && c.s[c.i] == 'v') {
            ++c.i;
            exp = 1;
            c.skip_ws();
            if (c.i < c.s.size() && c.s[c.i] == '^') {
                ++c.i;
                exp = static_cast<std::int32_t>(parse_int(c));
            }
        } else if (!have_coeff) {
            throw parse_error("expected coefficient or 'v' at offset " + std::to_string(c.i));
        }
        r.add_term(exp, sign * coeff);
    }
    return r;
}

LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
LaurentPoly lp_sub(const LaurentPoly& a, const LaurentPoly& b) { return a - b; }
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }
LaurentPoly lp_neg(const LaurentPoly& a) { return -a; }
LaurentPoly lp_bar(const LaurentPoly& a) { return a.bar(); }

bool lp_try_div_exact(const LaurentPoly& num, const LaurentPoly& den, LaurentPoly& out) {
    if (den.is_zero()) return false;
    out = LaurentPoly::zero();
    if (num.is_zero()) return true;
    // classical descending long division; exactness keeps coefficients integral
    LaurentPoly rem = num;
    const std::int32_t dmax = den.max_degree();
    const Int& dlead = den.terms().back().second;
    while (!rem.is_zero()) {
        // any multiple of den spans at least as widely as den
        if (rem.max_degree() - rem.min_degree() < den.max_degree() - den.min_degree()) return false;
        std::int32_t shift = rem.max_degree() - dmax;
        Int q = rem.terms().back().second / dlead;
        if (q * dlead != rem.terms().back().second) return false;
        out.add_term(shift, q);
        rem.add_scaled(den, -q, shift);  // cancels the leading term, max degree strictly drops
    }
    return true;
}

LaurentPoly lp_div_exact(const LaurentPoly& num, const LaurentPoly& den) {
    LaurentPoly out;
    if (!lp_try_div_exact(num, den, out)) throw internal_error("inexact Laurent division");
    return out;
}

LaurentPoly q_int(long long n) {
    if (n == 0) return LaurentPoly::zero();
    bool neg = n < 0;
    if (neg) n = -n;
    LaurentPoly p;
    for (long long e = 1 - n; e <= n - 1; e += 2) p.add_term(static_cast<std::int32_t>(e), neg ? -1 : 1);
    return p;
}

LaurentPoly q_factorial(long long n) {
    if (n < 0) throw std::invalid_argument("q_factorial of negative argument");
    LaurentPoly p = LaurentPoly::one();
    for (long long i = 2; i <= n; ++i) p = p * q_int(i);
    return p;
}

namespace {
std::map<std::pair<long long, long long>, LaurentPoly> g_qbinom_memo;
std::mutex g_qbinom_mutex;
}  // namespace

LaurentPoly q_binomial(long long top, long long bottom) {
    if (bottom < 0) throw std::invalid_argument("q_binomial with negative bottom");
    if (bottom == 0) return LaurentPoly::one();
    if (top >= 0 && top < bottom) return LaurentPoly::zero();
    {
        std::lock_guard<std::mutex> lock(g_qbinom_mutex);
        auto it = g_qbinom_memo.find({top, bottom});
        if (it != g_qbinom_memo.end()) return it->second;
    }
    LaurentPoly num = LaurentPoly::one();
    for (long long i = 1; i <= bottom; ++i) num = num * q_int(top - bottom + i);
    LaurentPoly r = lp_div_exact(num, q_factorial(bottom));
    std::lock_guard<std::mutex> lock(g_qbinom_mutex);
    return g_qbinom_memo.emplace(std::make_pair(top, bottom), std::move(r)).first->second;
}

LaurentPoly q_binomial(const QBinomArgs& args) { return q_binomial(args.top, args.bottom); }

bool check_identity_i(long long m, long long k, long long delta) {
    if (k < 0 || m < k || delta < 0) throw std::invalid_argument("check_identity_i requires 0 <= k <= m, delta >= 0");
    LaurentPoly lhs;
    for (long long i = 0; i <= delta; ++i) {
        LaurentPoly t = q_binomial(k - 1 + i, i) * q_binomial(m, delta - i);
        t.mul_monomial(i % 2 == 0 ? 1 : -1, static_cast<std::int32_t>(i * (m - k)));
        lhs += t;
    }
    LaurentPoly rhs = q_binomial(m - k, delta);
    rhs.mul_monomial(1, static_cast<std::int32_t>(-k * delta));
    return lhs == rhs;
}

bool check_identity_ii(long long m, long long k, long long n, long long delta) {
    if (k < 0 || m < k || n < 0 || delta < 0)
        throw std::invalid_argument("check_identity_ii requires 0 <= k <= m, n >= 0, delta >= 0");
    LaurentPoly lhs;
    for (long long i = 0; i <= delta; ++i) {
        LaurentPoly t = q_binomial(k - 1 + i, i) * q_binomial(m + n, delta - i);
        t.mul_monomial(i % 2 == 0 ? 1 : -1, static_cast<std::int32_t>(i * (m - k - n)));
        lhs += t;
    }
    LaurentPoly rhs;
    for (long long t = 0; t <= std::min(delta, n); ++t) {
        LaurentPoly s = q_binomial(m - k, delta - t) * q_binomial(n, t);
        s.mul_monomial(1, static_cast<std::int32_t>(-k * (delta - t) - n * delta + t * (m + n)));
        rhs += s;
    }
    return lhs == rhs;
}

}  // namespace a4cb
