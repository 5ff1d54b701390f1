#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace a4cb {

using Int = boost::multiprecision::cpp_int;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Laurent polynomial in one variable v with arbitrary-precision integer
// coefficients.  Invariant: terms_ sorted by ascending exponent, no zero
// coefficients, so equality is structural.
class LaurentPoly {
  public:
    using Term = std::pair<std::int32_t, Int>;

    LaurentPoly() = default;

    static LaurentPoly zero() { return {}; }
    static LaurentPoly one() { return monomial(1, 0); }
    static LaurentPoly monomial(Int coeff, std::int32_t exp);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_monomial() const { return terms_.size() == 1; }

    // min/max exponent with nonzero coefficient; requires nonzero poly.
    std::int32_t min_degree() const;
    std::int32_t max_degree() const;

    const Int& coeff(std::int32_t exp) const;
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(std::int32_t exp, const Int& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

    // this += c * p, with c a plain coefficient and shift an exponent offset.
    void add_scaled(const LaurentPoly& p, const Int& c, std::int32_t shift = 0);
    // this += c * p for polynomial c.
    void add_mul(const LaurentPoly& p, const LaurentPoly& c);

    void mul_monomial(const Int& c, std::int32_t exp);

    // v -> v^{-1}
    LaurentPoly bar() const;
    bool is_bar_fixed() const;

    Int eval_at_one() const;

    bool operator==(const LaurentPoly& rhs) const { return terms_ == rhs.terms_; }
    bool operator!=(const LaurentPoly& rhs) const { return !(*this == rhs); }
    // deterministic total order (by term list), used for stable output only
    bool operator<(const LaurentPoly& rhs) const { return terms_ < rhs.terms_; }

    std::string to_string() const;
    static LaurentPoly parse(std::string_view text);

    std::size_t hash() const;

  private:
    std::vector<Term> terms_;
};

LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_neg(const LaurentPoly& a);
LaurentPoly lp_bar(const LaurentPoly& a);

// Exact division; throws internal_error when den is zero or does not divide.
LaurentPoly lp_div_exact(const LaurentPoly& num, const LaurentPoly& den);
bool lp_try_div_exact(const LaurentPoly& num, const LaurentPoly& den, LaurentPoly& out);

// Balanced q-integer [n] = v^{n-1} + v^{n-3} + ... + v^{1-n}; [0] = 0; [-n] = -[n].
LaurentPoly q_int(long long n);
// [n]! = [1][2]...[n]; requires n >= 0.
LaurentPoly q_factorial(long long n);

struct QBinomArgs {
    long long top = 0;
    long long bottom = 0;
    bool operator==(const QBinomArgs&) const = default;
};

// Gaussian binomial [top; bottom] for arbitrary integer top and bottom >= 0,
// defined by prod_{i=1..k} [top-k+i] / [k]! with exact division.  Zero when
// 0 <= top < bottom; signed via [top; k] = (-1)^k [k-1-top; k] for top < 0.
LaurentPoly q_binomial(long long top, long long bottom);
LaurentPoly q_binomial(const QBinomArgs& args);

// sum_{0<=i<=delta} (-1)^i [k-1+i; i][m; delta-i] v^{i(m-k)}
//   == [m-k; delta] v^{-k delta};  requires 0 <= k <= m, delta >= 0.
bool check_identity_i(long long m, long long k, long long delta);

// sum_{0<=i<=delta} (-1)^i [k-1+i; i][m+n; delta-i] v^{i(m-k-n)}
//   == sum_{0<=t<=min(delta,n)} [m-k; delta-t][n; t] v^{-k(delta-t)-n delta+t(m+n)};
// requires 0 <= k <= m, n >= 0, delta >= 0.
bool check_identity_ii(long long m, long long k, long long n, long long delta);

}  // namespace a4cb
