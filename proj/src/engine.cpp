#include "a4cb/engine.hpp"
#include "a4cb/elim.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace a4cb {

namespace {

constexpr int kDefaultHeightCap = 14;

int clamp_cap(long long cap) {
    if (cap < 1) throw std::invalid_argument("height cap must be positive");
    return static_cast<int>(std::min<long long>(cap, Word::kMaxLen));
}

std::atomic<int>& cap_cell() {
    static std::atomic<int> cap = [] {
        const char* env = std::getenv("A4CB_HEIGHT_CAP");
        if (env && *env) {
            char* end = nullptr;
            long long val = std::strtoll(env, &end, 10);
            if (end && *end == '\0' && val >= 1) return clamp_cap(val);
        }
        return kDefaultHeightCap;
    }();
    return cap;
}

}  // namespace

int height_cap() { return cap_cell().load(std::memory_order_relaxed); }

void set_height_cap(int cap) { cap_cell().store(clamp_cap(cap), std::memory_order_relaxed); }

std::string Weight::to_string() const {
    std::ostringstream os;
    os << '(' << nu[0] << ',' << nu[1] << ',' << nu[2] << ',' << nu[3] << ')';
    return os.str();
}

Word Word::from_letters(const std::vector<int>& letters) {
    Word w;
    for (int l : letters) w = w.append(l);
    return w;
}

Word Word::append(int letter) const {
    if (letter < 1 || letter > 4) throw std::invalid_argument("word letter out of range 1..4");
    if (size() >= kMaxLen) throw height_cap_error("word length exceeds packed capacity");
    std::uint64_t letters = bits_ & ((1ull << 48) - 1);
    std::uint64_t len = (bits_ >> 48) + 1;
    return Word((len << 48) | (letters << 2) | static_cast<std::uint64_t>(letter - 1));
}

Weight Word::weight() const {
    Weight w;
    for (int i = 0; i < size(); ++i) ++w[letter(i) - 1];
    return w;
}

std::string Word::to_string() const {
    if (size() == 0) return "()";
    std::string s;
    for (int i = 0; i < size(); ++i) s.push_back(static_cast<char>('0' + letter(i)));
    return s;
}

Weight RootInterval::weight() const {
    Weight w;
    for (int i = lo; i <= hi; ++i) ++w[i - 1];
    return w;
}

std::string RootInterval::to_string() const {
    std::ostringstream os;
    os << '[' << lo << ',' << hi << ']';
    return os.str();
}

std::string Convention::to_string() const {
    std::ostringstream os;
    os << "(twist=" << (twist_sign > 0 ? "+1" : "-1") << ", c=" << (comm_exp > 0 ? "+1" : "-1")
       << ", side=" << (comm_swap ? "swapped" : "direct") << ", grow=" << (grow_left ? "left" : "right") << ')';
    return os.str();
}

const Convention& Convention::pinned() {
    // fixed by the behavioural pinning procedure; see checker::pin_conventions
    static const Convention conv{+1, -1, false, false};
    return conv;
}

int cartan_pairing(int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4) throw std::invalid_argument("cartan_pairing index out of range 1..4");
    if (i == j) return 2;
    return (i - j == 1 || j - i == 1) ? -1 : 0;
}

WordSum WordSum::unit() { return single(Word::empty()); }

WordSum WordSum::single(Word w, LaurentPoly c) {
    WordSum s;
    if (!c.is_zero()) s.terms_.emplace(w.bits(), std::move(c));
    return s;
}

const LaurentPoly* WordSum::find(Word w) const {
    auto it = terms_.find(w.bits());
    return it == terms_.end() ? nullptr : &it->second;
}

void WordSum::add(Word w, const LaurentPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w.bits(), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void WordSum::add_scaled(const WordSum& rhs, const LaurentPoly& c) {
    if (c.is_zero()) return;
    for (const auto& [bits, poly] : rhs.terms_) {
        auto [it, inserted] = terms_.try_emplace(bits, LaurentPoly::zero());
        it->second.add_mul(poly, c);
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void WordSum::scale(const LaurentPoly& c) {
    if (c.is_zero()) {
        terms_.clear();
        return;
    }
    for (auto& [bits, poly] : terms_) poly = lp_mul(poly, c);
}

void WordSum::div_exact(const LaurentPoly& den) {
    for (auto& [bits, poly] : terms_) poly = lp_div_exact(poly, den);
}

Weight WordSum::weight() const {
    if (terms_.empty()) throw internal_error("weight of the zero word sum");
    return Word(terms_.begin()->first).weight();
}

bool WordSum::is_homogeneous() const {
    if (terms_.empty()) return true;
    Weight w = Word(terms_.begin()->first).weight();
    for (const auto& [bits, poly] : terms_) {
        if (!(Word(bits).weight() == w)) return false;
    }
    return true;
}

Word WordSum::leading_word() const {
    if (terms_.empty()) throw internal_error("leading word of the zero word sum");
    std::uint64_t best = terms_.begin()->first;
    for (const auto& [bits, poly] : terms_) best = std::max(best, bits);
    return Word(best);
}

bool WordSum::operator==(const WordSum& rhs) const {
    if (terms_.size() != rhs.terms_.size()) return false;
    for (const auto& [bits, poly] : terms_) {
        auto it = rhs.terms_.find(bits);
        if (it == rhs.terms_.end() || !(it->second == poly)) return false;
    }
    return true;
}

std::vector<std::pair<Word, LaurentPoly>> WordSum::sorted_terms() const {
    std::vector<std::pair<Word, LaurentPoly>> out;
    out.reserve(terms_.size());
    for (const auto& [bits, poly] : terms_) out.emplace_back(Word(bits), poly);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return b.first < a.first; });
    return out;
}

std::string WordSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : sorted_terms()) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.to_string() << ")*" << w.to_string();
    }
    return os.str();
}

namespace {

// depth-first merge of two fixed words; crossing exponent accumulates the
// symmetric-form pairing of each taken right letter with the left remainder
struct Merger {
    int m = 0, n = 0;
    int u[Word::kMaxLen] = {};
    int w[Word::kMaxLen] = {};
    int cnt[6] = {};  // remaining left letters by value
    const LaurentPoly* prod = nullptr;
    int sign = 1;
    WordSum::Map* out = nullptr;

    void run(Word x, Word y) {
        m = x.size();
        n = y.size();
        for (int i = 0; i < m; ++i) {
            u[i] = x.letter(i);
            ++cnt[u[i]];
        }
        for (int j = 0; j < n; ++j) w[j] = y.letter(j);
        rec(0, 0, 0, 0);
        for (int i = 0; i < m; ++i) --cnt[u[i]];
    }

    void rec(int i, int j, int cross, std::uint64_t letters) {
        if (i == m && j == n) {
            std::uint64_t bits = (static_cast<std::uint64_t>(m + n) << 48) | letters;
            (*out)[bits].add_scaled(*prod, 1, sign * cross);
            return;
        }
        if (i < m) {
            --cnt[u[i]];
            rec(i + 1, j, cross, (letters << 2) | static_cast<std::uint64_t>(u[i] - 1));
            ++cnt[u[i]];
        }
        if (j < n) {
            int l = w[j];
            int inc = 2 * cnt[l] - cnt[l - 1] - cnt[l + 1];
            rec(i, j + 1, cross + inc, (letters << 2) | static_cast<std::uint64_t>(l - 1));
        }
    }
};

}  // namespace

WordSum shuffle_mul(const WordSum& x, const WordSum& y, const Convention& conv) {
    WordSum out;
    if (x.is_zero() || y.is_zero()) return out;
    const int h = x.weight().height() + y.weight().height();
    if (h > height_cap()) {
        std::ostringstream os;
        os << "shuffle product of height " << h << " exceeds the height cap " << height_cap();
        throw height_cap_error(os.str());
    }
    Merger mg;
    mg.sign = conv.twist_sign;
    mg.out = &out.terms_;
    for (const auto& [bx, cx] : x.terms_) {
        for (const auto& [by, cy] : y.terms_) {
            LaurentPoly prod = lp_mul(cx, cy);
            mg.prod = &prod;
            mg.run(Word(bx), Word(by));
        }
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
        if (it->second.is_zero()) {
            it = out.terms_.erase(it);
        } else {
            ++it;
        }
    }
    return out;
}

namespace {

std::mutex g_cache_mutex;

using RootKey = std::tuple<int, int, int>;        // convention id, lo, hi
using PowerKey = std::tuple<int, int, int, int>;  // convention id, lo, hi, exponent

std::map<RootKey, std::shared_ptr<const WordSum>>& root_vec_cache() {
    static std::map<RootKey, std::shared_ptr<const WordSum>> c;
    return c;
}

std::map<PowerKey, std::shared_ptr<const WordSum>>& root_pow_cache() {
    static std::map<PowerKey, std::shared_ptr<const WordSum>> c;
    return c;
}

void check_interval(RootInterval beta) {
    if (beta.lo < 1 || beta.hi > 4 || beta.lo > beta.hi) {
        throw std::invalid_argument("root interval out of range: " + beta.to_string());
    }
}

std::shared_ptr<const WordSum> root_vector_ptr(RootInterval beta, const Convention& conv) {
    check_interval(beta);
    RootKey key{conv.id(), beta.lo, beta.hi};
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = root_vec_cache().find(key);
        if (it != root_vec_cache().end()) return it->second;
    }
    WordSum val;
    if (beta.lo == beta.hi) {
        val = WordSum::single(Word::single(beta.lo));
    } else {
        std::shared_ptr<const WordSum> head, tail;
        if (conv.grow_left) {
            head = root_vector_ptr({beta.lo, beta.lo}, conv);
            tail = root_vector_ptr({beta.lo + 1, beta.hi}, conv);
        } else {
            head = root_vector_ptr({beta.lo, beta.hi - 1}, conv);
            tail = root_vector_ptr({beta.hi, beta.hi}, conv);
        }
        const WordSum& a = conv.comm_swap ? *tail : *head;
        const WordSum& b = conv.comm_swap ? *head : *tail;
        val = shuffle_mul(a, b, conv);
        val.add_scaled(shuffle_mul(b, a, conv), LaurentPoly::monomial(-1, conv.comm_exp));
    }
    auto ptr = std::make_shared<const WordSum>(std::move(val));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return root_vec_cache().emplace(key, ptr).first->second;
}

std::shared_ptr<const WordSum> root_power_ptr(RootInterval beta, int n, const Convention& conv) {
    check_interval(beta);
    if (n < 0) throw std::invalid_argument("negative divided-power exponent");
    if (n == 0) return std::make_shared<const WordSum>(WordSum::unit());
    const int h = n * beta.height();
    if (h > height_cap()) {
        std::ostringstream os;
        os << "divided power " << beta.to_string() << "^(" << n << ") of height " << h
           << " exceeds the height cap " << height_cap();
        throw height_cap_error(os.str());
    }
    PowerKey key{conv.id(), beta.lo, beta.hi, n};
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = root_pow_cache().find(key);
        if (it != root_pow_cache().end()) return it->second;
    }
    std::shared_ptr<const WordSum> val;
    if (n == 1) {
        val = root_vector_ptr(beta, conv);
    } else {
        std::shared_ptr<const WordSum> prev = root_power_ptr(beta, n - 1, conv);
        WordSum cur = shuffle_mul(*prev, *root_vector_ptr(beta, conv), conv);
        cur.div_exact(q_int(n));
        val = std::make_shared<const WordSum>(std::move(cur));
    }
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return root_pow_cache().emplace(key, val).first->second;
}

}  // namespace

WordSum root_vector(RootInterval beta, const Convention& conv) { return *root_vector_ptr(beta, conv); }

WordSum root_power(RootInterval beta, int n, const Convention& conv) { return *root_power_ptr(beta, n, conv); }

WordSum generator_power(int i, int n, const Convention& conv) {
    if (i < 1 || i > 4) throw std::invalid_argument("generator index out of range 1..4");
    return *root_power_ptr({i, i}, n, conv);
}

Weight DividedWord::weight() const {
    Weight w;
    for (const auto& [gen, exp] : factors) {
        if (gen < 1 || gen > 4) throw std::invalid_argument("generator index out of range 1..4");
        if (exp < 0) throw std::invalid_argument("negative divided-power exponent");
        w[gen - 1] += exp;
    }
    return w;
}

std::string DividedWord::to_string() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [gen, exp] : factors) {
        if (!first) os << ' ';
        first = false;
        os << 'e' << gen;
        if (exp != 1) os << "^(" << exp << ')';
    }
    return os.str();
}

DividedWord DividedWord::parse(std::string_view text) {
    DividedWord dw;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == '*')) ++pos;
    };
    skip();
    while (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') {
            throw parse_error("divided word: expected 'e' at position " + std::to_string(pos));
        }
        ++pos;
        if (pos >= text.size() || text[pos] < '1' || text[pos] > '4') {
            throw parse_error("divided word: generator index must be 1..4");
        }
        int gen = text[pos] - '0';
        ++pos;
        long long exp = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            bool paren = pos < text.size() && text[pos] == '(';
            if (paren) ++pos;
            bool neg = false;
            if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
                neg = text[pos] == '-';
                ++pos;
            }
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                throw parse_error("divided word: malformed exponent");
            }
            exp = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                exp = exp * 10 + (text[pos] - '0');
                if (exp > 1000000) throw parse_error("divided word: exponent too large");
                ++pos;
            }
            if (neg) exp = -exp;
            if (paren) {
                if (pos >= text.size() || text[pos] != ')') throw parse_error("divided word: missing ')'");
                ++pos;
            }
        }
        if (exp < 0) throw parse_error("divided word: negative exponent");
        dw.factors.emplace_back(gen, static_cast<int>(exp));
        skip();
    }
    return dw;
}

WordSum eval_divided_word(const DividedWord& dw, const Convention& conv) {
    const int h = dw.weight().height();
    if (h > height_cap()) {
        std::ostringstream os;
        os << "divided word of height " << h << " exceeds the height cap " << height_cap();
        throw height_cap_error(os.str());
    }
    WordSum acc = WordSum::unit();
    for (const auto& [gen, exp] : dw.factors) {
        if (exp == 0) continue;
        acc = shuffle_mul(acc, *root_power_ptr({gen, gen}, exp, conv), conv);
        if (acc.is_zero()) return acc;
    }
    return acc;
}

RootInterval slot_interval(int slot) {
    static constexpr std::array<RootInterval, kPBWSlots> kSlots{
        RootInterval{4, 4}, RootInterval{3, 4}, RootInterval{2, 4}, RootInterval{1, 4}, RootInterval{3, 3},
        RootInterval{2, 3}, RootInterval{1, 3}, RootInterval{2, 2}, RootInterval{1, 2}, RootInterval{1, 1}};
    if (slot < 0 || slot >= kPBWSlots) throw std::invalid_argument("PBW slot out of range 0..9");
    return kSlots[static_cast<std::size_t>(slot)];
}

int slot_height(int slot) { return slot_interval(slot).height(); }

int PBWIndex::height() const {
    int h = 0;
    for (int s = 0; s < kPBWSlots; ++s) h += a[static_cast<std::size_t>(s)] * slot_height(s);
    return h;
}

bool PBWIndex::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

std::string PBWIndex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int s = 0; s < kPBWSlots; ++s) {
        if (s) os << ',';
        os << a[static_cast<std::size_t>(s)];
    }
    os << ')';
    return os.str();
}

PBWIndex PBWIndex::parse(std::string_view text) {
    std::string buf;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) buf.push_back(ch);
    }
    if (!buf.empty() && buf.front() == '(' && buf.back() == ')') buf = buf.substr(1, buf.size() - 2);
    PBWIndex idx;
    std::size_t pos = 0;
    for (int s = 0; s < kPBWSlots; ++s) {
        if (s) {
            if (pos >= buf.size() || buf[pos] != ',') throw parse_error("PBW index: expected 10 comma-separated entries");
            ++pos;
        }
        if (pos >= buf.size() || !std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            throw parse_error("PBW index: entries must be nonnegative integers");
        }
        long long val = 0;
        while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            val = val * 10 + (buf[pos] - '0');
            if (val > 1000000) throw parse_error("PBW index: entry too large");
            ++pos;
        }
        idx[s] = static_cast<int>(val);
    }
    if (pos != buf.size()) throw parse_error("PBW index: trailing characters");
    return idx;
}

Weight weight_of(const PBWIndex& idx) {
    Weight w;
    for (int s = 0; s < kPBWSlots; ++s) {
        if (idx[s] < 0) throw std::invalid_argument("PBW index entries must be nonnegative");
        RootInterval beta = slot_interval(s);
        for (int i = beta.lo; i <= beta.hi; ++i) w[i - 1] += idx[s];
    }
    return w;
}

WordSum pbw_monomial(const PBWIndex& idx, const Convention& conv) {
    const int h = weight_of(idx).height();
    if (h > height_cap()) {
        std::ostringstream os;
        os << "PBW monomial of height " << h << " exceeds the height cap " << height_cap();
        throw height_cap_error(os.str());
    }
    WordSum acc = WordSum::unit();
    for (int s = 0; s < kPBWSlots; ++s) {
        if (idx[s] == 0) continue;
        acc = shuffle_mul(acc, *root_power_ptr(slot_interval(s), idx[s], conv), conv);
    }
    return acc;
}

std::vector<PBWIndex> enumerate_pbw(const Weight& nu) {
    for (int i = 0; i < 4; ++i) {
        if (nu[i] < 0) throw std::invalid_argument("weight coordinates must be nonnegative");
    }
    std::vector<PBWIndex> out;
    PBWIndex idx;
    Weight rem = nu;
    // cover[s][l]: some slot >= s uses letter l+1
    bool cover[kPBWSlots + 1][4] = {};
    for (int s = kPBWSlots - 1; s >= 0; --s) {
        RootInterval beta = slot_interval(s);
        for (int l = 0; l < 4; ++l) cover[s][l] = cover[s + 1][l] || (beta.lo <= l + 1 && l + 1 <= beta.hi);
    }
    auto coverable = [&](int s) {
        for (int l = 0; l < 4; ++l) {
            if (rem[l] > 0 && !cover[s][l]) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int s) -> void {
        if (s == kPBWSlots) {
            if (rem == Weight{}) out.push_back(idx);
            return;
        }
        if (!coverable(s)) return;
        RootInterval beta = slot_interval(s);
        int max_exp = rem[beta.lo - 1];
        for (int i = beta.lo; i <= beta.hi; ++i) max_exp = std::min(max_exp, rem[i - 1]);
        for (int e = 0; e <= max_exp; ++e) {
            idx[s] = e;
            if (e > 0) {
                for (int i = beta.lo; i <= beta.hi; ++i) --rem[i - 1];
            }
            self(self, s + 1);
        }
        for (int i = beta.lo; i <= beta.hi; ++i) rem[i - 1] += max_exp;
        idx[s] = 0;
    };
    rec(rec, 0);
    return out;
}

const LaurentPoly* PBWVector::find(const PBWIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? nullptr : &it->second;
}

void PBWVector::add(const PBWIndex& idx, LaurentPoly c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(idx, std::move(c));
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::string PBWVector::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.to_string() << ")*E" << idx.to_string();
    }
    return os.str();
}

namespace {

// shared-prefix product walk over all PBW indices of a weight, in the
// lexicographic order of enumerate_pbw.  needed(idx, depth) may prune a
// fixed prefix idx[0..depth-1]; visit(idx, image) fires at complete indices.
template <class Needed, class Visit>
void walk_pbw_images(const Weight& nu, const Convention& conv, Needed&& needed, Visit&& visit) {
    bool cover[kPBWSlots + 1][4] = {};
    for (int s = kPBWSlots - 1; s >= 0; --s) {
        RootInterval beta = slot_interval(s);
        for (int l = 0; l < 4; ++l) cover[s][l] = cover[s + 1][l] || (beta.lo <= l + 1 && l + 1 <= beta.hi);
    }
    PBWIndex idx;
    Weight rem = nu;
    auto coverable = [&](int s) {
        for (int l = 0; l < 4; ++l) {
            if (rem[l] > 0 && !cover[s][l]) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int s, const WordSum& prefix) -> void {
        if (s == kPBWSlots) {
            if (rem == Weight{}) visit(static_cast<const PBWIndex&>(idx), prefix);
            return;
        }
        if (!coverable(s)) return;
        RootInterval beta = slot_interval(s);
        int max_exp = rem[beta.lo - 1];
        for (int i = beta.lo; i <= beta.hi; ++i) max_exp = std::min(max_exp, rem[i - 1]);
        // cur tracks prefix * beta^(cur_exp), advanced lazily on demand
        WordSum cur;
        int cur_exp = 0;
        for (int e = 0; e <= max_exp; ++e) {
            idx[s] = e;
            if (e > 0) {
                for (int i = beta.lo; i <= beta.hi; ++i) --rem[i - 1];
            }
            if (needed(static_cast<const PBWIndex&>(idx), s + 1)) {
                if (e == 0) {
                    self(self, s + 1, prefix);
                } else {
                    if (cur_exp == 0) cur = prefix;
                    while (cur_exp < e) {
                        cur = shuffle_mul(cur, root_vector(beta, conv), conv);
                        ++cur_exp;
                        cur.div_exact(q_int(cur_exp));
                    }
                    self(self, s + 1, cur);
                }
            }
        }
        for (int i = beta.lo; i <= beta.hi; ++i) rem[i - 1] += max_exp;
        idx[s] = 0;
    };
    rec(rec, 0, WordSum::unit());
}

constexpr std::size_t kCacheBudget = 2000000;  // cached image support entries
// fraction-free elimination suffers severe intermediate growth on large
// systems; the fallback exists for small weights and degenerate orderings
constexpr std::size_t kMatrixBudget = 200000;  // dense fallback cells

PBWVector express_fallback(const WordSum& x, const std::vector<PBWIndex>& basis, const Weight& nu,
                           const Convention& conv) {
    std::vector<std::vector<std::pair<std::uint64_t, LaurentPoly>>> cols(basis.size());
    std::size_t total = 0;
    std::size_t k = 0;
    walk_pbw_images(
        nu, conv, [](const PBWIndex&, int) { return true; },
        [&](const PBWIndex&, const WordSum& img) {
            auto& col = cols[k++];
            col.reserve(img.support_size());
            for (const auto& [bits, poly] : img.terms()) col.emplace_back(bits, poly);
            total += img.support_size();
            if (total > 4 * kMatrixBudget) throw resource_error("PBW expansion fallback exceeds the sparse budget");
        });
    if (k != basis.size()) throw internal_error("PBW image walk out of sync");

    std::set<std::uint64_t> word_set;
    for (const auto& [bits, poly] : x.terms()) word_set.insert(bits);
    for (const auto& col : cols) {
        for (const auto& [bits, poly] : col) word_set.insert(bits);
    }
    const std::size_t rows = word_set.size();
    if (rows * basis.size() > kMatrixBudget) throw resource_error("PBW expansion fallback exceeds the matrix budget");

    // rows in descending word order for a near-triangular profile
    std::vector<std::uint64_t> words(word_set.rbegin(), word_set.rend());
    std::map<std::uint64_t, std::size_t> row_of;
    for (std::size_t r = 0; r < rows; ++r) row_of.emplace(words[r], r);

    LaurentMatrix m(rows, std::vector<LaurentPoly>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
        for (const auto& [bits, poly] : cols[c]) m[row_of[bits]][c] = poly;
    }
    std::vector<LaurentPoly> b(rows);
    for (const auto& [bits, poly] : x.terms()) b[row_of[bits]] = poly;

    auto sol = ff_solve(std::move(m), std::move(b));
    if (!sol) throw internal_error("input is not in the PBW span of its weight space");
    PBWVector out;
    for (std::size_t c = 0; c < basis.size(); ++c) {
        if (!(*sol)[c].is_zero()) out.add(basis[c], std::move((*sol)[c]));
    }
    return out;
}

std::atomic<std::uint64_t> g_predicted_expansions{0};
std::atomic<std::uint64_t> g_walked_expansions{0};

// Predicted-lead elimination: folds the slot-power leading terms through
// single-word shuffles to guess each monomial's leading term, then reduces
// the residual top-down, building full images only for the indices hit.
// Any misprediction (duplicate or missing lead, inexact division, lead not
// strictly decreasing) aborts; only a zero residual returns true, so a
// false prediction can never produce a wrong expansion.
bool express_predicted(const WordSum& x, const std::vector<PBWIndex>& basis, const Convention& conv,
                       PBWVector& out) {
    struct Lead {
        std::uint64_t bits = 0;
        LaurentPoly lc;
        std::size_t at = 0;
    };
    std::vector<Lead> leads(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Word w;
        LaurentPoly c = LaurentPoly::one();
        for (int s = 0; s < kPBWSlots; ++s) {
            if (basis[i][s] == 0) continue;
            const auto f = root_power_ptr(slot_interval(s), basis[i][s], conv);
            const Word fw = f->leading_word();
            const LaurentPoly& fc = *f->find(fw);
            if (w.size() == 0) {
                w = fw;
                c = fc;
                continue;
            }
            WordSum prod = shuffle_mul(WordSum::single(w, c), WordSum::single(fw, fc), conv);
            if (prod.is_zero()) return false;
            w = prod.leading_word();
            c = *prod.find(w);
        }
        leads[i] = {w.bits(), c, i};
    }
    std::sort(leads.begin(), leads.end(), [](const Lead& a, const Lead& b) { return a.bits > b.bits; });
    for (std::size_t i = 1; i < leads.size(); ++i) {
        if (leads[i - 1].bits == leads[i].bits) return false;
    }
    WordSum r = x;
    while (!r.is_zero()) {
        const Word lead = r.leading_word();
        const auto it = std::lower_bound(leads.begin(), leads.end(), lead.bits(),
                                         [](const Lead& l, std::uint64_t b) { return l.bits > b; });
        bool ok = it != leads.end() && it->bits == lead.bits();
        LaurentPoly q;
        ok = ok && lp_try_div_exact(*r.find(lead), it->lc, q);
        if (ok) {
            r.add_scaled(pbw_monomial(basis[it->at], conv), lp_neg(q));
            ok = r.is_zero() || r.leading_word() < lead;
            out.add(basis[it->at], std::move(q));
        }
        if (!ok) {
            out = PBWVector{};
            return false;
        }
    }
    return true;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> expansion_path_counts() {
    return {g_predicted_expansions.load(), g_walked_expansions.load()};
}

PBWVector express_in_pbw(const WordSum& x, const Convention& conv) {
    PBWVector out;
    if (x.is_zero()) return out;
    if (!x.is_homogeneous()) throw std::invalid_argument("express_in_pbw: input is not weight-homogeneous");
    const Weight nu = x.weight();
    if (nu.height() > height_cap()) {
        std::ostringstream os;
        os << "expansion at height " << nu.height() << " exceeds the height cap " << height_cap();
        throw height_cap_error(os.str());
    }
    const std::vector<PBWIndex> basis = enumerate_pbw(nu);
    if (express_predicted(x, basis, conv, out)) {
        g_predicted_expansions.fetch_add(1);
        return out;
    }
    g_walked_expansions.fetch_add(1);
    const Word x_lead = x.leading_word();

    struct Info {
        Word lw;
        LaurentPoly lc;
        std::shared_ptr<const WordSum> img;
    };
    std::vector<Info> info(basis.size());
    bool triangular = true;
    {
        std::size_t cached = 0;
        std::size_t k = 0;
        std::set<std::uint64_t> seen;
        walk_pbw_images(
            nu, conv, [](const PBWIndex&, int) { return true; },
            [&](const PBWIndex&, const WordSum& img) {
                Info& f = info[k++];
                f.lw = img.leading_word();
                f.lc = *img.find(f.lw);
                if (!seen.insert(f.lw.bits()).second) triangular = false;
                // images leading above x never receive a coefficient
                if (!(x_lead < f.lw) && cached + img.support_size() <= kCacheBudget) {
                    f.img = std::make_shared<const WordSum>(img);
                    cached += img.support_size();
                }
            });
        if (k != basis.size()) throw internal_error("PBW image walk out of sync");
    }

    if (triangular) {
        std::vector<std::size_t> order(basis.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return info[b].lw < info[a].lw; });
        WordSum r = x;
        bool ok = true;
        for (std::size_t pos = 0; pos < order.size() && !r.is_zero(); ++pos) {
            const std::size_t at = order[pos];
            const LaurentPoly* c = r.find(info[at].lw);
            if (c == nullptr) continue;
            LaurentPoly q;
            if (!lp_try_div_exact(*c, info[at].lc, q)) {
                ok = false;
                break;
            }
            WordSum local;
            const WordSum* img = info[at].img.get();
            if (img == nullptr) {
                local = pbw_monomial(basis[at], conv);
                img = &local;
            }
            r.add_scaled(*img, lp_neg(q));
            out.add(basis[at], std::move(q));
        }
        // a zero residual certifies the expansion exactly
        if (ok && r.is_zero()) return out;
        out = PBWVector{};
    }
    return express_fallback(x, basis, nu, conv);
}

CongruenceReport lattice_verdict(const PBWVector& pv, const PBWIndex& target) {
    CongruenceReport rep;
    rep.in_lattice = true;
    rep.congruent_to_target = true;
    bool saw_target = false;
    for (const auto& [idx, c] : pv.terms()) {
        if (c.max_degree() > 0) rep.in_lattice = false;
        LaurentPoly probe = c;
        if (idx == target) {
            saw_target = true;
            probe -= LaurentPoly::one();
        }
        if (!probe.is_zero() && probe.max_degree() >= 0) {
            rep.congruent_to_target = false;
            rep.offenders.emplace_back(idx, probe);
        }
    }
    if (!saw_target) {
        rep.congruent_to_target = false;
        rep.offenders.emplace_back(target, lp_neg(LaurentPoly::one()));
    }
    return rep;
}

}  // namespace a4cb
