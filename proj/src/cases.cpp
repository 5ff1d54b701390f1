#include <a4cb/cases.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace a4cb {

namespace {

// shared scanner for linform / expexpr: signed sum of optionally multiplied
// symbols a1..a10 (and u, w when allowed) plus integer constants
struct Affine {
    std::array<int, 10> a{};
    int u = 0, w = 0, c = 0;
};

[[noreturn]] void bad_form(std::string_view text, std::string_view why) {
    throw table_error("bad linear form '" + std::string(text) + "': " + std::string(why));
}

Affine parse_affine(std::string_view text, bool allow_vars) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) bad_form(text, "empty");
    Affine out;
    std::size_t i = 0;
    bool first = true;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            bad_form(text, "missing +/- between terms");
        }
        first = false;
        if (i >= s.size()) bad_form(text, "dangling sign");
        long long mult = 1;
        bool saw_number = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            mult = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                mult = mult * 10 + (s[i] - '0');
                if (mult > 1000000) bad_form(text, "coefficient too large");
                ++i;
            }
            saw_number = true;
            if (i < s.size() && s[i] == '*') {
                ++i;
                saw_number = false;  // multiplier form k*sym
                if (i >= s.size()) bad_form(text, "dangling '*'");
            }
        }
        if (saw_number) {
            out.c += sign * static_cast<int>(mult);
            continue;
        }
        if (s[i] == 'a') {
            ++i;
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                bad_form(text, "expected slot number after 'a'");
            int slot = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                slot = slot * 10 + (s[i] - '0');
                if (slot > 10) bad_form(text, "slot out of range");
                ++i;
            }
            if (slot < 1 || slot > 10) bad_form(text, "slot out of range");
            out.a[std::size_t(slot - 1)] += sign * static_cast<int>(mult);
            continue;
        }
        if (s[i] == 'u' || s[i] == 'w') {
            if (!allow_vars) bad_form(text, "summation variable not allowed here");
            (s[i] == 'u' ? out.u : out.w) += sign * static_cast<int>(mult);
            ++i;
            continue;
        }
        bad_form(text, std::string("unexpected character '") + s[i] + "'");
    }
    return out;
}

void append_term(std::string& s, int coeff, const std::string& sym) {
    if (coeff == 0) return;
    if (coeff > 0 && !s.empty()) s.push_back('+');
    if (coeff == -1)
        s.push_back('-');
    else if (coeff != 1) {
        s += std::to_string(coeff);
        s.push_back('*');
    }
    s += sym;
}

std::string affine_string(const std::array<int, 10>& a, int cu, int cw, int c) {
    std::string s;
    for (int j = 0; j < 10; ++j) append_term(s, a[std::size_t(j)], "a" + std::to_string(j + 1));
    append_term(s, cu, "u");
    append_term(s, cw, "w");
    if (c != 0) {
        if (c > 0 && !s.empty()) s.push_back('+');
        s += std::to_string(c);
    }
    return s.empty() ? "0" : s;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

long long LinForm::eval(const PBWIndex& a) const {
    long long v = constant;
    for (int j = 0; j < 10; ++j) v += static_cast<long long>(coeff[std::size_t(j)]) * a[j];
    return v;
}

bool LinForm::is_zero() const {
    if (constant != 0) return false;
    return std::all_of(coeff.begin(), coeff.end(), [](int c) { return c == 0; });
}

std::string LinForm::to_string() const { return affine_string(coeff, 0, 0, constant); }

LinForm LinForm::parse(std::string_view text) {
    Affine af = parse_affine(text, false);
    return LinForm{af.a, af.c};
}

long long ExponentExpr::eval(const PBWIndex& a, long long u, long long w) const {
    return base.eval(a) + var_coeff[0] * u + var_coeff[1] * w;
}

std::string ExponentExpr::to_string() const {
    return affine_string(base.coeff, var_coeff[0], var_coeff[1], base.constant);
}

ExponentExpr ExponentExpr::parse(std::string_view text) {
    Affine af = parse_affine(text, true);
    return ExponentExpr{LinForm{af.a, af.c}, {af.u, af.w}};
}

std::string Inequality::to_string() const { return lhs.to_string() + " >= " + rhs.to_string(); }

bool Region::contains(const PBWIndex& a) const {
    return std::all_of(ineqs.begin(), ineqs.end(),
                       [&](const Inequality& q) { return q.holds(a); });
}

int Region::strict_count(const PBWIndex& a) const {
    int n = 0;
    for (const Inequality& q : ineqs) n += q.strict(a) ? 1 : 0;
    return n;
}

std::string Region::to_string() const {
    std::string s;
    for (const Inequality& q : ineqs) {
        if (!s.empty()) s += " ; ";
        s += q.to_string();
    }
    return s;
}

long long SumVar::upper(const PBWIndex& a) const {
    long long m = bounds.front().eval(a);
    for (std::size_t i = 1; i < bounds.size(); ++i) m = std::min(m, bounds[i].eval(a));
    return m;
}

std::string CaseSpec::to_string() const {
    std::string s = "case " + id + "\n";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        s += "var " + vars[i].name + " <= ";
        for (std::size_t b = 0; b < vars[i].bounds.size(); ++b) {
            if (b) s += ", ";
            s += vars[i].bounds[b].to_string();
        }
        s += "\ncoeff " + factors[i].var + " top= " + factors[i].top.to_string() + "\n";
    }
    for (const PatternFactor& pf : pattern)
        s += "term e" + std::to_string(pf.letter) + "^(" + pf.exp.to_string() + ")\n";
    s += "region " + region.to_string() + "\nend\n";
    return s;
}

const CaseSpec* CaseTable::find(std::string_view id) const {
    for (const CaseSpec& c : cases)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

[[noreturn]] void line_error(int line, const std::string& msg) {
    throw table_error("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

PatternFactor parse_pattern_factor(const std::string& tok, int line) {
    if (tok.size() < 5 || tok[0] != 'e' || tok[2] != '^' || tok[3] != '(' || tok.back() != ')')
        line_error(line, "malformed factor '" + tok + "' (expected e<i>^(<expexpr>))");
    int letter = tok[1] - '0';
    if (letter < 1 || letter > 4) line_error(line, "generator index out of range in '" + tok + "'");
    std::string inner = tok.substr(4, tok.size() - 5);
    if (inner.find('(') != std::string::npos || inner.find(')') != std::string::npos)
        line_error(line, "nested parentheses in '" + tok + "'");
    return PatternFactor{letter, ExponentExpr::parse(inner)};
}

}  // namespace

CaseTable load_cases(std::string_view text, std::string source_name) {
    CaseTable table;
    table.source_name = std::move(source_name);
    table.checksum = fnv1a(text);

    enum class Stage { none, header, terms, regions };
    Stage stage = Stage::none;
    CaseSpec cur;
    std::set<std::string, std::less<>> seen;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string body = raw.substr(0, raw.find('#'));
        std::vector<std::string> toks = split_ws(body);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        {
            if (kw == "case") {
                if (stage != Stage::none) line_error(line, "nested 'case' (missing 'end')");
                if (toks.size() != 2) line_error(line, "'case' wants exactly one id");
                cur = CaseSpec{};
                cur.id = toks[1];
                cur.line = line;
                if (!seen.insert(cur.id).second)
                    throw table_error("duplicate case id \"" + cur.id + "\" at line " + std::to_string(line));
                stage = Stage::header;
            } else if (kw == "var") {
                if (stage != Stage::header) line_error(line, "'var' outside case header");
                if (toks.size() < 4 || toks[2] != "<=") line_error(line, "'var' wants: var <name> <= <linform>[, ...]");
                std::string name = toks[1];
                if (cur.vars.size() >= 2) line_error(line, "more than two summation variables");
                std::string expect = cur.vars.empty() ? "u" : "w";
                if (name != expect)
                    line_error(line, "summation variable " + std::to_string(cur.vars.size() + 1) +
                                         " must be named '" + expect + "'");
                if (cur.vars.size() != cur.factors.size())
                    line_error(line, "previous 'var' still lacks its 'coeff' line");
                std::string joined;
                for (std::size_t i = 3; i < toks.size(); ++i) joined += toks[i];
                SumVar sv{name, {}};
                std::size_t pos = 0;
                while (true) {
                    std::size_t comma = joined.find(',', pos);
                    sv.bounds.push_back(LinForm::parse(joined.substr(pos, comma - pos)));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
                cur.vars.push_back(std::move(sv));
            } else if (kw == "coeff") {
                if (stage != Stage::header) line_error(line, "'coeff' outside case header");
                if (toks.size() < 3 || toks[2].rfind("top=", 0) != 0)
                    line_error(line, "'coeff' wants: coeff <name> top= <linform>");
                std::string name = toks[1];
                if (cur.factors.size() >= cur.vars.size() || cur.vars[cur.factors.size()].name != name)
                    line_error(line, "'coeff " + name + "' does not follow its 'var' line");
                std::string joined = toks[2].substr(4);
                for (std::size_t i = 3; i < toks.size(); ++i) joined += toks[i];
                cur.factors.push_back(CoeffFactor{name, LinForm::parse(joined)});
            } else if (kw == "term") {
                if (stage != Stage::header && stage != Stage::terms)
                    line_error(line, "'term' after 'region'");
                if (stage == Stage::header && cur.factors.size() != cur.vars.size())
                    line_error(line, "last 'var' lacks its 'coeff' line");
                if (toks.size() < 2) line_error(line, "'term' wants at least one factor");
                for (std::size_t i = 1; i < toks.size(); ++i)
                    cur.pattern.push_back(parse_pattern_factor(toks[i], line));
                stage = Stage::terms;
            } else if (kw == "region") {
                if (stage != Stage::terms && stage != Stage::regions)
                    line_error(line, "'region' before any 'term'");
                std::string rest;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    if (i > 1) rest += ' ';
                    rest += toks[i];
                }
                if (rest.empty()) line_error(line, "'region' wants inequalities");
                std::size_t pos = 0;
                while (true) {
                    std::size_t semi = rest.find(';', pos);
                    std::string part = rest.substr(pos, semi - pos);
                    std::size_t ge = part.find(">=");
                    if (ge == std::string::npos || part.find(">=", ge + 2) != std::string::npos)
                        line_error(line, "inequality '" + part + "' must contain exactly one '>='");
                    cur.region.ineqs.push_back(Inequality{LinForm::parse(part.substr(0, ge)),
                                                          LinForm::parse(part.substr(ge + 2))});
                    if (semi == std::string::npos) break;
                    pos = semi + 1;
                }
                stage = Stage::regions;
            } else if (kw == "end") {
                if (toks.size() != 1) line_error(line, "'end' takes no arguments");
                if (stage != Stage::regions) line_error(line, "'end' before a complete case body");
                for (const PatternFactor& pf : cur.pattern)
                    for (int vi = 0; vi < 2; ++vi)
                        if (pf.exp.var_coeff[std::size_t(vi)] != 0 &&
                            std::size_t(vi) >= cur.vars.size())
                            throw table_error("case \"" + cur.id + "\": exponent uses undeclared variable " +
                                              (vi == 0 ? std::string("u") : std::string("w")));
                table.cases.push_back(std::move(cur));
                stage = Stage::none;
            } else {
                line_error(line, "unknown directive '" + kw + "'");
            }
        }
    }
    if (stage != Stage::none)
        throw table_error("unterminated case \"" + cur.id + "\" (missing 'end')");
    if (table.cases.empty()) throw table_error("no cases found in " + table.source_name);
    return table;
}

const CaseTable& embedded_case_table() {
    static const CaseTable table = load_cases(embedded_case_table_text(), "bundled");
    return table;
}

bool region_contains(const Region& r, const PBWIndex& a) { return r.contains(a); }

std::vector<std::string> locate(const CaseTable& t, const PBWIndex& a) {
    std::vector<std::string> ids;
    for (const CaseSpec& c : t.cases)
        if (c.region.contains(a)) ids.push_back(c.id);
    return ids;
}

std::vector<MonomialTerm> instantiate(const CaseSpec& c, const PBWIndex& a) {
    if (!c.region.contains(a))
        throw table_error("case \"" + c.id + "\": point " + a.to_string() + " violates the region");
    long long ub[2] = {0, 0};
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        ub[i] = c.vars[i].upper(a);
        if (ub[i] < 0)
            throw table_error("case \"" + c.id + "\": negative bound for " + c.vars[i].name +
                              " at " + a.to_string());
    }
    const Weight target = weight_of(a);
    std::vector<MonomialTerm> out;
    for (long long u = 0; u <= ub[0]; ++u) {
        for (long long w = 0; w <= ub[1]; ++w) {
            LaurentPoly coeff = LaurentPoly::one();
            bool zero = false;
            bool negative = false;
            for (std::size_t i = 0; i < c.factors.size(); ++i) {
                long long var = c.factors[i].var == "u" ? u : w;
                LaurentPoly b = q_binomial(c.factors[i].top.eval(a) + var, var);
                if (b.is_zero()) {
                    zero = true;
                    break;
                }
                coeff = coeff * b;
                if (var % 2 != 0) negative = !negative;
            }
            if (zero) continue;
            if (negative) coeff = -coeff;
            DividedWord word;
            for (const PatternFactor& pf : c.pattern) {
                long long e = pf.exp.eval(a, u, w);
                if (e < 0)
                    throw table_error("case \"" + c.id + "\": exponent " + pf.exp.to_string() +
                                      " = " + std::to_string(e) + " at " + a.to_string() +
                                      (c.vars.empty() ? std::string()
                                                      : ", u=" + std::to_string(u) +
                                                            (c.vars.size() > 1 ? ", w=" + std::to_string(w)
                                                                               : std::string())));
                if (e > 0) word.factors.emplace_back(pf.letter, static_cast<int>(e));
            }
            if (!(word.weight() == target))
                throw table_error("case \"" + c.id + "\": instantiated weight " +
                                  word.weight().to_string() + " differs from weight_of(" +
                                  a.to_string() + ") = " + target.to_string());
            out.push_back(MonomialTerm{std::move(coeff), std::move(word)});
        }
    }
    return out;
}

std::vector<PBWIndex> sample_points(const Region& r, int max_entry, int max_height,
                                    std::size_t count, const std::array<int, 10>* entry_caps) {
    struct Candidate {
        int strict;
        int height;
        PBWIndex point;
    };
    std::vector<Candidate> found;
    PBWIndex pt{};
    auto recurse = [&](auto&& self, int slot, int height) -> void {
        if (slot == 10) {
            if (r.contains(pt)) found.push_back({r.strict_count(pt), height, pt});
            return;
        }
        int h = slot_height(slot);
        int cap = max_entry;
        if (entry_caps) cap = std::min(cap, (*entry_caps)[std::size_t(slot)]);
        if (h > 0) cap = std::min(cap, (max_height - height) / h);
        for (int v = 0; v <= cap; ++v) {
            pt[slot] = v;
            self(self, slot + 1, height + v * h);
        }
        pt[slot] = 0;
    };
    if (max_entry >= 0 && max_height >= 0) recurse(recurse, 0, 0);
    std::sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
        if (x.strict != y.strict) return x.strict > y.strict;
        if (x.height != y.height) return x.height < y.height;
        return x.point < y.point;
    });
    if (found.size() > count) found.resize(count);
    std::vector<PBWIndex> out;
    out.reserve(found.size());
    for (const Candidate& c : found) out.push_back(c.point);
    return out;
}

namespace {

LinForm permute(const LinForm& f, const std::array<int, 10>& perm) {
    LinForm g;
    g.constant = f.constant;
    for (int j = 0; j < 10; ++j) g.coeff[std::size_t(perm[std::size_t(j)])] = f.coeff[std::size_t(j)];
    return g;
}

}  // namespace

CaseSpec apply_symmetry(const CaseSpec& c, const std::array<int, 10>& perm,
                        const std::array<int, 4>& gen_map) {
    std::array<bool, 10> seen_slot{};
    for (int j = 0; j < 10; ++j) {
        if (perm[std::size_t(j)] < 0 || perm[std::size_t(j)] > 9 || seen_slot[std::size_t(perm[std::size_t(j)])])
            throw table_error("apply_symmetry: perm is not a permutation of 0..9");
        seen_slot[std::size_t(perm[std::size_t(j)])] = true;
    }
    std::array<bool, 4> seen_gen{};
    for (int j = 0; j < 4; ++j) {
        if (gen_map[std::size_t(j)] < 1 || gen_map[std::size_t(j)] > 4 || seen_gen[std::size_t(gen_map[std::size_t(j)] - 1)])
            throw table_error("apply_symmetry: gen_map is not a permutation of 1..4");
        seen_gen[std::size_t(gen_map[std::size_t(j)] - 1)] = true;
    }
    CaseSpec out;
    out.id = c.id + "*";
    out.line = c.line;
    for (const SumVar& sv : c.vars) {
        SumVar nv{sv.name, {}};
        for (const LinForm& b : sv.bounds) nv.bounds.push_back(permute(b, perm));
        out.vars.push_back(std::move(nv));
    }
    for (const CoeffFactor& f : c.factors)
        out.factors.push_back(CoeffFactor{f.var, permute(f.top, perm)});
    for (const PatternFactor& pf : c.pattern)
        out.pattern.push_back(PatternFactor{gen_map[std::size_t(pf.letter - 1)],
                                            ExponentExpr{permute(pf.exp.base, perm), pf.exp.var_coeff}});
    for (const Inequality& q : c.region.ineqs)
        out.region.ineqs.push_back(Inequality{permute(q.lhs, perm), permute(q.rhs, perm)});
    return out;
}

CoverageStats coverage_stats(const CaseTable& t, int max_entry) {
    CoverageStats stats;
    constexpr std::size_t kMaxWitnesses = 16;
    PBWIndex pt{};
    std::vector<std::size_t> strict;
    auto visit = [&](auto&& self, int slot) -> void {
        if (slot == 10) {
            ++stats.total;
            int covering = 0;
            strict.clear();
            for (std::size_t ci = 0; ci < t.cases.size(); ++ci) {
                const Region& r = t.cases[ci].region;
                if (!r.contains(pt)) continue;
                ++covering;
                if (r.strict_count(pt) == static_cast<int>(r.ineqs.size())) strict.push_back(ci);
            }
            if (covering == 0) {
                ++stats.covered_zero;
                if (!stats.uncovered_example) stats.uncovered_example = pt;
            } else if (covering == 1) {
                ++stats.covered_one;
            } else {
                ++stats.covered_multi;
            }
            if (strict.size() > 1 && stats.strict_overlaps.size() < kMaxWitnesses)
                for (std::size_t i = 0; i + 1 < strict.size(); ++i)
                    for (std::size_t j = i + 1; j < strict.size(); ++j)
                        stats.strict_overlaps.push_back(
                            {t.cases[strict[i]].id, t.cases[strict[j]].id, pt});
            return;
        }
        if (slot == 3) {  // a4 fixed at 0
            self(self, slot + 1);
            return;
        }
        for (int v = 0; v <= max_entry; ++v) {
            pt[slot] = v;
            self(self, slot + 1);
        }
        pt[slot] = 0;
    };
    visit(visit, 0);
    return stats;
}

}  // namespace a4cb
