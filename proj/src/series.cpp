#include <kapranov/series.hpp>

#include <sstream>

namespace kapranov
{

Caps Caps::normalized(const VarSpec &spec) const
{
    Caps c = *this;
    for (auto g : kAllGroups) {
        if (spec.count(g) == 0) {
            c[g] = kExact;
        } else {
            c[g] = std::clamp(c[g], -1, kExact);
        }
    }
    return c;
}

std::string Caps::to_string() const
{
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < 3; ++i) {
        if (i) {
            os << ",";
        }
        if (r[i] >= kExact) {
            os << "exact";
        } else {
            os << r[i];
        }
    }
    os << ")";
    return os.str();
}

Monomial make_monomial(std::initializer_list<int> exps)
{
    if (exps.size() > kMaxVars) {
        throw ShapeError("make_monomial: too many variables");
    }
    Monomial m;
    std::size_t i = 0;
    for (int x : exps) {
        m.e[i++] = static_cast<std::uint8_t>(x);
    }
    return m;
}

namespace
{

void check_spec(const VarSpec &spec)
{
    if (spec.n_z < 0 || spec.n_zb < 0 || spec.n_u < 0 || static_cast<std::size_t>(spec.total()) > kMaxVars) {
        throw ShapeError("VarSpec: invalid variable counts");
    }
}

std::array<int, 3> group_degrees(const VarSpec &spec, const Monomial &m)
{
    return {m.group_degree(spec, Group::holo), m.group_degree(spec, Group::antiholo),
            m.group_degree(spec, Group::fiber)};
}

bool fits(const std::array<int, 3> &deg, const Caps &caps)
{
    return deg[0] <= caps.r[0] && deg[1] <= caps.r[1] && deg[2] <= caps.r[2];
}

void require_same_spec(const TruncSeries &a, const TruncSeries &b, const char *op)
{
    if (!(a.spec() == b.spec())) {
        throw ShapeError(std::string(op) + ": mismatched variable specs");
    }
}

std::string var_name(const VarSpec &spec, int v)
{
    switch (spec.group_of(v)) {
        case Group::holo:
            return "z" + std::to_string(v);
        case Group::antiholo:
            return "zb" + std::to_string(v - spec.n_z);
        default:
            return "u" + std::to_string(v - spec.n_z - spec.n_zb);
    }
}

// Product of known parts, keeping only monomials within caps.
TruncSeries::Terms product_terms(const TruncSeries &a, const TruncSeries &b, const Caps &caps)
{
    TruncSeries::Terms out;
    if (a.is_zero() || b.is_zero()) {
        return out;
    }
    const auto &spec = a.spec();
    struct Entry {
        const Monomial *m;
        std::array<int, 3> deg;
        const GRat *c;
    };
    std::vector<Entry> eb;
    eb.reserve(b.size());
    for (const auto &[m, c] : b.terms()) {
        eb.push_back({&m, group_degrees(spec, m), &c});
    }
    for (const auto &[ma, ca] : a.terms()) {
        const auto da = group_degrees(spec, ma);
        if (!fits(da, caps)) {
            continue;
        }
        for (const auto &e : eb) {
            const std::array<int, 3> d{da[0] + e.deg[0], da[1] + e.deg[1], da[2] + e.deg[2]};
            if (!fits(d, caps)) {
                continue;
            }
            auto [it, fresh] = out.try_emplace(ma * *e.m, ca);
            if (fresh) {
                it->second *= *e.c;
            } else {
                it->second += ca * *e.c;
            }
        }
    }
    std::erase_if(out, [](const auto &kv) { return kv.second.is_zero(); });
    return out;
}

} // namespace

TruncSeries::TruncSeries(const VarSpec &spec, const Caps &caps) : spec_(spec), caps_(caps.normalized(spec))
{
    check_spec(spec);
}

TruncSeries TruncSeries::constant(const VarSpec &spec, const GRat &c, const Caps &caps)
{
    TruncSeries s(spec, caps);
    s.add_term(Monomial{}, c);
    return s;
}

TruncSeries TruncSeries::variable(const VarSpec &spec, int var, const Caps &caps)
{
    if (var < 0 || var >= spec.total()) {
        throw ShapeError("TruncSeries::variable: index out of range");
    }
    Monomial m;
    m.e[var] = 1;
    return monomial(spec, m, GRat(1), caps);
}

TruncSeries TruncSeries::monomial(const VarSpec &spec, const Monomial &m, const GRat &c, const Caps &caps)
{
    TruncSeries s(spec, caps);
    for (std::size_t i = spec.total(); i < kMaxVars; ++i) {
        if (m.e[i] != 0) {
            throw ShapeError("TruncSeries::monomial: exponent outside spec");
        }
    }
    s.add_term(m, c);
    return s;
}

bool TruncSeries::is_void() const
{
    for (auto g : kAllGroups) {
        if (spec_.count(g) > 0 && caps_[g] < 0) {
            return true;
        }
    }
    return false;
}

GRat TruncSeries::coeff(const Monomial &m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? GRat{} : it->second;
}

bool TruncSeries::within_caps(const Monomial &m) const
{
    return fits(group_degrees(spec_, m), caps_);
}

void TruncSeries::add_term(const Monomial &m, const GRat &c)
{
    if (c.is_zero() || !within_caps(m)) {
        return;
    }
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

int TruncSeries::valuation(Group g) const
{
    int v = kExact;
    for (const auto &kv : terms_) {
        v = std::min(v, kv.first.group_degree(spec_, g));
    }
    return v;
}

int TruncSeries::guaranteed_valuation(Group g) const
{
    if (spec_.count(g) == 0) {
        return terms_.empty() && caps_.all_exact() ? kExact : 0;
    }
    for (auto h : kAllGroups) {
        if (h != g && spec_.count(h) > 0 && caps_[h] < kExact) {
            return 0;
        }
    }
    return std::min(valuation(g), caps_[g] >= kExact ? kExact : caps_[g] + 1);
}

int TruncSeries::total_valuation() const
{
    int v = kExact;
    for (const auto &kv : terms_) {
        v = std::min(v, kv.first.degree());
    }
    for (auto g : kAllGroups) {
        if (spec_.count(g) > 0 && caps_[g] < kExact) {
            v = std::min(v, caps_[g] + 1);
        }
    }
    return v;
}

void TruncSeries::drop_beyond_caps()
{
    std::erase_if(terms_, [this](const auto &kv) { return !within_caps(kv.first); });
}

TruncSeries TruncSeries::truncated(const Caps &caps) const
{
    TruncSeries out = *this;
    out.caps_ = min(caps_, caps.normalized(spec_));
    out.drop_beyond_caps();
    return out;
}

TruncSeries &TruncSeries::operator+=(const TruncSeries &o)
{
    require_same_spec(*this, o, "add");
    const Caps c = min(caps_, o.caps_);
    if (!(c == caps_)) {
        caps_ = c;
        drop_beyond_caps();
    }
    for (const auto &[m, v] : o.terms_) {
        add_term(m, v);
    }
    return *this;
}

TruncSeries &TruncSeries::operator-=(const TruncSeries &o)
{
    require_same_spec(*this, o, "sub");
    const Caps c = min(caps_, o.caps_);
    if (!(c == caps_)) {
        caps_ = c;
        drop_beyond_caps();
    }
    for (const auto &[m, v] : o.terms_) {
        add_term(m, -v);
    }
    return *this;
}

TruncSeries &TruncSeries::operator*=(const GRat &c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto &kv : terms_) {
        kv.second *= c;
    }
    return *this;
}

TruncSeries operator-(const TruncSeries &a)
{
    TruncSeries out = a;
    out *= GRat(-1);
    return out;
}

TruncSeries operator*(const TruncSeries &a, const TruncSeries &b)
{
    require_same_spec(a, b, "mul");
    Caps c;
    for (auto g : kAllGroups) {
        c[g] = std::min(cap_add(a.caps()[g], b.guaranteed_valuation(g)),
                        cap_add(b.caps()[g], a.guaranteed_valuation(g)));
    }
    TruncSeries out(a.spec(), c);
    auto terms = product_terms(a, b, out.caps());
    for (auto &[m, v] : terms) {
        out.add_term(m, v);
    }
    return out;
}

TruncSeries mul_truncated(const TruncSeries &a, const TruncSeries &b, const Caps &caps)
{
    require_same_spec(a, b, "mul_truncated");
    TruncSeries out(a.spec(), caps);
    for (auto &[m, v] : product_terms(a, b, out.caps())) {
        out.add_term(m, v);
    }
    return out;
}

TruncSeries add(const TruncSeries &a, const TruncSeries &b)
{
    return a + b;
}

TruncSeries mul(const TruncSeries &a, const TruncSeries &b)
{
    return a * b;
}

bool agree(const TruncSeries &a, const TruncSeries &b)
{
    return (a - b).is_zero();
}

TruncSeries partial(const TruncSeries &a, int var)
{
    const auto &spec = a.spec();
    if (var < 0 || var >= spec.total()) {
        throw ShapeError("partial: variable out of range");
    }
    Caps c = a.caps();
    const Group g = spec.group_of(var);
    if (c[g] < kExact) {
        c[g] -= 1;
    }
    TruncSeries out(spec, c);
    for (const auto &[m, v] : a.terms()) {
        if (m.e[var] == 0) {
            continue;
        }
        Monomial d = m;
        d.e[var] -= 1;
        out.add_term(d, v * GRat(static_cast<long>(m.e[var])));
    }
    return out;
}

TruncSeries substitute(const TruncSeries &a, std::span<const TruncSeries> images, const VarSpec &target,
                       const Caps &requested)
{
    const auto &src = a.spec();
    if (images.size() != static_cast<std::size_t>(src.total())) {
        throw ShapeError("substitute: one image per source variable required");
    }
    for (const auto &im : images) {
        if (!(im.spec() == target)) {
            throw ShapeError("substitute: image over the wrong spec");
        }
    }

    std::vector<bool> used(src.total(), false);
    for (const auto &kv : a.terms()) {
        for (int v = 0; v < src.total(); ++v) {
            if (kv.first.e[v] != 0) {
                used[v] = true;
            }
        }
    }

    Caps c = requested.normalized(target);
    for (int v = 0; v < src.total(); ++v) {
        const Group s = src.group_of(v);
        const bool needed = used[v] || a.caps()[s] < kExact;
        if (needed) {
            c = min(c, images[v].caps());
        }
        if (s == Group::fiber && !images[v].constant_term().is_zero()) {
            throw DomainError("substitute: fiber variable image has a constant term");
        }
    }

    // Unknown terms of a must land beyond the result caps. For each source
    // group pick the set of target groups G whose combined degree is forced
    // up by the images, and bound sum_{g in G} c_g accordingly.
    c = c.normalized(target);
    for (auto s : kAllGroups) {
        if (src.count(s) == 0 || a.caps()[s] >= kExact) {
            continue;
        }
        std::vector<std::array<int, 3>> degs;
        for (int i = 0; i < src.count(s); ++i) {
            const auto &im = images[src.var(s, i)];
            if (!im.constant_term().is_zero()) {
                throw DomainError("substitute: image with constant term for a variable of finite order");
            }
            for (const auto &kv : im.terms()) {
                degs.push_back(group_degrees(target, kv.first));
            }
        }
        if (degs.empty()) {
            continue;
        }
        int best_mask = 0;
        long best_excess = 0;
        for (int mask = 1; mask < 8; ++mask) {
            bool relevant = true;
            for (int g = 0; g < 3; ++g) {
                if ((mask >> g & 1) && target.count(static_cast<Group>(g)) == 0) {
                    relevant = false;
                }
            }
            if (!relevant) {
                continue;
            }
            long v = kExact;
            for (const auto &d : degs) {
                long t = 0;
                for (int g = 0; g < 3; ++g) {
                    if (mask >> g & 1) {
                        t += d[g];
                    }
                }
                v = std::min(v, t);
            }
            if (v < 1) {
                continue;
            }
            long sum = 0;
            for (int g = 0; g < 3; ++g) {
                if (mask >> g & 1) {
                    sum += c.r[g];
                }
            }
            const long excess = sum - ((a.caps()[s] + 1L) * v - 1);
            if (best_mask == 0 || excess < best_excess) {
                best_mask = mask;
                best_excess = excess;
            }
        }
        for (int g = 0; g < 3 && best_excess > 0; ++g) {
            if (!(best_mask >> g & 1)) {
                continue;
            }
            const long cut = std::min<long>(best_excess, c.r[g] + 1L);
            c.r[g] = static_cast<int>(c.r[g] - cut);
            best_excess -= cut;
        }
    }
    c = c.normalized(target);

    TruncSeries out(target, c);
    if (out.is_void()) {
        return out;
    }
    // powers[v][k] = images[v]^k, computed lazily and truncated to c.
    std::vector<std::vector<TruncSeries::Terms>> powers(src.total());
    auto mult = [&](const TruncSeries::Terms &x, const TruncSeries::Terms &y) {
        TruncSeries tx(target, c), ty(target, c);
        for (const auto &[m, v] : x) {
            tx.add_term(m, v);
        }
        for (const auto &[m, v] : y) {
            ty.add_term(m, v);
        }
        TruncSeries::Terms res;
        if (tx.is_zero() || ty.is_zero()) {
            return res;
        }
        for (const auto &[ma, ca] : tx.terms()) {
            for (const auto &[mb, cb] : ty.terms()) {
                Monomial m = ma * mb;
                if (!out.within_caps(m)) {
                    continue;
                }
                res[m] += ca * cb;
            }
        }
        std::erase_if(res, [](const auto &kv) { return kv.second.is_zero(); });
        return res;
    };
    auto power = [&](int v, int k) -> const TruncSeries::Terms & {
        auto &pv = powers[v];
        if (pv.empty()) {
            TruncSeries::Terms one;
            one[Monomial{}] = GRat(1);
            pv.push_back(std::move(one));
        }
        while (static_cast<int>(pv.size()) <= k) {
            pv.push_back(mult(pv.back(), images[v].terms()));
        }
        return pv[k];
    };

    for (const auto &[m, coef] : a.terms()) {
        TruncSeries::Terms acc;
        acc[Monomial{}] = coef;
        for (int v = 0; v < src.total() && !acc.empty(); ++v) {
            if (m.e[v] != 0) {
                acc = mult(acc, power(v, m.e[v]));
            }
        }
        for (const auto &[mm, vv] : acc) {
            out.add_term(mm, vv);
        }
    }
    return out;
}

TruncSeries conj_series(const TruncSeries &a)
{
    const auto &spec = a.spec();
    if (spec.n_z != spec.n_zb) {
        throw ShapeError("conj_series: needs as many z as zbar variables");
    }
    Caps c = a.caps();
    std::swap(c.r[0], c.r[1]);
    TruncSeries out(spec, c);
    for (const auto &[m, v] : a.terms()) {
        Monomial s = m;
        for (int i = 0; i < spec.n_z; ++i) {
            std::swap(s.e[i], s.e[spec.n_z + i]);
        }
        out.add_term(s, v.conj());
    }
    return out;
}

bool nilpotent_mod_caps(const TruncSeries &a)
{
    const auto &spec = a.spec();
    for (const auto &kv : a.terms()) {
        bool ok = false;
        for (auto g : kAllGroups) {
            if (a.caps()[g] < kExact && kv.first.group_degree(spec, g) > 0) {
                ok = true;
            }
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

TruncSeries inverse(const TruncSeries &a)
{
    const GRat c0 = a.constant_term();
    if (c0.is_zero()) {
        throw DomainError("inverse: constant term vanishes");
    }
    if (a.is_void()) {
        return a;
    }
    TruncSeries x = a;
    x.add_term(Monomial{}, -c0);
    if (!nilpotent_mod_caps(x)) {
        throw DomainError("inverse: series is not nilpotent modulo the caps");
    }
    const GRat inv0 = GRat(1) / c0;
    TruncSeries step = x * (-inv0);
    step = step.truncated(a.caps());
    TruncSeries term = TruncSeries::constant(a.spec(), inv0, a.caps());
    TruncSeries out = term;
    while (!term.is_zero()) {
        term = (term * step).truncated(a.caps());
        out += term;
    }
    return out.truncated(a.caps());
}

TruncSeries embed(const TruncSeries &a, const VarSpec &wider)
{
    const auto &src = a.spec();
    for (auto g : kAllGroups) {
        if (wider.count(g) < src.count(g)) {
            throw ShapeError("embed: target spec is narrower");
        }
    }
    Caps c = a.caps();
    for (auto g : kAllGroups) {
        if (src.count(g) == 0) {
            c[g] = kExact;
        }
    }
    TruncSeries out(wider, c);
    for (const auto &[m, v] : a.terms()) {
        Monomial w;
        for (auto g : kAllGroups) {
            for (int i = 0; i < src.count(g); ++i) {
                w.e[wider.var(g, i)] = m.e[src.var(g, i)];
            }
        }
        out.add_term(w, v);
    }
    return out;
}

TruncSeries restrict_fiber_to_zero(const TruncSeries &a)
{
    const auto &src = a.spec();
    const VarSpec base{src.n_z, src.n_zb, 0};
    Caps c = a.caps();
    if (src.n_u > 0 && c[Group::fiber] < 0) {
        c = Caps::of(-1, -1, kExact);
    }
    c[Group::fiber] = kExact;
    TruncSeries out(base, c);
    for (const auto &[m, v] : a.terms()) {
        if (m.group_degree(src, Group::fiber) != 0) {
            continue;
        }
        out.add_term(m, v);
    }
    return out;
}

std::map<Monomial, TruncSeries> split_fiber(const TruncSeries &a)
{
    const auto &src = a.spec();
    const VarSpec base{src.n_z, src.n_zb, 0};
    Caps c = a.caps();
    c[Group::fiber] = kExact;
    std::map<Monomial, TruncSeries> out;
    for (const auto &[m, v] : a.terms()) {
        Monomial fib, bm;
        for (int i = 0; i < src.n_u; ++i) {
            fib.e[i] = m.e[src.var(Group::fiber, i)];
        }
        for (int i = 0; i < src.n_z + src.n_zb; ++i) {
            bm.e[i] = m.e[i];
        }
        auto it = out.try_emplace(fib, TruncSeries(base, c)).first;
        it->second.add_term(bm, v);
    }
    return out;
}

std::string TruncSeries::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, v] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << v.to_string();
        if (m.degree() > 0) {
            os << "*" << monomial_to_string(m, spec_);
        }
    }
    return os.str();
}

std::string monomial_to_string(const Monomial &m, const VarSpec &spec)
{
    std::string out;
    for (int i = 0; i < spec.total(); ++i) {
        if (m.e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += "*";
        }
        out += var_name(spec, i);
        if (m.e[i] > 1) {
            out += "^" + std::to_string(static_cast<int>(m.e[i]));
        }
    }
    return out.empty() ? "1" : out;
}

} // namespace kapranov
