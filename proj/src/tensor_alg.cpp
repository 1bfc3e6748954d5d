#include <kapranov/tensor_alg.hpp>

#include <algorithm>
#include <sstream>

namespace kapranov
{

TensorWord TensorWord::unit()
{
    return word({});
}

TensorWord TensorWord::word(Word w, const GRat &c)
{
    TensorWord t;
    t.add(w, c);
    return t;
}

GRat TensorWord::coeff(const Word &w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? GRat{} : it->second;
}

void TensorWord::add(const Word &w, const GRat &c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, fresh] = terms_.try_emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

TensorWord &TensorWord::operator+=(const TensorWord &o)
{
    for (const auto &[w, c] : o.terms_) {
        add(w, c);
    }
    return *this;
}

TensorWord &TensorWord::operator-=(const TensorWord &o)
{
    for (const auto &[w, c] : o.terms_) {
        add(w, -c);
    }
    return *this;
}

TensorWord &TensorWord::operator*=(const GRat &c)
{
    if (c.is_zero()) {
        terms_.clear();
    }
    for (auto &kv : terms_) {
        kv.second *= c;
    }
    return *this;
}

std::string TensorWord::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[w, c] : terms_) {
        os << (first ? "" : " + ") << c.to_string() << "*[";
        for (std::size_t i = 0; i < w.size(); ++i) {
            os << (i ? "," : "") << w[i];
        }
        os << "]";
        first = false;
    }
    return os.str();
}

namespace
{

void shuffle_words(const Word &a, std::size_t i, const Word &b, std::size_t j, Word &prefix,
                   std::map<Word, long> &out)
{
    if (i == a.size() && j == b.size()) {
        out[prefix] += 1;
        return;
    }
    if (i < a.size()) {
        prefix.push_back(a[i]);
        shuffle_words(a, i + 1, b, j, prefix, out);
        prefix.pop_back();
    }
    if (j < b.size()) {
        prefix.push_back(b[j]);
        shuffle_words(a, i, b, j + 1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

TensorWord shuffle(const TensorWord &a, const TensorWord &b)
{
    TensorWord out;
    for (const auto &[wa, ca] : a.terms()) {
        for (const auto &[wb, cb] : b.terms()) {
            std::map<Word, long> counts;
            Word prefix;
            shuffle_words(wa, 0, wb, 0, prefix, counts);
            const GRat c = ca * cb;
            for (const auto &[w, k] : counts) {
                out.add(w, c * GRat(k));
            }
        }
    }
    return out;
}

SymPoly sym_poly(int dim, int cap)
{
    return TruncSeries(VarSpec::fiber(dim), Caps::of(kExact, kExact, cap));
}

Monomial multiset_of(std::span<const int> word, const VarSpec &spec)
{
    Monomial m;
    for (int i : word) {
        if (i < 0 || i >= spec.n_u) {
            throw ShapeError("multiset_of: index out of range");
        }
        m.e[spec.var(Group::fiber, i)] += 1;
    }
    return m;
}

Word sorted_word(const Monomial &m, const VarSpec &spec)
{
    Word w;
    for (int i = 0; i < spec.n_u; ++i) {
        for (int k = 0; k < m.e[spec.var(Group::fiber, i)]; ++k) {
            w.push_back(i);
        }
    }
    return w;
}

mpq_class multiset_factorial(const Monomial &m, const VarSpec &spec)
{
    mpq_class f(1);
    for (int i = 0; i < spec.n_u; ++i) {
        f *= factorial(m.e[spec.var(Group::fiber, i)]);
    }
    return f;
}

TensorWord sym_include(const SymPoly &p)
{
    const auto &spec = p.spec();
    if (spec.n_z != 0 || spec.n_zb != 0) {
        throw ShapeError("sym_include: coefficients must be constants");
    }
    TensorWord out;
    for (const auto &[m, c] : p.terms()) {
        // Each distinct arrangement of the multiset arises prod m_i! times.
        const GRat weight = c * GRat(multiset_factorial(m, spec));
        Word w = sorted_word(m, spec);
        do {
            out.add(w, weight);
        } while (std::next_permutation(w.begin(), w.end()));
    }
    return out;
}

SymPoly sym_project(const TensorWord &w, int dim, int cap)
{
    SymPoly out = sym_poly(dim, cap);
    for (const auto &[word, c] : w.terms()) {
        out.add_term(multiset_of(word, out.spec()), c / GRat(factorial(word.size())));
    }
    return out;
}

SymPoly sym_project_series(const std::map<Word, TruncSeries> &t, const VarSpec &full, const Caps &caps)
{
    const VarSpec base{full.n_z, full.n_zb, 0};
    Caps c = caps;
    for (const auto &kv : t) {
        if (!(kv.second.spec() == base)) {
            throw ShapeError("sym_project_series: coefficient over the wrong spec");
        }
        c[Group::holo] = std::min(c[Group::holo], kv.second.caps()[Group::holo]);
        c[Group::antiholo] = std::min(c[Group::antiholo], kv.second.caps()[Group::antiholo]);
    }
    TruncSeries out(full, c);
    for (const auto &[word, coef] : t) {
        const Monomial fib = multiset_of(word, full);
        const GRat scale = GRat(1) / GRat(factorial(word.size()));
        for (const auto &[m, v] : coef.terms()) {
            Monomial mm = fib;
            for (int i = 0; i < base.total(); ++i) {
                mm.e[i] = m.e[i];
            }
            out.add_term(mm, v * scale);
        }
    }
    return out;
}

HomTensor::HomTensor(std::vector<TruncSeries> images) : images_(std::move(images))
{
    if (images_.empty()) {
        throw ShapeError("HomTensor: needs at least one generator");
    }
    const auto &spec = images_[0].spec();
    if (spec.n_u != static_cast<int>(images_.size())) {
        throw ShapeError("HomTensor: one image per fiber generator required");
    }
    for (const auto &x : images_) {
        if (!(x.spec() == spec)) {
            throw ShapeError("HomTensor: images over different specs");
        }
    }
}

HomTensor HomTensor::zero(const VarSpec &spec, const Caps &caps)
{
    return HomTensor(std::vector<TruncSeries>(spec.n_u, TruncSeries(spec, caps)));
}

int HomTensor::degree() const
{
    int d = -1;
    for (const auto &x : images_) {
        for (const auto &kv : x.terms()) {
            const int k = kv.first.group_degree(x.spec(), Group::fiber);
            if (d >= 0 && k != d) {
                return -1;
            }
            d = k;
        }
    }
    return d;
}

bool HomTensor::is_zero() const
{
    return std::all_of(images_.begin(), images_.end(), [](const auto &x) { return x.is_zero(); });
}

TruncSeries HomTensor::entry(int j, const Monomial &multiset) const
{
    const auto &spec = this->spec();
    const VarSpec base{spec.n_z, spec.n_zb, 0};
    Caps c = image(j).caps();
    c[Group::fiber] = kExact;
    TruncSeries out(base, c);
    for (const auto &[m, v] : image(j).terms()) {
        bool match = true;
        for (int i = 0; i < spec.n_u; ++i) {
            const int k = spec.var(Group::fiber, i);
            if (m.e[k] != multiset.e[k]) {
                match = false;
                break;
            }
        }
        if (!match) {
            continue;
        }
        Monomial b;
        for (int i = 0; i < base.total(); ++i) {
            b.e[i] = m.e[i];
        }
        out.add_term(b, v);
    }
    return out;
}

HomTensor HomTensor::homogeneous_part(int d) const
{
    std::vector<TruncSeries> parts;
    for (const auto &x : images_) {
        TruncSeries p(x.spec(), x.caps());
        for (const auto &[m, v] : x.terms()) {
            if (m.group_degree(x.spec(), Group::fiber) == d) {
                p.add_term(m, v);
            }
        }
        parts.push_back(std::move(p));
    }
    return HomTensor(std::move(parts));
}

HomTensor &HomTensor::operator+=(const HomTensor &o)
{
    if (o.dim() != dim()) {
        throw ShapeError("HomTensor: dimension mismatch");
    }
    for (int j = 0; j < dim(); ++j) {
        images_[j] += o.images_[j];
    }
    return *this;
}

HomTensor &HomTensor::operator-=(const HomTensor &o)
{
    if (o.dim() != dim()) {
        throw ShapeError("HomTensor: dimension mismatch");
    }
    for (int j = 0; j < dim(); ++j) {
        images_[j] -= o.images_[j];
    }
    return *this;
}

TruncSeries derivation_extend(const HomTensor &r, const TruncSeries &x, int fiber_cap)
{
    const auto &spec = x.spec();
    if (!(spec == r.spec())) {
        throw ShapeError("derivation_extend: spec mismatch");
    }
    int v = kExact;
    Caps c = x.caps();
    for (const auto &img : r.images()) {
        v = std::min(v, img.valuation(Group::fiber));
        c = min(c, img.caps());
    }
    // The fiber cap of the images bounds the result; x contributes its own
    // cap shifted by the degree the derivation adds.
    int ucap = x.caps()[Group::fiber];
    if (ucap < kExact) {
        ucap = cap_add(ucap - 1, v);
    }
    for (const auto &img : r.images()) {
        ucap = std::min(ucap, img.caps()[Group::fiber]);
    }
    c[Group::fiber] = std::min(ucap, fiber_cap);
    TruncSeries out(spec, c);
    for (int j = 0; j < r.dim(); ++j) {
        if (r.image(j).is_zero()) {
            continue;
        }
        const TruncSeries dx = partial(x, spec.var(Group::fiber, j));
        if (dx.is_zero()) {
            continue;
        }
        out += mul_truncated(r.image(j), dx, c);
    }
    return out.truncated(c);
}

HomTensor derivation_bracket(const HomTensor &x, const HomTensor &y, int fiber_cap)
{
    std::vector<TruncSeries> images;
    for (int l = 0; l < x.dim(); ++l) {
        images.push_back(derivation_extend(x, y.image(l), fiber_cap) - derivation_extend(y, x.image(l), fiber_cap));
    }
    return HomTensor(std::move(images));
}

} // namespace kapranov
