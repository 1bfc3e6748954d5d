#include <kapranov/kahler.hpp>

#include <algorithm>

namespace kapranov
{

namespace
{

int zvar(const VarSpec &spec, int i)
{
    return spec.var(Group::holo, i);
}

int zbvar(const VarSpec &spec, int i)
{
    return spec.var(Group::antiholo, i);
}

void require_square(const SeriesMatrix &h)
{
    const std::size_t n = h.size();
    if (n == 0) {
        throw ShapeError("ChartMetric: empty matrix");
    }
    const VarSpec spec = h[0].at(0).spec();
    if (!(spec == VarSpec::base(static_cast<int>(n)))) {
        throw ShapeError("ChartMetric: entries must be series in (z, zbar) of the chart dimension");
    }
    for (const auto &row : h) {
        if (row.size() != n) {
            throw ShapeError("ChartMetric: matrix is not square");
        }
        for (const auto &x : row) {
            if (!(x.spec() == spec)) {
                throw ShapeError("ChartMetric: entries over different specs");
            }
        }
    }
}

Word with_slot(Word w, std::size_t p, int v)
{
    w[p] = v;
    return w;
}

// Enumerates all words of length k over n letters.
std::vector<Word> all_words(int n, int k)
{
    std::vector<Word> out{Word{}};
    for (int step = 0; step < k; ++step) {
        std::vector<Word> next;
        for (const auto &w : out) {
            for (int a = 0; a < n; ++a) {
                Word x = w;
                x.push_back(a);
                next.push_back(std::move(x));
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace

ChartMetric::ChartMetric(SeriesMatrix h) : h_(std::move(h))
{
    require_square(h_);
    if (determinant(constant_part(h_)).is_zero()) {
        throw DomainError("ChartMetric: metric is singular at the basepoint");
    }
}

ChartMetric ChartMetric::flat(int dim, int order)
{
    const VarSpec spec = VarSpec::base(dim);
    const Caps caps = Caps::of(order, order, kExact);
    SeriesMatrix h(dim, std::vector<TruncSeries>(dim, TruncSeries(spec, caps)));
    for (int i = 0; i < dim; ++i) {
        h[i][i] = TruncSeries::constant(spec, GRat(1), caps);
    }
    return ChartMetric(std::move(h));
}

ChartMetric ChartMetric::fubini_study(int dim, int order)
{
    const VarSpec spec = VarSpec::base(dim);
    const Caps caps = Caps::of(order, order, kExact);
    TruncSeries s = TruncSeries::constant(spec, GRat(1), caps);
    for (int k = 0; k < dim; ++k) {
        Monomial m;
        m.e[zvar(spec, k)] = 1;
        m.e[zbvar(spec, k)] = 1;
        s.add_term(m, GRat(1));
    }
    const TruncSeries inv = inverse(s);
    const TruncSeries inv2 = (inv * inv).truncated(caps);
    SeriesMatrix h(dim, std::vector<TruncSeries>(dim));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            Monomial m;
            m.e[zbvar(spec, i)] += 1;
            m.e[zvar(spec, j)] += 1;
            TruncSeries x = -(TruncSeries::monomial(spec, m, GRat(1)) * inv2);
            if (i == j) {
                x += inv;
            }
            h[i][j] = x.truncated(caps);
        }
    }
    return ChartMetric(std::move(h));
}

ChartMetric ChartMetric::from_potential(const TruncSeries &k)
{
    const VarSpec &spec = k.spec();
    if (spec.n_u != 0 || spec.n_z != spec.n_zb || spec.n_z == 0) {
        throw ShapeError("ChartMetric::from_potential: potential must be a series in (z, zbar)");
    }
    const int n = spec.n_z;
    SeriesMatrix h(n, std::vector<TruncSeries>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h[i][j] = partial(partial(k, zvar(spec, i)), zbvar(spec, j));
        }
    }
    return ChartMetric(std::move(h));
}

int ChartMetric::order() const
{
    int c = kExact;
    for (const auto &row : h_) {
        for (const auto &x : row) {
            c = std::min({c, x.caps()[Group::holo], x.caps()[Group::antiholo]});
        }
    }
    return c;
}

ChartMetric ChartMetric::truncated(int order) const
{
    SeriesMatrix h = h_;
    for (auto &row : h) {
        for (auto &x : row) {
            x = x.truncated(min(x.caps(), Caps::of(order, order, kExact)));
        }
    }
    return ChartMetric(std::move(h));
}

ChartMetric ChartMetric::scaled(const GRat &c) const
{
    SeriesMatrix h = h_;
    for (auto &row : h) {
        for (auto &x : row) {
            x *= c;
        }
    }
    return ChartMetric(std::move(h));
}

bool ChartMetric::hermitian() const
{
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!agree(h_[i][j], conj_series(h_[j][i]))) {
                return false;
            }
        }
    }
    return true;
}

bool ChartMetric::kahler() const
{
    const int n = dim();
    const VarSpec &spec = h_[0][0].spec();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = i + 1; k < n; ++k) {
                if (!agree(partial(h_[i][j], zvar(spec, k)), partial(h_[k][j], zvar(spec, i)))) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool ChartConnection::torsion_free() const
{
    const int n = dim();
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (!agree(gamma[k][i][j], gamma[k][j][i])) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool ChartConnection::flat_20() const
{
    const int n = dim();
    const VarSpec &sp = spec();
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    TruncSeries r = partial(gamma[l][j][k], zvar(sp, i)) - partial(gamma[l][i][k], zvar(sp, j));
                    for (int m = 0; m < n; ++m) {
                        r += gamma[l][i][m] * gamma[m][j][k];
                        r -= gamma[l][j][m] * gamma[m][i][k];
                    }
                    if (!r.is_zero()) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

int ChartConnection::holo_cap() const
{
    int c = kExact;
    for (const auto &plane : gamma) {
        for (const auto &row : plane) {
            for (const auto &x : row) {
                c = std::min(c, x.caps()[Group::holo]);
            }
        }
    }
    return c;
}

ChartConnection levi_civita(const ChartMetric &h)
{
    const int n = h.dim();
    const VarSpec spec = h.h(0, 0).spec();
    SeriesMatrix ht(n, std::vector<TruncSeries>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ht[i][j] = h.h(j, i);
        }
    }
    // g[k][l] = h^{k lbar}
    const SeriesMatrix g = series_mat_inverse(ht);
    ChartConnection out;
    out.gamma.assign(n, std::vector<std::vector<TruncSeries>>(n, std::vector<TruncSeries>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<TruncSeries> dh(n);
            for (int l = 0; l < n; ++l) {
                dh[l] = partial(h.h(j, l), zvar(spec, i));
            }
            for (int k = 0; k < n; ++k) {
                TruncSeries s(spec);
                for (int l = 0; l < n; ++l) {
                    s += g[k][l] * dh[l];
                }
                out.gamma[k][i][j] = std::move(s);
            }
        }
    }
    return out;
}

CurvatureTensor CurvatureTensor::from_full(int dim, int degree, const std::map<Key, TruncSeries> &full)
{
    CurvatureTensor t;
    t.dim_ = dim;
    t.degree_ = degree;
    for (const auto &[key, x] : full) {
        const auto &[l, w, j] = key;
        if (static_cast<int>(w.size()) != degree) {
            throw ShapeError("CurvatureTensor: input word of the wrong length");
        }
        Word s = w;
        std::sort(s.begin(), s.end());
        if (s == w) {
            t.comps_.emplace(key, x);
            continue;
        }
        const auto it = full.find(Key{l, s, j});
        if (it == full.end() || !agree(x, it->second)) {
            std::string ws;
            for (int a : w) {
                ws += std::to_string(a);
            }
            throw DomainError("CurvatureTensor: not symmetric at output " + std::to_string(l) + ", inputs " + ws +
                              ", dzbar " + std::to_string(j));
        }
    }
    return t;
}

const TruncSeries &CurvatureTensor::at(int l, Word inputs, int jbar) const
{
    std::sort(inputs.begin(), inputs.end());
    const auto it = comps_.find(Key{l, inputs, jbar});
    if (it == comps_.end()) {
        throw ShapeError("CurvatureTensor: component out of range");
    }
    return it->second;
}

bool CurvatureTensor::is_zero() const
{
    return std::all_of(comps_.begin(), comps_.end(), [](const auto &kv) { return kv.second.is_zero(); });
}

Caps CurvatureTensor::caps() const
{
    Caps c = Caps::exact();
    for (const auto &kv : comps_) {
        c = min(c, kv.second.caps());
    }
    return c;
}

HomTensor CurvatureTensor::cotangent_hom(int jbar, const Caps &caps_in) const
{
    const VarSpec full = VarSpec::full(dim_);
    Caps caps = caps_in;
    for (const auto &kv : comps_) {
        caps[Group::holo] = std::min(caps[Group::holo], kv.second.caps()[Group::holo]);
        caps[Group::antiholo] = std::min(caps[Group::antiholo], kv.second.caps()[Group::antiholo]);
    }
    std::vector<TruncSeries> images(dim_, TruncSeries(full, caps));
    const int nb = 2 * dim_;
    for (const auto &[key, x] : comps_) {
        const auto &[l, w, j] = key;
        if (j != jbar) {
            continue;
        }
        const Monomial fib = multiset_of(w, full);
        const GRat scale = GRat(-1) / GRat(multiset_factorial(fib, full));
        for (const auto &[m, v] : x.terms()) {
            Monomial mm = fib;
            for (int i = 0; i < nb; ++i) {
                mm.e[i] = m.e[i];
            }
            images[l].add_term(mm, v * scale);
        }
    }
    return HomTensor(std::move(images));
}

CurvatureTensor curvature_R(const ChartConnection &gamma)
{
    const int n = gamma.dim();
    const VarSpec &spec = gamma.spec();
    std::map<CurvatureTensor::Key, TruncSeries> full;
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < n; ++j) {
                    full.emplace(CurvatureTensor::Key{l, Word{i, k}, j}, -partial(gamma.gamma[l][i][k], zbvar(spec, j)));
                }
            }
        }
    }
    return CurvatureTensor::from_full(n, 2, full);
}

std::vector<CurvatureTensor> covariant_tower(const ChartConnection &gamma, const CurvatureTensor &r2, int n_max)
{
    if (r2.degree() != 2 || r2.dim() != gamma.dim()) {
        throw ShapeError("covariant_tower: expects the degree-2 curvature of the same dimension");
    }
    if (n_max < 2) {
        throw ShapeError("covariant_tower: n_max must be at least 2");
    }
    const int max_n = gamma.holo_cap() >= kExact ? kExact : gamma.holo_cap() + 1;
    if (n_max > max_n) {
        throw OrderError("covariant_tower: connection known to too low a base order for n = " + std::to_string(n_max),
                         max_n);
    }
    const int n = gamma.dim();
    const VarSpec &spec = gamma.spec();
    std::vector<CurvatureTensor> out{r2};
    for (int deg = 2; deg < n_max; ++deg) {
        const CurvatureTensor &prev = out.back();
        const auto words = all_words(n, deg);
        std::map<CurvatureTensor::Key, TruncSeries> full;
        for (int l = 0; l < n; ++l) {
            for (int a = 0; a < n; ++a) {
                for (const auto &w : words) {
                    for (int j = 0; j < n; ++j) {
                        TruncSeries v = partial(prev.at(l, w, j), zvar(spec, a));
                        for (int m = 0; m < n; ++m) {
                            v += gamma.gamma[l][a][m] * prev.at(m, w, j);
                            for (std::size_t p = 0; p < w.size(); ++p) {
                                v -= gamma.gamma[m][a][w[p]] * prev.at(l, with_slot(w, p, m), j);
                            }
                        }
                        Word key{a};
                        key.insert(key.end(), w.begin(), w.end());
                        full.emplace(CurvatureTensor::Key{l, std::move(key), j}, std::move(v));
                    }
                }
            }
        }
        out.push_back(CurvatureTensor::from_full(n, deg + 1, full));
    }
    return out;
}

bool dbar_closed(const CurvatureTensor &r2)
{
    const int n = r2.dim();
    const VarSpec spec = VarSpec::base(n);
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int m = i; m < n; ++m) {
                for (int j = 0; j < n; ++j) {
                    for (int k = j + 1; k < n; ++k) {
                        const auto a = partial(r2.at(l, {i, m}, j), zbvar(spec, k));
                        const auto b = partial(r2.at(l, {i, m}, k), zbvar(spec, j));
                        if (!agree(a, b)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

} // namespace kapranov
