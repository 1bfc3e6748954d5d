#include <kapranov/formal_conn.hpp>

#include <algorithm>

namespace kapranov
{

namespace
{

int fvar(const VarSpec &spec, int i)
{
    return spec.var(Group::fiber, i);
}

Tensor3 zero_tensor3(int n, const VarSpec &spec, const Caps &caps)
{
    return Tensor3(n, std::vector<std::vector<TruncSeries>>(n, std::vector<TruncSeries>(n, TruncSeries(spec, caps))));
}

std::vector<TruncSeries> base_identity_images(const VarSpec &spec)
{
    std::vector<TruncSeries> imgs;
    for (int v = 0; v < spec.n_z + spec.n_zb; ++v) {
        imgs.push_back(TruncSeries::variable(spec, v));
    }
    return imgs;
}

// Composes every entry with the fiber map given by comps.
Tensor3 compose_tensor(const Tensor3 &t, const std::vector<TruncSeries> &comps, int fiber_cap)
{
    const VarSpec &spec = comps.at(0).spec();
    auto imgs = base_identity_images(spec);
    imgs.insert(imgs.end(), comps.begin(), comps.end());
    Tensor3 out = t;
    for (auto &plane : out) {
        for (auto &row : plane) {
            for (auto &x : row) {
                Caps caps = x.caps();
                caps[Group::fiber] = std::min(caps[Group::fiber], fiber_cap);
                x = substitute(x, imgs, spec, caps);
            }
        }
    }
    return out;
}

SeriesMatrix jacobian(const AutoJet &phi)
{
    const auto &spec = phi.spec();
    SeriesMatrix j(phi.dim());
    for (int i = 0; i < phi.dim(); ++i) {
        for (int a = 0; a < phi.dim(); ++a) {
            j[i].push_back(partial(phi.component(i), fvar(spec, a)));
        }
    }
    return j;
}

int fiber_cap_of(const Tensor3 &t)
{
    int c = kExact;
    for (const auto &plane : t) {
        for (const auto &row : plane) {
            for (const auto &x : row) {
                c = std::min(c, x.caps()[Group::fiber]);
            }
        }
    }
    return c;
}

bool all_zero(const Tensor3 &t)
{
    for (const auto &plane : t) {
        for (const auto &row : plane) {
            for (const auto &x : row) {
                if (!x.is_zero()) {
                    return false;
                }
            }
        }
    }
    return true;
}

int connection_order_from(const Tensor3 &g)
{
    const int cap = fiber_cap_of(g);
    return cap >= kExact ? kExact : cap + 1;
}

} // namespace

ConnectionJet::ConnectionJet(Tensor3 gamma, int order) : gamma_(std::move(gamma)), order_(order)
{
    const int n = static_cast<int>(gamma_.size());
    if (n == 0 || order_ < 1) {
        throw ShapeError("ConnectionJet: empty Christoffel data or order < 1");
    }
    const VarSpec spec = gamma_[0][0][0].spec();
    if (spec.n_u != n) {
        throw ShapeError("ConnectionJet: fiber count differs from dimension");
    }
    for (auto &plane : gamma_) {
        if (static_cast<int>(plane.size()) != n) {
            throw ShapeError("ConnectionJet: ragged Christoffel data");
        }
        for (auto &row : plane) {
            if (static_cast<int>(row.size()) != n) {
                throw ShapeError("ConnectionJet: ragged Christoffel data");
            }
            for (auto &x : row) {
                if (!(x.spec() == spec)) {
                    throw ShapeError("ConnectionJet: entries over different specs");
                }
                if (x.caps()[Group::fiber] < order_ - 1) {
                    throw OrderError("ConnectionJet: Christoffel symbol known to too low an order",
                                     x.caps()[Group::fiber] + 1);
                }
                Caps caps = x.caps();
                caps[Group::fiber] = order_ - 1;
                x = x.truncated(caps);
            }
        }
    }
}

ConnectionJet ConnectionJet::euclidean(int dim, int order, const VarSpec &spec_in)
{
    const VarSpec spec = spec_in.total() == 0 ? VarSpec::fiber(dim) : spec_in;
    return ConnectionJet(zero_tensor3(dim, spec, Caps::of(kExact, kExact, order - 1)), order);
}

bool ConnectionJet::torsion_free() const
{
    if (!torsion_free_) {
        torsion_free_ = all_zero(torsion(*this));
    }
    return *torsion_free_;
}

bool ConnectionJet::flat() const
{
    if (!flat_) {
        bool ok = true;
        for (const auto &t : curvature_of_formal(*this)) {
            ok = ok && all_zero(t);
        }
        flat_ = ok;
    }
    return *flat_;
}

Tensor3 torsion(const ConnectionJet &c)
{
    Tensor3 t = c.christoffels();
    for (int k = 0; k < c.dim(); ++k) {
        for (int i = 0; i < c.dim(); ++i) {
            for (int j = 0; j < c.dim(); ++j) {
                t[k][i][j] = c.gamma(k, i, j) - c.gamma(k, j, i);
            }
        }
    }
    return t;
}

Tensor4 curvature_of_formal(const ConnectionJet &c)
{
    const int n = c.dim();
    const auto &spec = c.spec();
    Tensor4 r(n);
    for (int l = 0; l < n; ++l) {
        r[l] = zero_tensor3(n, spec, Caps::exact());
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    TruncSeries x = partial(c.gamma(l, j, k), fvar(spec, i)) - partial(c.gamma(l, i, k), fvar(spec, j));
                    for (int m = 0; m < n; ++m) {
                        x += c.gamma(l, i, m) * c.gamma(m, j, k);
                        x -= c.gamma(l, j, m) * c.gamma(m, i, k);
                    }
                    r[l][k][i][j] = std::move(x);
                }
            }
        }
    }
    return r;
}

std::vector<SymPoly> euclidean_action(const SymPoly &p)
{
    std::vector<SymPoly> out;
    for (int j = 0; j < p.spec().n_u; ++j) {
        out.push_back(partial(p, fvar(p.spec(), j)));
    }
    return out;
}

std::vector<FullTensor> covector_tower(const Tensor3 &gamma, const TruncSeries &f, int kmax)
{
    const int n = static_cast<int>(gamma.size());
    const auto &spec = f.spec();
    std::vector<FullTensor> out;
    out.push_back({{Word{}, f}});
    for (int k = 1; k <= kmax; ++k) {
        const FullTensor &prev = out.back();
        FullTensor next;
        for (const auto &[word, t] : prev) {
            for (int j = 0; j < n; ++j) {
                TruncSeries val = partial(t, fvar(spec, j));
                for (std::size_t m = 0; m < word.size(); ++m) {
                    for (int l = 0; l < n; ++l) {
                        const TruncSeries &g = gamma[l][j][word[m]];
                        Word w2 = word;
                        w2[m] = l;
                        const TruncSeries &other = prev.at(w2);
                        if (g.is_zero() && g.caps().all_exact()) {
                            continue;
                        }
                        val -= g * other;
                    }
                }
                Word nw;
                nw.reserve(word.size() + 1);
                nw.push_back(j);
                nw.insert(nw.end(), word.begin(), word.end());
                next.emplace(std::move(nw), std::move(val));
            }
        }
        out.push_back(std::move(next));
    }
    return out;
}

FullTensor at_origin(const FullTensor &t)
{
    FullTensor out;
    for (const auto &[w, x] : t) {
        out.emplace(w, restrict_fiber_to_zero(x));
    }
    return out;
}

std::optional<Word> symmetry_defect(const FullTensor &t)
{
    for (const auto &[w, x] : t) {
        Word s = w;
        std::sort(s.begin(), s.end());
        if (s == w) {
            continue;
        }
        if (!agree(x, t.at(s))) {
            return w;
        }
    }
    return std::nullopt;
}

AutoJet exp_jet(const ConnectionJet &c)
{
    if (!c.torsion_free()) {
        throw DomainError("exp_jet: connection has torsion");
    }
    if (!c.flat()) {
        throw DomainError("exp_jet: connection is not flat");
    }
    const auto &spec = c.spec();
    const int r = c.order();
    std::vector<TruncSeries> comps;
    for (int i = 0; i < c.dim(); ++i) {
        const auto tower = covector_tower(c.christoffels(), TruncSeries::variable(spec, fvar(spec, i)), r);
        TruncSeries comp(spec, Caps::of(kExact, kExact, r));
        for (int k = 1; k <= r; ++k) {
            const FullTensor t0 = at_origin(tower[k]);
            if (symmetry_defect(t0)) {
                throw DomainError("exp_jet: covariant derivative is not symmetric");
            }
            comp += sym_project_series(t0, spec, Caps::of(kExact, kExact, r));
        }
        comps.push_back(std::move(comp));
    }
    return AutoJet(std::move(comps), r);
}

ConnectionJet pullback_connection(const AutoJet &phi, const ConnectionJet &c)
{
    if (phi.dim() != c.dim() || !(phi.spec() == c.spec())) {
        throw ShapeError("pullback_connection: shape mismatch");
    }
    const int n = c.dim();
    const auto &spec = c.spec();
    const SeriesMatrix jac = jacobian(phi);
    const SeriesMatrix jinv = series_mat_inverse(jac);
    const Tensor3 gphi = compose_tensor(c.christoffels(), phi.components(), phi.order());
    Tensor3 out = zero_tensor3(n, spec, Caps::exact());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            std::vector<TruncSeries> q;
            for (int k = 0; k < n; ++k) {
                TruncSeries x = partial(jac[k][a], fvar(spec, b));
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        x += gphi[k][i][j] * jac[i][a] * jac[j][b];
                    }
                }
                q.push_back(std::move(x));
            }
            for (int cc = 0; cc < n; ++cc) {
                TruncSeries y = jinv[cc][0] * q[0];
                for (int k = 1; k < n; ++k) {
                    y += jinv[cc][k] * q[k];
                }
                out[cc][a][b] = std::move(y);
            }
        }
    }
    const int order = std::min(connection_order_from(out), std::min(c.order(), phi.order() - 1));
    return ConnectionJet(std::move(out), order);
}

ConnectionJet pushforward_connection(const AutoJet &phi, const ConnectionJet &c)
{
    if (phi.dim() != c.dim() || !(phi.spec() == c.spec())) {
        throw ShapeError("pushforward_connection: shape mismatch");
    }
    const int n = c.dim();
    const auto &spec = c.spec();
    const SeriesMatrix jac = jacobian(phi);
    const SeriesMatrix jinv = series_mat_inverse(jac);
    // Expressed in the source coordinate t first.
    Tensor3 in_t = zero_tensor3(n, spec, Caps::exact());
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                TruncSeries x = -partial(jac[k][a], fvar(spec, b));
                for (int m = 0; m < n; ++m) {
                    x += jac[k][m] * c.gamma(m, a, b);
                }
                in_t[k][a][b] = std::move(x);
            }
        }
    }
    Tensor3 out = zero_tensor3(n, spec, Caps::exact());
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                TruncSeries acc(spec, Caps::exact());
                bool first = true;
                for (int a = 0; a < n; ++a) {
                    for (int b = 0; b < n; ++b) {
                        TruncSeries term = in_t[k][a][b] * jinv[a][i] * jinv[b][j];
                        if (first) {
                            acc = std::move(term);
                            first = false;
                        } else {
                            acc += term;
                        }
                    }
                }
                out[k][i][j] = std::move(acc);
            }
        }
    }
    const AutoJet back = invert(phi);
    out = compose_tensor(out, back.components(), back.order());
    const int order = std::min(connection_order_from(out), std::min(c.order(), phi.order() - 1));
    return ConnectionJet(std::move(out), order);
}

AutoJet exp_jet_by_pullback(const ConnectionJet &c)
{
    const int n = c.dim();
    const int r = c.order();
    const auto &spec = c.spec();
    std::vector<TruncSeries> phi = AutoJet::identity(n, r, spec).components();
    for (int m = 2; m <= r; ++m) {
        const AutoJet cur(phi, r);
        const SeriesMatrix jac = jacobian(cur);
        const Tensor3 gphi = compose_tensor(c.christoffels(), phi, r);
        for (int k = 0; k < n; ++k) {
            TruncSeries add(spec, Caps::of(kExact, kExact, r));
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    TruncSeries q(spec, Caps::exact());
                    for (int i = 0; i < n; ++i) {
                        for (int j = 0; j < n; ++j) {
                            q += gphi[k][i][j] * jac[i][a] * jac[j][b];
                        }
                    }
                    if (q.caps()[Group::fiber] < m - 2) {
                        throw OrderError("exp_jet_by_pullback: connection order too low", m - 1);
                    }
                    Monomial ab;
                    ab.e[fvar(spec, a)] += 1;
                    ab.e[fvar(spec, b)] += 1;
                    for (const auto &[mono, v] : q.terms()) {
                        if (mono.group_degree(spec, Group::fiber) != m - 2) {
                            continue;
                        }
                        add.add_term(mono * ab, -v / GRat(static_cast<long>(m) * (m - 1)));
                    }
                }
            }
            phi[k] += add;
        }
    }
    AutoJet out(std::move(phi), r);
    // The solve is overdetermined; consistency is the flatness and torsion
    // freeness of c.
    const ConnectionJet back = pullback_connection(out, c);
    for (const auto &plane : back.christoffels()) {
        for (const auto &row : plane) {
            for (const auto &x : row) {
                if (!x.is_zero()) {
                    throw DomainError("exp_jet_by_pullback: no jet pulls the connection back to the Euclidean one");
                }
            }
        }
    }
    return out;
}

int agreement_order(const AutoJet &a, const AutoJet &b, std::string *violation)
{
    const auto &spec = a.spec();
    int best = std::min(a.order(), b.order());
    for (int i = 0; i < std::min(a.dim(), b.dim()); ++i) {
        const TruncSeries d = a.component(i) - b.component(i);
        for (const auto &[m, v] : d.terms()) {
            const int deg = m.group_degree(spec, Group::fiber);
            if (deg - 1 < best) {
                best = deg - 1;
                if (violation) {
                    *violation = "component " + std::to_string(i) + ": " + TruncSeries::monomial(spec, m, v).to_string();
                }
            }
        }
    }
    return best;
}

EquivarianceReport check_equivariance(const AutoJet &psi, const ConnectionJet &c)
{
    EquivarianceReport rep;
    const ConnectionJet pushed = pushforward_connection(psi, c);
    const AutoJet lhs = exp_jet(pushed);
    const int r = lhs.order();
    const AutoJet rhs = g_action_on_J(psi.truncated(r), exp_jet(c).truncated(r));
    rep.order_checked = r;
    rep.max_equal_order = agreement_order(lhs, rhs, &rep.violation);
    rep.holds = rep.max_equal_order >= r;
    return rep;
}

} // namespace kapranov
