#include <kapranov/random.hpp>

namespace kapranov
{

GRat random_grat(Rng &rng, bool complex)
{
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    GRat x(mpq_class(num(rng), den(rng)));
    if (complex && rng() % 3 == 0) {
        x += GRat(mpq_class(0), mpq_class(num(rng), den(rng)));
    }
    return x;
}

TruncSeries random_series(Rng &rng, const VarSpec &spec, const Caps &caps, int max_deg, int n_terms,
                          bool allow_constant)
{
    TruncSeries s(spec, caps);
    std::uniform_int_distribution<int> var(0, spec.total() - 1);
    std::uniform_int_distribution<int> deg(allow_constant ? 0 : 1, max_deg);
    for (int t = 0; t < n_terms; ++t) {
        Monomial m;
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) {
            m.e[var(rng)] += 1;
        }
        s.add_term(m, random_grat(rng));
    }
    return s;
}

AutoJet random_autojet(Rng &rng, int dim, int order, bool in_j, const VarSpec &spec_in)
{
    const VarSpec spec = spec_in.total() == 0 ? VarSpec::fiber(dim) : spec_in;
    Matrix t = identity_matrix(dim);
    if (!in_j) {
        do {
            for (auto &row : t) {
                for (auto &x : row) {
                    x = random_grat(rng, false);
                }
            }
        } while (determinant(t).is_zero());
    }
    std::uniform_int_distribution<int> fvar(0, dim - 1);
    std::uniform_int_distribution<int> deg(2, std::max(2, order));
    std::vector<TruncSeries> comps;
    for (int i = 0; i < dim; ++i) {
        TruncSeries s(spec, Caps::of(kExact, kExact, order));
        for (int j = 0; j < dim; ++j) {
            Monomial m;
            m.e[spec.var(Group::fiber, j)] = 1;
            s.add_term(m, t[i][j]);
        }
        for (int k = 0; k < 3 && order >= 2; ++k) {
            Monomial m;
            const int d = deg(rng);
            for (int a = 0; a < d; ++a) {
                m.e[spec.var(Group::fiber, fvar(rng))] += 1;
            }
            const int base = spec.n_z + spec.n_zb;
            if (base > 0 && rng() % 2 == 0) {
                m.e[rng() % base] += 1;
            }
            s.add_term(m, random_grat(rng));
        }
        comps.push_back(std::move(s));
    }
    return AutoJet(std::move(comps), order);
}

ConnectionJet random_flat_connection(Rng &rng, int dim, int order, const VarSpec &spec)
{
    const AutoJet j = random_autojet(rng, dim, order + 1, true, spec);
    return pushforward_connection(j, ConnectionJet::euclidean(dim, order, j.spec()));
}

ConnectionJet random_section_family(Rng &rng, int dim, int fiber_cap)
{
    const VarSpec full = VarSpec::full(dim);
    const int order = fiber_cap + 2;
    const AutoJet base = random_autojet(rng, dim, order, true, full);
    std::uniform_int_distribution<int> fvar(0, dim - 1);
    std::vector<TruncSeries> comps;
    for (int i = 0; i < dim; ++i) {
        TruncSeries s = base.component(i);
        for (int j = 0; j < dim; ++j) {
            Monomial m;
            m.e[full.var(Group::antiholo, j)] = 1;
            m.e[full.var(Group::fiber, fvar(rng))] += 1;
            m.e[full.var(Group::fiber, fvar(rng))] += 1;
            if (rng() % 2) {
                m.e[full.var(Group::holo, fvar(rng))] += 1;
            }
            GRat c = random_grat(rng);
            while (c.is_zero()) {
                c = random_grat(rng);
            }
            s.add_term(m, c);
        }
        comps.push_back(std::move(s));
    }
    const AutoJet j(std::move(comps), order);
    return pushforward_connection(j, ConnectionJet::euclidean(dim, fiber_cap + 1, full));
}

BiChartForm random_bi_form(Rng &rng, int dim, int deg)
{
    const VarSpec s = BiChartForm::spec(dim);
    BiChartForm out(dim);
    out.add(0, 0, random_series(rng, s, Caps::exact(), deg, 3));
    out.add(1, 0, random_series(rng, s, Caps::exact(), deg, 2));
    out.add(0, 1, random_series(rng, s, Caps::exact(), deg, 2));
    return out;
}

ChartConnection random_holomorphic_connection(Rng &rng, int dim)
{
    const VarSpec base = VarSpec::base(dim);
    const VarSpec holo{dim, 0, 0};
    ChartConnection g;
    g.gamma.assign(dim, std::vector<std::vector<TruncSeries>>(dim, std::vector<TruncSeries>(dim)));
    for (auto &plane : g.gamma) {
        for (auto &row : plane) {
            for (auto &x : row) {
                x = embed(random_series(rng, holo, Caps::exact(), 2, 2), base);
            }
        }
    }
    return g;
}

} // namespace kapranov
