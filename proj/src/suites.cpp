#include <kapranov/suites.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <thread>

#include <kapranov/random.hpp>

namespace kapranov
{

namespace
{

// Accumulates boolean sub-checks into one certificate; the first failure wins.
class Tally
{
public:
    Tally(const std::string &suite, const std::string &identity, const std::string &anchor, const Caps &caps)
    {
        cert_.suite = suite;
        cert_.identity = identity;
        cert_.anchor = anchor;
        cert_.caps = caps.to_string();
    }

    void require(bool ok, const std::string &where, const std::string &stage, const std::string &coeff = "n/a")
    {
        ++cert_.checked;
        if (!ok && cert_.pass) {
            cert_.pass = false;
            cert_.monomial = where;
            cert_.coefficient = coeff;
            cert_.stage = stage;
        }
    }

    // Compares two series; the first differing coefficient is recorded.
    void require_agree(const TruncSeries &a, const TruncSeries &b, const std::string &where, const std::string &stage)
    {
        if (agree(a, b)) {
            require(true, where, stage);
            return;
        }
        const TruncSeries d = a - b;
        if (!d.is_zero()) {
            const auto &[m, c] = *d.terms().begin();
            require(false, where + " @ " + monomial_to_string(m, d.spec()), stage, c.to_string());
            return;
        }
        require(false, where, stage);
    }

    Certificate take()
    {
        return std::move(cert_);
    }

private:
    Certificate cert_;
};

Certificate renamed(Certificate c, std::string identity)
{
    c.identity = std::move(identity);
    return c;
}

bool tensor_zero(const Tensor3 &t)
{
    for (const auto &p : t) {
        for (const auto &r : p) {
            for (const auto &x : r) {
                if (!x.is_zero()) {
                    return false;
                }
            }
        }
    }
    return true;
}

Word random_word(Rng &rng, int len, int letters)
{
    Word w;
    for (int i = 0; i < len; ++i) {
        w.push_back(static_cast<int>(rng() % static_cast<unsigned>(letters)));
    }
    return w;
}

Rng suite_rng(const SuiteParams &p, int salt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(salt)};
    return Rng(seq);
}

std::vector<Certificate> algebra_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 1);
    const int n = p.dim();
    const int cap = p.fiber_cap;
    const Caps caps = Caps::of(0, 0, cap);
    Tally comm("algebra", "shuffle_commutative", "shuffle-product-commutative", caps);
    Tally assoc("algebra", "shuffle_associative", "shuffle-product-associative", caps);
    Tally unit("algebra", "shuffle_unit", "shuffle-product-unit", caps);
    Tally retract("algebra", "sym_project_after_include", "symmetric-projection-retracts-inclusion", caps);
    for (int t = 0; t < 100; ++t) {
        const auto a = TensorWord::word(random_word(rng, static_cast<int>(rng() % 3), n), random_grat(rng));
        const auto b = TensorWord::word(random_word(rng, static_cast<int>(rng() % 3), n), random_grat(rng));
        const auto c = TensorWord::word(random_word(rng, static_cast<int>(rng() % 3), n), random_grat(rng));
        const std::string where = "sample " + std::to_string(t);
        comm.require(shuffle(a, b) == shuffle(b, a), where, "a sh b - b sh a");
        assoc.require(shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c)), where, "(a sh b) sh c - a sh (b sh c)");
        unit.require(shuffle(a, TensorWord::unit()) == a, where, "a sh 1 - a");
    }
    for (int t = 0; t < 50; ++t) {
        SymPoly q = sym_poly(n, cap);
        q += random_series(rng, q.spec(), q.caps(), cap, 4);
        retract.require(sym_project(sym_include(q), n, cap) == q, "sample " + std::to_string(t), "project(include(p)) - p");
    }
    return {comm.take(), assoc.take(), unit.take(), retract.take()};
}

std::vector<Certificate> jets_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 2);
    const int n = p.dim();
    const int r = std::max(2, p.fiber_cap);
    const Caps caps = Caps::of(0, 0, r);
    Tally assoc("jets", "group_associative", "jet-group-associative", caps);
    Tally ident("jets", "group_identity", "jet-group-identity", caps);
    Tally inv("jets", "group_inverse", "jet-group-inverse", caps);
    Tally split("jets", "semidirect_split", "jet-group-semidirect-product", caps);
    Tally action("jets", "linear_action_on_J", "linear-group-acts-on-unipotent-jets", caps);
    const auto id = AutoJet::identity(n, r);
    for (int t = 0; t < 30; ++t) {
        const std::string where = "sample " + std::to_string(t);
        const auto a = random_autojet(rng, n, r, false);
        const auto b = random_autojet(rng, n, r, false);
        const auto c = random_autojet(rng, n, r, false);
        assoc.require(compose(compose(a, b), c) == compose(a, compose(b, c)), where, "(ab)c - a(bc)");
        ident.require(compose(a, id) == a && compose(id, a) == a, where, "a 1 - a");
        inv.require(compose(a, invert(a)) == id && compose(invert(a), a) == id, where, "a a^-1 - 1");
        const auto parts = semidirect_split(a);
        split.require(parts.j.in_J() && compose(parts.j, AutoJet::linear(parts.t, r)) == a, where, "j t - a");
        const auto j = random_autojet(rng, n, r, true);
        const auto act = g_action_on_J(compose(a, b), j);
        action.require(act.in_J() && act == g_action_on_J(a, g_action_on_J(b, j)) && g_action_on_J(id, j) == j, where,
                       "(ab).j - a.(b.j)");
    }
    return {assoc.take(), ident.take(), inv.take(), split.take(), action.take()};
}

std::vector<Certificate> connections_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 3);
    const int n = p.dim();
    const int r = std::max(2, p.fiber_cap);
    const Caps caps = Caps::of(0, 0, r);
    Tally pull("connections", "exp_pulls_back_to_euclidean", "exponential-map-pulls-back-to-euclidean", caps);
    Tally routes("connections", "exp_two_constructions", "exponential-map-uniqueness", caps);
    Tally bij("connections", "exp_bijection", "connections-biject-with-unipotent-jets", caps);
    Tally equi("connections", "exp_equivariance", "exponential-map-equivariance", caps);
    for (int t = 0; t < 8; ++t) {
        const std::string where = "connection " + std::to_string(t);
        const auto c = random_flat_connection(rng, n, r);
        const auto e = exp_jet(c);
        const auto back = pullback_connection(e, c);
        pull.require(e.in_J() && back.order() == r - 1 && tensor_zero(back.christoffels()), where,
                     "Christoffels of exp^* c");
        routes.require(exp_jet_by_pullback(c) == e, where, "recursion vs pullback solve");
        const auto again = pushforward_connection(e, ConnectionJet::euclidean(n, r - 1));
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    bij.require_agree(again.gamma(k, i, j), c.gamma(k, i, j),
                                      where + " Gamma^" + std::to_string(k) + "_" + std::to_string(i) +
                                          std::to_string(j),
                                      "exp_* euclidean - c");
                }
            }
        }
        const auto psi = random_autojet(rng, n, r + 1, false);
        const auto rep = check_equivariance(psi, c);
        equi.require(rep.holds, where + (rep.violation.empty() ? "" : " " + rep.violation), "exp(psi_* c) - psi exp(c) L^-1");
    }
    return {pull.take(), routes.take(), bij.take(), equi.take()};
}

KahlerModel model_of(const SuiteParams &p)
{
    return kahler_model(p.metric, p.base_order, p.fiber_cap);
}

std::vector<Certificate> kapranov_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 4);
    const int n = p.dim();
    const Caps caps = Caps::of(p.base_order, p.base_order, p.fiber_cap);
    std::vector<Certificate> out;
    const ChartMetric metric = p.metric.truncated(model_metric_order(p.base_order, p.fiber_cap));
    const ChartConnection conn = levi_civita(metric);

    Tally herm("kapranov", "metric_hermitian", "hermitian-metric", caps);
    herm.require(metric.hermitian(), "h", "h - conj(h)^T");
    out.push_back(herm.take());
    Tally kahler("kapranov", "metric_kahler", "kahler-condition", caps);
    kahler.require(metric.kahler(), "h", "d_k h_ij - d_i h_kj");
    out.push_back(kahler.take());
    Tally tf("kapranov", "connection_torsion_free", "chern-connection-torsion-free", caps);
    tf.require(conn.torsion_free(), "Gamma", "Gamma^k_ij - Gamma^k_ji");
    out.push_back(tf.take());
    Tally f20("kapranov", "connection_flat_20", "chern-connection-holomorphically-flat", caps);
    f20.require(conn.flat_20(), "Gamma", "(2,0) curvature");
    out.push_back(f20.take());
    Tally bianchi("kapranov", "curvature_dbar_closed", "curvature-dbar-closed", caps);
    Tally sym("kapranov", "tower_symmetric", "higher-covariant-derivatives-of-curvature", caps);
    bool have_r2 = false;
    try {
        // curvature_R itself rejects an R_2 that is not symmetric in its inputs.
        const CurvatureTensor r2 = curvature_R(conn);
        have_r2 = true;
        bianchi.require(dbar_closed(r2), "R_2", "dbar_k R_ij,l - dbar_l R_ij,k");
        const auto tower = covariant_tower(conn, r2, p.n_max);
        sym.require(static_cast<int>(tower.size()) == std::max(1, p.n_max - 1), "tower", "length");
    } catch (const DomainError &e) {
        sym.require(false, "R_n", "symmetrization of nabla R_n", e.what());
        if (!have_r2) {
            bianchi.require(false, "R_2", "R_2 not symmetric in its inputs");
        }
    }
    out.push_back(bianchi.take());
    out.push_back(sym.take());
    if (!out.back().pass) {
        // D and exp* are built from a symmetric tower.
        return out;
    }
    const auto model = model_of(p);

    out.push_back(check_D_squared(model.op));

    std::vector<BiChartForm> samples;
    for (int s = 0; s < 4; ++s) {
        samples.push_back(random_bi_form(rng, n, 3));
    }
    out.push_back(check_exp_commutator(model, samples));

    if (p.flat_metric) {
        Tally flat("kapranov", "flat_D_is_dbar", "flat-chart-taylor-expansion", caps);
        for (int s = 0; s < 6; ++s) {
            DolbeaultElement x(n, caps);
            x.add(0, random_series(rng, VarSpec::full(n), caps, 4, 5));
            flat.require(model.op.apply(x) == dbar(x), "sample " + std::to_string(s), "D x - dbar x");
        }
        for (const auto &eta : samples) {
            flat.require(exp_star(model.family, eta, caps) == restrict_to_jets(eta, caps), "sample form",
                         "exp* eta - Taylor(eta)");
        }
        out.push_back(flat.take());
    }
    return out;
}

std::vector<Certificate> section_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 5);
    const int n = p.dim();
    const Caps caps = Caps::of(p.base_order, p.base_order, p.fiber_cap);
    std::vector<Certificate> out;
    const auto model = model_of(p);
    const auto omega = omega_from_section(model.family, model.caps);

    Tally match("section", "omega_of_kahler_family", "section-defect-is-curvature-tower", caps);
    const VarSpec full = VarSpec::full(n);
    for (const auto &r : model.tower) {
        for (const auto &[key, x] : r.components()) {
            const auto &[l, w, j] = key;
            const Monomial ms = multiset_of(w, full);
            const TruncSeries expect = x * (GRat(1) / GRat(multiset_factorial(ms, full)));
            std::string ws;
            for (int a : w) {
                ws += std::to_string(a);
            }
            match.require_agree(omega[j].entry(l, ms), expect,
                                "R_" + std::to_string(w.size()) + "^" + std::to_string(l) + "_" + ws + "," +
                                    std::to_string(j),
                                "omega entry - R / prod m!");
        }
    }
    out.push_back(match.take());
    out.push_back(renamed(check_maurer_cartan(omega), "maurer_cartan/kahler_family"));

    for (int t = 0; t < 3; ++t) {
        const auto fam = random_section_family(rng, n, p.fiber_cap);
        const auto om = omega_from_section(fam, caps);
        auto cert = renamed(check_maurer_cartan(om), "maurer_cartan/random_family_" + std::to_string(t));
        out.push_back(std::move(cert));
    }
    return out;
}

std::vector<Certificate> atiyah_suite(const SuiteParams &p)
{
    Rng rng = suite_rng(p, 6);
    const int n = p.dim();
    const Caps caps = Caps::of(p.base_order, p.base_order, p.fiber_cap);
    std::vector<Certificate> out;
    for (int t = 0; t < 4; ++t) {
        const auto g = random_holomorphic_connection(rng, n);
        std::vector<BiChartForm> samples;
        for (int s = 0; s < 3; ++s) {
            samples.push_back(random_bi_form(rng, n, 3));
        }
        out.push_back(renamed(check_atiyah(g, samples, caps), "dbar_compatibility/connection_" + std::to_string(t)));
    }
    Tally flat("atiyah", "zero_connection_is_taylor", "flat-chart-taylor-expansion", caps);
    ChartConnection zero;
    const VarSpec base = VarSpec::base(n);
    zero.gamma.assign(n, std::vector<std::vector<TruncSeries>>(n, std::vector<TruncSeries>(n, TruncSeries(base))));
    for (int s = 0; s < 3; ++s) {
        const auto eta = random_bi_form(rng, n, 3);
        flat.require(atiyah_tilde_I(zero, eta, caps) == restrict_to_jets(eta, caps), "sample " + std::to_string(s),
                     "I(eta) - Taylor(eta)");
    }
    out.push_back(flat.take());
    return out;
}

using SuiteFn = std::function<std::vector<Certificate>(const SuiteParams &)>;

const std::map<std::string, SuiteFn> &registry()
{
    static const std::map<std::string, SuiteFn> r{
        {"algebra", algebra_suite},   {"jets", jets_suite},       {"connections", connections_suite},
        {"kapranov", kapranov_suite}, {"section", section_suite}, {"atiyah", atiyah_suite},
    };
    return r;
}

} // namespace

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"algebra", "jets", "connections", "kapranov", "section", "atiyah"};
    return names;
}

std::vector<Certificate> run_suite(const std::string &name, const SuiteParams &params)
{
    const auto it = registry().find(name);
    if (it == registry().end()) {
        throw std::invalid_argument("unknown suite: " + name);
    }
    try {
        return it->second(params);
    } catch (const std::exception &e) {
        Certificate c;
        c.suite = name;
        c.identity = "suite_error";
        c.anchor = "none";
        c.caps = Caps::of(params.base_order, params.base_order, params.fiber_cap).to_string();
        c.pass = false;
        c.stage = e.what();
        return {c};
    }
}

std::vector<Certificate> run_suites(const std::vector<std::string> &names, const SuiteParams &params)
{
    for (const auto &n : names) {
        if (!registry().contains(n)) {
            throw std::invalid_argument("unknown suite: " + n);
        }
    }
    std::vector<std::vector<Certificate>> results(names.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++) {
            results[i] = run_suite(names[i], params);
        }
    };
    const int nt = std::min<int>(worker_threads(), static_cast<int>(std::max<std::size_t>(names.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < nt; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }
    std::vector<Certificate> all;
    for (auto &r : results) {
        all.insert(all.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    std::stable_sort(all.begin(), all.end(), [](const Certificate &a, const Certificate &b) {
        return std::tie(a.suite, a.identity) < std::tie(b.suite, b.identity);
    });
    return all;
}

} // namespace kapranov
