#include <doctest.h>

#include <kapranov/formal_conn.hpp>

#include "test_support.hpp"

using namespace kapranov;
using namespace kapranov::testing;

namespace
{

const VarSpec kU1 = VarSpec::fiber(1);

ConnectionJet constant_connection_1d(const GRat &c, int order)
{
    Tensor3 g(1, std::vector<std::vector<TruncSeries>>(1, {cst(kU1, c, Caps::of(0, 0, order - 1))}));
    return ConnectionJet(g, order);
}

bool tensor_is_zero(const Tensor3 &t)
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

} // namespace

TEST_CASE("euclidean connection")
{
    const auto e = ConnectionJet::euclidean(2, 4);
    CHECK(e.torsion_free());
    CHECK(e.flat());
    CHECK(exp_jet(e) == AutoJet::identity(2, 4));

    // The displayed derivative formula on symmetric monomials.
    const int dim = 3;
    auto check_formula = [&](std::vector<int> word) {
        auto p = sym_poly(dim, 6);
        p.add_term(multiset_of(word, p.spec()), GRat(1));
        std::vector<SymPoly> expect(dim, sym_poly(dim, 6));
        for (std::size_t i = 0; i < word.size(); ++i) {
            std::vector<int> rest = word;
            rest.erase(rest.begin() + static_cast<long>(i));
            expect[word[i]].add_term(multiset_of(rest, p.spec()), GRat(1));
        }
        const auto got = euclidean_action(p);
        for (int j = 0; j < dim; ++j) {
            CHECK(agree(got[j], expect[j]));
        }
    };
    check_formula({1});
    check_formula({0, 2});
    check_formula({1, 1, 2});
    auto c = sym_poly(dim, 6);
    c.add_term(Monomial{}, GRat(5));
    for (const auto &x : euclidean_action(c)) {
        CHECK(x.is_zero());
    }
}

TEST_CASE("torsion")
{
    const VarSpec f2 = VarSpec::fiber(2);
    Tensor3 g(2, std::vector<std::vector<TruncSeries>>(2, std::vector<TruncSeries>(2, TruncSeries(f2))));
    g[0][0][1] = cst(f2, GRat(1));
    const ConnectionJet c(g, 3);
    const auto t = torsion(c);
    CHECK(t[0][0][1] == cst(f2, GRat(1), Caps::of(0, 0, 2)));
    CHECK(t[0][1][0] == cst(f2, GRat(-1), Caps::of(0, 0, 2)));
    CHECK_FALSE(c.torsion_free());
    CHECK_THROWS_AS(exp_jet(c), DomainError);
    CHECK(tensor_is_zero(torsion(ConnectionJet::euclidean(2, 3))));
}

TEST_CASE("curvature of formal connections")
{
    for (const auto &t : curvature_of_formal(constant_connection_1d(GRat(3), 4))) {
        CHECK(tensor_is_zero(t));
    }
    // Brute-force oracle: expand the commutator of covariant derivatives on a
    // generic covector field instead of using the closed formula.
    Rng rng(21);
    const VarSpec f2 = VarSpec::fiber(2);
    for (int trial = 0; trial < 5; ++trial) {
        Tensor3 g(2, std::vector<std::vector<TruncSeries>>(2, std::vector<TruncSeries>(2)));
        for (int k = 0; k < 2; ++k) {
            for (int i = 0; i < 2; ++i) {
                for (int j = i; j < 2; ++j) {
                    g[k][i][j] = random_series(rng, f2, Caps::of(0, 0, 3), 2, 3);
                    g[k][j][i] = g[k][i][j];
                }
            }
        }
        const ConnectionJet c(g, 4);
        const auto r = curvature_of_formal(c);
        bool nonzero = false;
        for (int l = 0; l < 2; ++l) {
            // Apply nabla twice to the coordinate function u_l through the
            // covector tower and antisymmetrize: (nabla_i nabla_j - nabla_j
            // nabla_i) of a covector equals minus the curvature action.
            const auto tower = covector_tower(g, var(f2, Group::fiber, l), 3);
            for (int k = 0; k < 2; ++k) {
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        const TruncSeries comm = tower[3].at({i, j, k}) - tower[3].at({j, i, k});
                        TruncSeries act(f2);
                        for (int m = 0; m < 2; ++m) {
                            act += r[m][k][i][j] * tower[1].at({m});
                        }
                        CHECK(agree(comm, -act));
                        nonzero = nonzero || !r[l][k][i][j].is_zero();
                    }
                }
            }
        }
        CHECK(nonzero);
    }
}

TEST_CASE("exponential map in dimension one")
{
    const GRat c(2, 3);
    const auto e = exp_jet(constant_connection_1d(c, 5));
    // log(1 + c u) / c = sum_k (-1)^{k+1} c^{k-1} u^k / k
    TruncSeries oracle(kU1, Caps::of(0, 0, 5));
    GRat ck(1);
    for (int k = 1; k <= 5; ++k) {
        oracle.add_term(make_monomial({k}), ck * GRat(k % 2 ? 1 : -1, k));
        ck *= c;
    }
    CHECK(e.component(0) == oracle);
    CHECK(exp_jet_by_pullback(constant_connection_1d(c, 5)) == e);

    // Geodesic oracle: z'' + c z'^2 = 0 with z(0)=0, z'(0)=1 solved by series.
    std::vector<GRat> a(6);
    a[1] = GRat(1);
    for (int n = 0; n + 2 <= 5; ++n) {
        GRat s;
        for (int i = 1; i <= n + 1; ++i) {
            const int j = n + 2 - i;
            if (j >= 1 && j <= 5) {
                s += GRat(i) * a[i] * GRat(j) * a[j];
            }
        }
        a[n + 2] = -c * s / GRat((n + 2) * (n + 1));
    }
    for (int k = 1; k <= 5; ++k) {
        CHECK(e.component(0).coeff(make_monomial({k})) == a[k]);
    }
}

TEST_CASE("exponential map pulls back to the euclidean connection")
{
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
        const auto c = random_flat_connection(rng, 2, 4);
        CHECK(c.torsion_free());
        CHECK(c.flat());
        const auto e = exp_jet(c);
        CHECK(e.in_J());
        const auto back = pullback_connection(e, c);
        CHECK(back.order() == 3);
        CHECK(tensor_is_zero(back.christoffels()));
        CHECK(exp_jet_by_pullback(c) == e);
        // Bijection: pushing the Euclidean connection along exp gives c back.
        const auto again = pushforward_connection(e, ConnectionJet::euclidean(2, 3));
        for (int k = 0; k < 2; ++k) {
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    CHECK(agree(again.gamma(k, i, j), c.gamma(k, i, j)));
                }
            }
        }
    }
}

TEST_CASE("pushforward")
{
    Rng rng(41);
    const auto c = random_flat_connection(rng, 2, 3);
    const auto pushed = pushforward_connection(AutoJet::identity(2, 4), c);
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(pushed.gamma(k, i, j) == c.gamma(k, i, j));
            }
        }
    }
    const Matrix t{{GRat(2), GRat(1)}, {GRat(0), GRat(-1)}};
    const auto lin = pushforward_connection(AutoJet::linear(t, 4), ConnectionJet::euclidean(2, 3));
    CHECK(tensor_is_zero(lin.christoffels()));
    // Dimension one: pushing the Euclidean connection along exp of a constant
    // connection returns that constant.
    const GRat cc(-3, 2);
    const auto e = exp_jet(constant_connection_1d(cc, 5));
    const auto back = pushforward_connection(e, ConnectionJet::euclidean(1, 4));
    CHECK(back.gamma(0, 0, 0) == cst(kU1, cc, Caps::of(0, 0, 3)));
}

TEST_CASE("equivariance")
{
    const auto id = AutoJet::identity(2, 5);
    Rng rng(51);
    const auto c = random_flat_connection(rng, 2, 4);
    CHECK(check_equivariance(id, c).holds);
    const Matrix t{{GRat(1), GRat(3)}, {GRat(-1), GRat(1, 2)}};
    const auto rep0 = check_equivariance(AutoJet::linear(t, 5), ConnectionJet::euclidean(2, 4));
    CHECK(rep0.holds);
    for (int k = 0; k < 3; ++k) {
        const auto psi = random_autojet(rng, 2, 5, false);
        const auto ck = random_flat_connection(rng, 2, 4);
        const auto rep = check_equivariance(psi, ck);
        CHECK(rep.order_checked == 4);
        CHECK_MESSAGE(rep.holds, rep.violation);
    }
}
