#include <doctest.h>

#include <kapranov/linalg.hpp>
#include <kapranov/series.hpp>

#include "test_support.hpp"

using namespace kapranov;
using namespace kapranov::testing;

namespace
{

const VarSpec kBase1 = VarSpec::base(1);
const VarSpec kU1 = VarSpec::fiber(1);

} // namespace

TEST_CASE("gaussian rational arithmetic")
{
    const GRat a(mpq_class(1, 2), mpq_class(3));
    const GRat b(mpq_class(-2), mpq_class(1, 3));
    CHECK((a * b) / b == a);
    CHECK(a.conj().conj() == a);
    CHECK(GRat::i() * GRat::i() == GRat(-1));
    CHECK_THROWS_AS(a / GRat(0), std::domain_error);
    CHECK(factorial(5) == 120);
}

TEST_CASE("add keeps the smaller cap")
{
    const auto z2 = var(kBase1, Group::holo, 0, Caps::of(2, kExact, kExact));
    // z + O(z^2) squared is known one order further.
    const auto z1 = var(kBase1, Group::holo, 0, Caps::of(1, kExact, kExact));
    CHECK((z1 * z1).caps()[Group::holo] == 2);
    TruncSeries zsq_cap1(kBase1, Caps::of(1, kExact, kExact));
    zsq_cap1.add_term(make_monomial({2, 0}), GRat(1));
    const auto sum = z2 + zsq_cap1;
    CHECK(sum.caps()[Group::holo] == 1);
    CHECK(sum == var(kBase1, Group::holo, 0, Caps::of(1, kExact, kExact)));

    const auto one = cst(kBase1, GRat(1));
    const auto zb = var(kBase1, Group::antiholo, 0);
    const auto z = var(kBase1, Group::holo, 0);
    auto s = one + z + zb;
    CHECK(s.size() == 3);
    CHECK(s + TruncSeries(kBase1) == s);
}

TEST_CASE("mul examples")
{
    const auto z = var(kBase1, Group::holo, 0);
    const auto zb = var(kBase1, Group::antiholo, 0);
    const auto one = cst(kBase1, GRat(1));
    const auto p = (one + z) * (one + zb);
    CHECK(p.coeff(make_monomial({1, 1})) == GRat(1));
    CHECK(p.size() == 4);
    CHECK(p * one == p);

    const Caps c3 = Caps::of(kExact, kExact, 3);
    const auto u = var(kU1, Group::fiber, 0, c3);
    const auto o = cst(kU1, GRat(1), c3);
    const auto q = (o - u) * (o + u + u * u + u * u * u);
    CHECK(q.caps()[Group::fiber] == 3);
    CHECK(q == o);
}

TEST_CASE("product caps use guaranteed valuations")
{
    // u^2 known to order 3 times something known to order 1 is known to order 3.
    TruncSeries a(kU1, Caps::of(0, 0, 3));
    a.add_term(make_monomial({2}), GRat(1));
    TruncSeries b(kU1, Caps::of(0, 0, 1));
    b.add_term(make_monomial({0}), GRat(1));
    b.add_term(make_monomial({1}), GRat(2));
    const auto p = a * b;
    CHECK(p.caps()[Group::fiber] == 3);
    CHECK(p.coeff(make_monomial({3})) == GRat(2));
}

TEST_CASE("partial derivatives")
{
    const auto z = var(kBase1, Group::holo, 0);
    const auto zb = var(kBase1, Group::antiholo, 0);
    CHECK(partial(z * zb * zb, 1) == GRat(2) * z * zb);
    const auto c = cst(kU1, GRat(7));
    CHECK(partial(c, 0).is_zero());

    // d/dz (1+z zb)^{-2} against the binomial series sum (-1)^k (k+1) x^k.
    const Caps c3 = Caps::of(3, 3, kExact);
    const auto one = cst(kBase1, GRat(1), c3);
    const auto x = var(kBase1, Group::holo, 0, c3) * var(kBase1, Group::antiholo, 0, c3);
    const auto s = one + x;
    const auto f = inverse(s * s);
    const auto df = partial(f, 0);
    CHECK(df.caps()[Group::holo] == 2);
    TruncSeries oracle(kBase1, df.caps());
    for (int k = 1; k <= 3; ++k) {
        const long sign = k % 2 ? -1 : 1;
        oracle.add_term(make_monomial({k - 1, k}), GRat(sign * (k + 1) * k));
    }
    CHECK(df == oracle);
    CHECK(df.coeff(make_monomial({0, 1})) == GRat(-2));
    CHECK(df.coeff(make_monomial({1, 2})) == GRat(6));
}

TEST_CASE("substitute")
{
    const Caps c3 = Caps::of(kExact, kExact, 3);
    const auto u = var(kU1, Group::fiber, 0, c3);
    const auto a = u * u;
    std::vector<TruncSeries> id{var(kU1, Group::fiber, 0)};
    CHECK(substitute(a, id, kU1, a.caps()) == a);
    std::vector<TruncSeries> img{u + u * u};
    TruncSeries expect(kU1, c3);
    expect.add_term(make_monomial({2}), GRat(1));
    expect.add_term(make_monomial({3}), GRat(2));
    CHECK(substitute(a, img, kU1, c3) == expect);

    std::vector<TruncSeries> bad{u + cst(kU1, GRat(1), c3)};
    CHECK_THROWS_AS(substitute(a, bad, kU1, c3), DomainError);
    std::vector<TruncSeries> too_few;
    CHECK_THROWS_AS(substitute(a, too_few, kU1, c3), ShapeError);
}

TEST_CASE("substitute lowers caps only where needed")
{
    // Fiber variable u at order 3 with a parameter-dependent image u + z u^2.
    const VarSpec full = VarSpec::full(1);
    const Caps caps = Caps::of(4, 4, 3);
    const auto u = var(full, Group::fiber, 0, caps);
    const auto z = var(full, Group::holo, 0, caps);
    const auto zb = var(full, Group::antiholo, 0, caps);
    std::vector<TruncSeries> img{z, zb, u + z * u * u};
    const auto r = substitute(u * u * u, img, full, caps);
    CHECK(r.caps() == caps);
    CHECK(r.coeff(make_monomial({0, 0, 3})) == GRat(1));
    // Images mixing z and u for a variable of finite order force a cap cut.
    std::vector<TruncSeries> shift{z, zb, u};
    TruncSeries h(VarSpec::full(1), Caps::of(4, 4, 3));
    h.add_term(make_monomial({2, 0, 0}), GRat(1));
    std::vector<TruncSeries> zu{z + u, zb, u};
    const auto hs = substitute(h, zu, full, Caps::of(4, 4, 3));
    CHECK(hs.caps()[Group::holo] + hs.caps()[Group::fiber] <= 4);
    CHECK(hs.coeff(make_monomial({1, 0, 1})) == GRat(2));
}

TEST_CASE("conjugation")
{
    const auto z = var(kBase1, Group::holo, 0);
    const auto zb = var(kBase1, Group::antiholo, 0);
    CHECK(conj_series(GRat::i() * z) == -(GRat::i() * zb));
    const auto h = cst(kBase1, GRat(1)) + GRat(2) * z * zb;
    CHECK(conj_series(h) == h);
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_series(rng, VarSpec::full(2), Caps::of(3, 2, 4), 4, 8);
        CHECK(conj_series(conj_series(a)) == a);
    }
}

TEST_CASE("ring axioms on random series")
{
    Rng rng(7);
    const VarSpec spec{2, 1, 1};
    for (int t = 0; t < 40; ++t) {
        const auto a = random_series(rng, spec, Caps::of(3, 2, 3), 4, 6);
        const auto b = random_series(rng, spec, Caps::of(2, 3, 3), 4, 6);
        const auto c = random_series(rng, spec, Caps::of(3, 3, 2), 4, 6);
        CHECK(agree((a * b) * c, a * (b * c)));
        CHECK(agree(a * b, b * a));
        CHECK(agree(a * (b + c), a * b + a * c));
        for (int v = 0; v < spec.total(); ++v) {
            for (int w = 0; w < spec.total(); ++w) {
                CHECK(partial(partial(a, v), w) == partial(partial(a, w), v));
            }
            CHECK(agree(partial(a * b, v), partial(a, v) * b + a * partial(b, v)));
        }
    }
}

TEST_CASE("substitute is an algebra morphism")
{
    Rng rng(3);
    const VarSpec spec = VarSpec::fiber(2);
    const Caps caps = Caps::of(0, 0, 5);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_series(rng, spec, caps, 5, 6);
        const auto b = random_series(rng, spec, caps, 5, 6);
        std::vector<TruncSeries> img{random_series(rng, spec, caps, 3, 4, false),
                                     random_series(rng, spec, caps, 3, 4, false)};
        const auto lhs = substitute(a * b, img, spec, caps);
        const auto rhs = substitute(a, img, spec, caps) * substitute(b, img, spec, caps);
        CHECK(agree(lhs, rhs));
    }
}

TEST_CASE("inverse and series matrices")
{
    Rng rng(5);
    const VarSpec spec{1, 1, 1};
    const Caps caps = Caps::of(3, 3, 2);
    for (int t = 0; t < 10; ++t) {
        auto a = random_series(rng, spec, caps, 3, 6, false);
        a.add_term(Monomial{}, GRat(2));
        const auto one = cst(spec, GRat(1), caps);
        CHECK(agree(a * inverse(a), one));
    }
    CHECK_THROWS_AS(inverse(var(kU1, Group::fiber, 0, Caps::of(0, 0, 3))), DomainError);
    CHECK_THROWS_AS(inverse(cst(kBase1, GRat(1)) + var(kBase1, Group::holo, 0)), DomainError);

    SeriesMatrix m(2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            auto x = random_series(rng, spec, caps, 3, 4, false);
            if (i == j) {
                x.add_term(Monomial{}, GRat(i + 1));
            }
            m[i].push_back(x);
        }
    }
    const auto prod = series_mat_mul(m, series_mat_inverse(m));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(agree(prod[i][j], cst(spec, GRat(i == j ? 1 : 0), caps)));
        }
    }
    CHECK_THROWS_AS(mat_inverse(Matrix{{GRat(1), GRat(2)}, {GRat(2), GRat(4)}}), DomainError);
}

TEST_CASE("embed, split and restrict")
{
    const VarSpec full = VarSpec::full(1);
    const auto u = var(full, Group::fiber, 0);
    const auto z = var(full, Group::holo, 0);
    const auto s = z * u * u + z + u;
    const auto parts = split_fiber(s);
    CHECK(parts.size() == 3);
    CHECK(restrict_fiber_to_zero(s) == var(VarSpec::base(1), Group::holo, 0));
    const auto e = embed(var(VarSpec::base(1), Group::holo, 0), full);
    CHECK(e == z);
}
