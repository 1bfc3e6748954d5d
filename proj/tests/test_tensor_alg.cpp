#include <doctest.h>

#include <kapranov/tensor_alg.hpp>

#include "test_support.hpp"

using namespace kapranov;
using namespace kapranov::testing;

namespace
{

TensorWord random_word_combo(Rng &rng, int dim, int max_len)
{
    TensorWord t;
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> letter(0, dim - 1);
    const int terms = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < terms; ++k) {
        Word w(len(rng));
        for (auto &x : w) {
            x = letter(rng);
        }
        t.add(w, random_grat(rng));
    }
    return t;
}

} // namespace

TEST_CASE("shuffle examples")
{
    const auto v1 = TensorWord::word({0});
    const auto v2 = TensorWord::word({1});
    CHECK(shuffle(v1, v2) == TensorWord::word({0, 1}) + TensorWord::word({1, 0}));
    const auto w = TensorWord::word({0, 1, 1}, GRat(3));
    CHECK(shuffle(TensorWord::unit(), w) == w);
    CHECK(shuffle(TensorWord::word({0, 0}), TensorWord::word({0})) == TensorWord::word({0, 0, 0}, GRat(3)));
}

TEST_CASE("shuffle is commutative and associative")
{
    Rng rng(1);
    for (int t = 0; t < 60; ++t) {
        const auto a = random_word_combo(rng, 3, 2);
        const auto b = random_word_combo(rng, 3, 2);
        const auto c = random_word_combo(rng, 3, 2);
        CHECK(shuffle(a, b) == shuffle(b, a));
        CHECK(shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c)));
    }
}

TEST_CASE("sym include and project")
{
    const int dim = 2;
    auto v1v2 = sym_poly(dim, 6);
    v1v2.add_term(multiset_of(std::vector<int>{0, 1}, v1v2.spec()), GRat(1));
    CHECK(sym_include(v1v2) == TensorWord::word({0, 1}) + TensorWord::word({1, 0}));
    auto unit = sym_poly(dim, 6);
    unit.add_term(Monomial{}, GRat(1));
    CHECK(sym_include(unit) == TensorWord::unit());
    auto vv = sym_poly(dim, 6);
    vv.add_term(multiset_of(std::vector<int>{0, 0}, vv.spec()), GRat(1));
    CHECK(sym_include(vv) == TensorWord::word({0, 0}, GRat(2)));

    auto half = sym_poly(dim, 6);
    half.add_term(multiset_of(std::vector<int>{0, 0}, half.spec()), GRat(1, 2));
    CHECK(sym_project(TensorWord::word({0, 0}), dim, 6) == half);
    CHECK(sym_project(TensorWord::unit(), dim, 6) == unit);

    Rng rng(2);
    for (int t = 0; t < 40; ++t) {
        const auto p = random_series(rng, VarSpec::fiber(3), Caps::of(0, 0, 6), 5, 5);
        CHECK(sym_project(sym_include(p), 3, 6) == p);
        const auto p3 = random_series(rng, VarSpec::fiber(3), Caps::of(0, 0, 6), 3, 3);
        const auto q = random_series(rng, VarSpec::fiber(3), Caps::of(0, 0, 6), 3, 3);
        // Both maps are algebra morphisms.
        CHECK(sym_include(p3 * q) == shuffle(sym_include(p3), sym_include(q)));
        const auto a = random_word_combo(rng, 3, 3);
        const auto b = random_word_combo(rng, 3, 3);
        CHECK(agree(sym_project(shuffle(a, b), 3, 6), sym_project(a, 3, 6) * sym_project(b, 3, 6)));
    }
    CHECK_THROWS_AS(sym_include(TruncSeries(VarSpec::full(1))), ShapeError);
}

TEST_CASE("derivation extension")
{
    const VarSpec f1 = VarSpec::fiber(1);
    const auto u = var(f1, Group::fiber, 0);
    const HomTensor sq({u * u});
    auto uk = cst(f1, GRat(1));
    for (int k = 1; k <= 6; ++k) {
        uk = uk * u;
        CHECK(derivation_extend(sq, uk) == GRat(k) * uk * u);
    }
    const auto zero = HomTensor::zero(f1, Caps::exact());
    CHECK(derivation_extend(zero, uk).is_zero());
    CHECK(derivation_extend(sq, cst(f1, GRat(5))).is_zero());
    CHECK(sq.degree() == 2);
}

TEST_CASE("derivation Leibniz and bracket on random data")
{
    Rng rng(9);
    const VarSpec spec = VarSpec::full(2);
    const int cap = 5;
    const Caps caps = Caps::of(3, 3, cap);
    auto random_hom = [&](int deg) {
        std::vector<TruncSeries> imgs;
        for (int j = 0; j < 2; ++j) {
            TruncSeries s(spec, caps);
            for (int t = 0; t < 3; ++t) {
                Monomial m;
                for (int k = 0; k < deg; ++k) {
                    m.e[spec.var(Group::fiber, static_cast<int>(rng() % 2))] += 1;
                }
                m.e[rng() % 4] += static_cast<std::uint8_t>(rng() % 2);
                s.add_term(m, random_grat(rng));
            }
            imgs.push_back(s);
        }
        return HomTensor(imgs);
    };
    for (int t = 0; t < 15; ++t) {
        const auto r = random_hom(2);
        const auto a = random_series(rng, spec, caps, 4, 5);
        const auto b = random_series(rng, spec, caps, 4, 5);
        const auto lhs = derivation_extend(r, a * b, cap);
        const auto rhs = derivation_extend(r, a, cap) * b + a * derivation_extend(r, b, cap);
        CHECK(agree(lhs, rhs));

        const auto x = random_hom(2);
        const auto y = random_hom(3);
        const auto br = derivation_bracket(x, y, cap);
        const auto f = random_series(rng, spec, caps, 3, 4);
        const auto direct =
            derivation_extend(x, derivation_extend(y, f, cap), cap) - derivation_extend(y, derivation_extend(x, f, cap), cap);
        CHECK(agree(derivation_extend(br, f, cap), direct));
    }
}
