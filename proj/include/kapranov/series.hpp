#ifndef KAPRANOV_SERIES_HPP
#define KAPRANOV_SERIES_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <kapranov/gaussian_rational.hpp>

namespace kapranov
{

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a requested computation needs more tracked order than the
// inputs carry.
struct OrderError : std::runtime_error {
    OrderError(const std::string &what, int max_feasible)
        : std::runtime_error(what), max_feasible(max_feasible)
    {
    }
    int max_feasible;
};

// Variable groups. Base-holomorphic z, base-antiholomorphic zbar, fiber u.
enum class Group : std::uint8_t { holo = 0, antiholo = 1, fiber = 2 };

inline constexpr int kGroups = 3;
inline constexpr std::array<Group, 3> kAllGroups{Group::holo, Group::antiholo, Group::fiber};

// Cap value standing for "known exactly in this group".
inline constexpr int kExact = 1 << 20;

inline constexpr std::size_t kMaxVars = 16;

inline int cap_add(int a, int b)
{
    if (a >= kExact || b >= kExact) {
        return kExact;
    }
    return std::min(a + b, kExact);
}

struct VarSpec {
    int n_z = 0;
    int n_zb = 0;
    int n_u = 0;

    static VarSpec base(int n)
    {
        return {n, n, 0};
    }
    static VarSpec full(int n)
    {
        return {n, n, n};
    }
    static VarSpec fiber(int n)
    {
        return {0, 0, n};
    }

    int count(Group g) const
    {
        switch (g) {
            case Group::holo:
                return n_z;
            case Group::antiholo:
                return n_zb;
            default:
                return n_u;
        }
    }
    int offset(Group g) const
    {
        switch (g) {
            case Group::holo:
                return 0;
            case Group::antiholo:
                return n_z;
            default:
                return n_z + n_zb;
        }
    }
    int total() const
    {
        return n_z + n_zb + n_u;
    }
    int var(Group g, int i) const
    {
        return offset(g) + i;
    }
    Group group_of(int v) const
    {
        if (v < n_z) {
            return Group::holo;
        }
        if (v < n_z + n_zb) {
            return Group::antiholo;
        }
        return Group::fiber;
    }
    friend bool operator==(const VarSpec &, const VarSpec &) = default;
};

struct Caps {
    std::array<int, 3> r{kExact, kExact, kExact};

    static Caps exact()
    {
        return {};
    }
    static Caps of(int z, int zb, int u)
    {
        return Caps{{z, zb, u}};
    }
    int operator[](Group g) const
    {
        return r[static_cast<int>(g)];
    }
    int &operator[](Group g)
    {
        return r[static_cast<int>(g)];
    }
    // Groups whose count is zero in spec are irrelevant and reported exact.
    Caps normalized(const VarSpec &spec) const;
    bool all_exact() const
    {
        return r[0] >= kExact && r[1] >= kExact && r[2] >= kExact;
    }
    friend Caps min(const Caps &a, const Caps &b)
    {
        return Caps{{std::min(a.r[0], b.r[0]), std::min(a.r[1], b.r[1]), std::min(a.r[2], b.r[2])}};
    }
    friend bool operator==(const Caps &, const Caps &) = default;
    std::string to_string() const;
};

// Exponent vector, one slot per variable of a VarSpec.
struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};

    std::uint8_t operator[](std::size_t i) const
    {
        return e[i];
    }
    std::uint8_t &operator[](std::size_t i)
    {
        return e[i];
    }
    int degree() const
    {
        int d = 0;
        for (auto x : e) {
            d += x;
        }
        return d;
    }
    int group_degree(const VarSpec &spec, Group g) const
    {
        int d = 0;
        const int o = spec.offset(g);
        for (int i = 0; i < spec.count(g); ++i) {
            d += e[o + i];
        }
        return d;
    }
    friend Monomial operator*(const Monomial &a, const Monomial &b)
    {
        Monomial m;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            m.e[i] = static_cast<std::uint8_t>(a.e[i] + b.e[i]);
        }
        return m;
    }
    friend bool operator<(const Monomial &a, const Monomial &b)
    {
        return std::memcmp(a.e.data(), b.e.data(), kMaxVars) < 0;
    }
    friend bool operator==(const Monomial &a, const Monomial &b)
    {
        return a.e == b.e;
    }
};

Monomial make_monomial(std::initializer_list<int> exps);
// z0^2*zb1*u0 style, "1" for the empty monomial.
std::string monomial_to_string(const Monomial &m, const VarSpec &spec);

// Sparse truncated power series over the Gaussian rationals. The stored
// coefficients are exactly those within the reliable caps; anything of larger
// group degree in some group is unknown and never stored.
class TruncSeries
{
public:
    using Terms = std::map<Monomial, GRat>;

    TruncSeries() = default;
    explicit TruncSeries(const VarSpec &spec, const Caps &caps = Caps::exact());

    static TruncSeries constant(const VarSpec &spec, const GRat &c, const Caps &caps = Caps::exact());
    static TruncSeries variable(const VarSpec &spec, int var, const Caps &caps = Caps::exact());
    static TruncSeries variable(const VarSpec &spec, Group g, int i, const Caps &caps = Caps::exact())
    {
        return variable(spec, spec.var(g, i), caps);
    }
    static TruncSeries monomial(const VarSpec &spec, const Monomial &m, const GRat &c,
                                const Caps &caps = Caps::exact());

    const VarSpec &spec() const
    {
        return spec_;
    }
    const Caps &caps() const
    {
        return caps_;
    }
    const Terms &terms() const
    {
        return terms_;
    }
    std::size_t size() const
    {
        return terms_.size();
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    // No coefficient at all is reliable.
    bool is_void() const;

    GRat coeff(const Monomial &m) const;
    GRat constant_term() const
    {
        return coeff(Monomial{});
    }
    bool within_caps(const Monomial &m) const;

    // Adds c*m when m lies within caps; silently dropped otherwise.
    void add_term(const Monomial &m, const GRat &c);

    // Minimal group degree over stored terms (kExact when none are stored).
    int valuation(Group g) const;
    // Lower bound for the group valuation of the true series, accounting for
    // unknown terms beyond caps.
    int guaranteed_valuation(Group g) const;
    int total_valuation() const;

    TruncSeries truncated(const Caps &caps) const;

    TruncSeries &operator+=(const TruncSeries &o);
    TruncSeries &operator-=(const TruncSeries &o);
    TruncSeries &operator*=(const GRat &c);

    friend TruncSeries operator+(TruncSeries a, const TruncSeries &b)
    {
        return a += b;
    }
    friend TruncSeries operator-(TruncSeries a, const TruncSeries &b)
    {
        return a -= b;
    }
    friend TruncSeries operator-(const TruncSeries &a);
    friend TruncSeries operator*(TruncSeries a, const GRat &c)
    {
        return a *= c;
    }
    friend TruncSeries operator*(const GRat &c, TruncSeries a)
    {
        return a *= c;
    }
    friend TruncSeries operator*(const TruncSeries &a, const TruncSeries &b);

    // Equality of stored data, including caps.
    friend bool operator==(const TruncSeries &a, const TruncSeries &b)
    {
        return a.spec_ == b.spec_ && a.caps_ == b.caps_ && a.terms_ == b.terms_;
    }

    std::string to_string() const;

private:
    void drop_beyond_caps();

    VarSpec spec_{};
    Caps caps_{};
    Terms terms_{};
};

TruncSeries add(const TruncSeries &a, const TruncSeries &b);
TruncSeries mul(const TruncSeries &a, const TruncSeries &b);

// Product of the stored parts cut at caps. The caller vouches that caps are
// reliable for the true product.
TruncSeries mul_truncated(const TruncSeries &a, const TruncSeries &b, const Caps &caps);

// a and b agree on every coefficient reliable in both.
bool agree(const TruncSeries &a, const TruncSeries &b);

TruncSeries partial(const TruncSeries &a, int var);

// Composition a(images). images[v] is the image of source variable v and is
// expressed over target. Result caps are the requested caps lowered as needed
// to stay reliable; when a cap must drop and several groups are involved the
// holomorphic cap is lowered first, then the antiholomorphic one, then the
// fiber one.
TruncSeries substitute(const TruncSeries &a, std::span<const TruncSeries> images, const VarSpec &target,
                       const Caps &requested);

// Conjugates coefficients and swaps the z and zbar groups.
TruncSeries conj_series(const TruncSeries &a);

// Every stored term has positive degree in some group with a finite cap, so
// powers of a eventually leave the caps.
bool nilpotent_mod_caps(const TruncSeries &a);

// Multiplicative inverse; the constant term must be nonzero.
TruncSeries inverse(const TruncSeries &a);

// Re-expresses a series over a wider spec with the same group layout prefix
// (new variables are appended per group and absent from a). New groups that
// a did not have are exact.
TruncSeries embed(const TruncSeries &a, const VarSpec &wider);

// Sets every fiber variable to zero and returns the result over the spec
// without fiber variables.
TruncSeries restrict_fiber_to_zero(const TruncSeries &a);

// Splits a by fiber exponent: fiber monomial -> coefficient over the base spec.
std::map<Monomial, TruncSeries> split_fiber(const TruncSeries &a);

} // namespace kapranov

#endif
