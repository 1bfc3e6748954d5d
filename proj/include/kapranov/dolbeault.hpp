#ifndef KAPRANOV_DOLBEAULT_HPP
#define KAPRANOV_DOLBEAULT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <kapranov/formal_conn.hpp>
#include <kapranov/kahler.hpp>

namespace kapranov
{

// Outcome of one identity check.
struct Certificate {
    std::string suite;
    std::string identity;
    std::string anchor;
    std::string caps;
    bool pass = true;
    // Filled on failure.
    std::string monomial;
    std::string coefficient;
    std::string stage;
    // Number of samples or basis elements examined.
    long checked = 0;
};

// Hardware concurrency, capped by the KAPRANOV_THREADS environment variable.
int worker_threads();

// dzbar_S is encoded as a bit mask with bit j for dzbar_j; the wedge order is
// increasing j.
using FormMask = std::uint32_t;

// Sign of dzbar_A ^ dzbar_B rewritten as +-dzbar_{A|B}; 0 when they overlap.
int wedge_sign(FormMask a, FormMask b);

// (0,q)-forms with values in the completed symmetric algebra of T*X, on a
// chart: each coefficient is a series over full(n) with caps (B, B, N).
class DolbeaultElement
{
public:
    DolbeaultElement() = default;
    DolbeaultElement(int dim, const Caps &caps);
    static DolbeaultElement function(const TruncSeries &f);

    int dim() const
    {
        return dim_;
    }
    VarSpec spec() const
    {
        return VarSpec::full(dim_);
    }
    const Caps &caps() const
    {
        return caps_;
    }
    const std::map<FormMask, TruncSeries> &forms() const
    {
        return forms_;
    }
    TruncSeries coefficient(FormMask mask) const;

    // Adds x in front of dzbar_mask. Caps shrink to those of x when lower.
    void add(FormMask mask, const TruncSeries &x);
    // Common form degree, -1 when mixed; 0 for the zero element.
    int degree() const;
    bool is_zero() const;
    DolbeaultElement truncated(const Caps &caps) const;
    // Piece of fiber degree d.
    DolbeaultElement fiber_part(int d) const;

    DolbeaultElement &operator+=(const DolbeaultElement &o);
    DolbeaultElement &operator-=(const DolbeaultElement &o);
    DolbeaultElement &operator*=(const GRat &c);
    friend DolbeaultElement operator+(DolbeaultElement a, const DolbeaultElement &b)
    {
        return a += b;
    }
    friend DolbeaultElement operator-(DolbeaultElement a, const DolbeaultElement &b)
    {
        return a -= b;
    }
    friend DolbeaultElement operator-(DolbeaultElement a)
    {
        return a *= GRat(-1);
    }
    // Wedge product of forms together with the product of coefficients.
    friend DolbeaultElement operator*(const DolbeaultElement &a, const DolbeaultElement &b);
    friend bool operator==(const DolbeaultElement &, const DolbeaultElement &) = default;

    std::string to_string() const;

private:
    void shrink(const Caps &caps);

    int dim_ = 0;
    Caps caps_{};
    std::map<FormMask, TruncSeries> forms_;
};

// Equal on every coefficient reliable in both.
bool agree(const DolbeaultElement &a, const DolbeaultElement &b);
// Describes the first coefficient where a and b differ, as (mask and
// monomial, value of a - b).
std::optional<std::pair<std::string, std::string>> first_difference(const DolbeaultElement &a,
                                                                    const DolbeaultElement &b);

DolbeaultElement dbar(const DolbeaultElement &x);

// D = dbar + sum_n Rtilde_n acting on DolbeaultElement with fixed caps.
class KapranovOperator
{
public:
    // tower = [R_2, ..., R_m] in the tangent convention; caps = (B, B, N).
    KapranovOperator(const std::vector<CurvatureTensor> &tower, const Caps &caps);
    static KapranovOperator flat(int dim, const Caps &caps);

    int dim() const
    {
        return static_cast<int>(directions_.size());
    }
    const Caps &caps() const
    {
        return caps_;
    }
    // Cotangent-convention action in the dzbar_j slot, all degrees summed.
    const HomTensor &direction(int j) const
    {
        return directions_.at(j);
    }
    DolbeaultElement curvature_part(const DolbeaultElement &x) const;
    DolbeaultElement apply(const DolbeaultElement &x) const;

private:
    std::vector<HomTensor> directions_;
    Caps caps_;
};

DolbeaultElement kapranov_D(const std::vector<CurvatureTensor> &tower, const DolbeaultElement &x);

// Forms on a neighbourhood of the diagonal in a product of two charts. The
// holomorphic group holds (z_0..z_{n-1}, w_0..w_{n-1}), the antiholomorphic one
// their conjugates. A term is keyed by (dzbar mask, dwbar mask), wedge order
// dzbar first.
class BiChartForm
{
public:
    using Key = std::pair<FormMask, FormMask>;

    BiChartForm() = default;
    explicit BiChartForm(int dim);
    static BiChartForm function(const TruncSeries &f);
    static VarSpec spec(int dim)
    {
        return {2 * dim, 2 * dim, 0};
    }
    static TruncSeries z(int dim, int i);
    static TruncSeries w(int dim, int i);
    static TruncSeries zbar(int dim, int i);
    static TruncSeries wbar(int dim, int i);

    int dim() const
    {
        return dim_;
    }
    const std::map<Key, TruncSeries> &terms() const
    {
        return terms_;
    }
    void add(FormMask zmask, FormMask wmask, const TruncSeries &x);

    BiChartForm dbar() const;
    friend BiChartForm operator*(const BiChartForm &a, const BiChartForm &b);
    BiChartForm &operator+=(const BiChartForm &o);

private:
    int dim_ = 0;
    std::map<Key, TruncSeries> terms_;
};

// w -> z + u, wbar -> zbar: series over bi-chart variables to series over
// full(n), cut at caps.
TruncSeries jet_of(const TruncSeries &f, const Caps &caps);

// Classical Taylor expansion along the second factor.
DolbeaultElement restrict_to_jets(const BiChartForm &eta, const Caps &caps);

// Family of connections Gamma(z + u, zbar) over full(n), of order N + 1 where
// N = caps[fiber].
ConnectionJet connection_family(const ChartConnection &gamma, const Caps &caps);

// sum_k sym_project(nabla^k f at u = 0) for a function on full(n). When
// require_symmetric is set every tensor is checked for symmetry first.
TruncSeries taylor_series(const ConnectionJet &family, const TruncSeries &f, const Caps &caps,
                          bool require_symmetric = true);

DolbeaultElement exp_star(const ConnectionJet &family, const BiChartForm &eta, const Caps &caps);

// Everything derived from a metric for checks at caps (B, B, N).
struct KahlerModel {
    ChartMetric metric;
    ChartConnection connection;
    std::vector<CurvatureTensor> tower;
    ConnectionJet family;
    KapranovOperator op;
    Caps caps;
};

// Metric order needed for a model at (B, N).
inline int model_metric_order(int b, int n)
{
    return b + n + 1;
}
// h must be known to order model_metric_order(B, N); OrderError otherwise.
KahlerModel kahler_model(const ChartMetric &h, int b, int n);

Certificate check_exp_commutator(const KahlerModel &model, const std::vector<BiChartForm> &samples);

// Basis of the truncated complex: monomials z^a zbar^b u^c dzbar_S with
// |a|, |b| <= B, |c| <= N and |S| <= n - 2.
std::vector<DolbeaultElement> truncated_basis(int dim, const Caps &caps);

// D(D(e)) = 0 for every basis element. Uses up to KAPRANOV_THREADS threads;
// the reported failure is the first in basis order regardless of schedule.
Certificate check_D_squared(const KapranovOperator &op);

// omega^{(j)} for each dzbar_j: (dbar exp*) composed with (exp*)^{-1} as a
// derivation of the fiber algebra, for a (z, zbar)-family of flat
// torsion-free connections.
std::vector<HomTensor> omega_from_section(const ConnectionJet &family, const Caps &caps);

// d_k omega_j - d_j omega_k - [omega_k, omega_j] = 0 for k < j.
Certificate check_maurer_cartan(const std::vector<HomTensor> &omega);

// Degree r + 1 part of an element of filtration level r; DomainError when a
// lower fiber degree is present.
DolbeaultElement cosymbol(const DolbeaultElement &x, int r);

// Taylor map for a holomorphic connection, no symmetry required.
DolbeaultElement atiyah_tilde_I(const ChartConnection &gamma_hol, const BiChartForm &eta, const Caps &caps);
Certificate check_atiyah(const ChartConnection &gamma_hol, const std::vector<BiChartForm> &samples,
                         const Caps &caps);

} // namespace kapranov

#endif
