#ifndef KAPRANOV_KAHLER_HPP
#define KAPRANOV_KAHLER_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <kapranov/formal_conn.hpp>
#include <kapranov/linalg.hpp>
#include <kapranov/tensor_alg.hpp>

namespace kapranov
{

// Hermitian metric on a chart centred at the origin: h(i, j) = h_{i jbar} as a
// series in (z, zbar), known to base order B in each group.
class ChartMetric
{
public:
    explicit ChartMetric(SeriesMatrix h);

    static ChartMetric flat(int dim, int order);
    // Standard affine chart of projective space, potential log(1 + |z|^2).
    static ChartMetric fubini_study(int dim, int order);
    // h_{i jbar} = d_i d_jbar K for a potential K in (z, zbar).
    static ChartMetric from_potential(const TruncSeries &k);

    int dim() const
    {
        return static_cast<int>(h_.size());
    }
    // Smallest base cap over all entries.
    int order() const;
    const TruncSeries &h(int i, int j) const
    {
        return h_[i][j];
    }
    const SeriesMatrix &matrix() const
    {
        return h_;
    }
    ChartMetric truncated(int order) const;
    ChartMetric scaled(const GRat &c) const;

    bool hermitian() const;
    // d_k h_{i jbar} = d_i h_{k jbar}
    bool kahler() const;

private:
    SeriesMatrix h_;
};

// Christoffel symbols gamma[k][i][j] of a (1,0)-connection on a chart.
struct ChartConnection {
    Tensor3 gamma;

    int dim() const
    {
        return static_cast<int>(gamma.size());
    }
    const VarSpec &spec() const
    {
        return gamma.at(0).at(0).at(0).spec();
    }
    bool torsion_free() const;
    // Holomorphic (2,0) part of the curvature vanishes.
    bool flat_20() const;
    // Smallest holomorphic cap of the Christoffel symbols.
    int holo_cap() const;
};

ChartConnection levi_civita(const ChartMetric &h);

// A curvature-type tensor with n symmetric inputs and one dzbar slot:
// components R^l_{(i_1..i_n), jbar} in the tangent convention.
class CurvatureTensor
{
public:
    using Key = std::tuple<int, Word, int>;

    CurvatureTensor() = default;
    // Builds from components on all ordered input words and checks total
    // symmetry; throws DomainError naming the first asymmetric word.
    static CurvatureTensor from_full(int dim, int degree, const std::map<Key, TruncSeries> &full);

    int dim() const
    {
        return dim_;
    }
    int degree() const
    {
        return degree_;
    }
    const std::map<Key, TruncSeries> &components() const
    {
        return comps_;
    }
    // Any input order; sorted internally.
    const TruncSeries &at(int l, Word inputs, int jbar) const;
    bool is_zero() const;
    Caps caps() const;

    // Cotangent action for the dzbar_jbar slot as images of the generators:
    // u_l -> - sum_M R^l_{M, jbar} u^M / prod m_i!, over the full spec.
    HomTensor cotangent_hom(int jbar, const Caps &caps) const;

    friend bool operator==(const CurvatureTensor &, const CurvatureTensor &) = default;

private:
    int dim_ = 0;
    int degree_ = 0;
    std::map<Key, TruncSeries> comps_;
};

// R^l_{ik, jbar} = - d_{zbar_j} Gamma^l_{ik}
CurvatureTensor curvature_R(const ChartConnection &gamma);

// [R_2, ..., R_{n_max}] with R_{n+1} = nabla R_n. Throws OrderError when the
// connection is not known to enough holomorphic order.
std::vector<CurvatureTensor> covariant_tower(const ChartConnection &gamma, const CurvatureTensor &r2, int n_max);

// Bianchi-type check: every d_{zbar_k} R_{ik, jbar} is symmetric in (j, k).
bool dbar_closed(const CurvatureTensor &r2);

} // namespace kapranov

#endif
