#ifndef KAPRANOV_FORMAL_CONN_HPP
#define KAPRANOV_FORMAL_CONN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <kapranov/formal_disc.hpp>
#include <kapranov/tensor_alg.hpp>

namespace kapranov
{

// t[k][i][j]
using Tensor3 = std::vector<std::vector<std::vector<TruncSeries>>>;
// t[l][k][i][j]
using Tensor4 = std::vector<Tensor3>;

// Christoffel symbols gamma(k, i, j) = Gamma^k_{ij} of a connection on the
// formal disc with coordinates u. At order r they are known to fiber degree
// r - 1. Base variables, when present, are passive parameters.
class ConnectionJet
{
public:
    ConnectionJet(Tensor3 gamma, int order);
    static ConnectionJet euclidean(int dim, int order, const VarSpec &spec = {});

    int dim() const
    {
        return static_cast<int>(gamma_.size());
    }
    int order() const
    {
        return order_;
    }
    const VarSpec &spec() const
    {
        return gamma_.at(0).at(0).at(0).spec();
    }
    const TruncSeries &gamma(int k, int i, int j) const
    {
        return gamma_[k][i][j];
    }
    const Tensor3 &christoffels() const
    {
        return gamma_;
    }
    bool torsion_free() const;
    bool flat() const;

private:
    Tensor3 gamma_;
    int order_;
    mutable std::optional<bool> torsion_free_;
    mutable std::optional<bool> flat_;
};

Tensor3 torsion(const ConnectionJet &c);
// R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik},
// indexed r[l][k][i][j].
Tensor4 curvature_of_formal(const ConnectionJet &c);

// Derivative of a polynomial for the Euclidean connection: component j is
// the coefficient of the trailing covector v_j.
std::vector<SymPoly> euclidean_action(const SymPoly &p);

// Full (unsymmetrized) covariant derivatives of a function along the fiber
// directions: result[k] maps words of length k to (nabla^k f)_{w}, with the
// newest index first.
using FullTensor = std::map<Word, TruncSeries>;
std::vector<FullTensor> covector_tower(const Tensor3 &gamma, const TruncSeries &f, int kmax);

// Values at u = 0, over the base spec.
FullTensor at_origin(const FullTensor &t);
// First word where the tensor fails to be symmetric, if any.
std::optional<Word> symmetry_defect(const FullTensor &t);

AutoJet exp_jet(const ConnectionJet &c);
// Independent route: solve pullback(phi, c) = 0 degree by degree.
AutoJet exp_jet_by_pullback(const ConnectionJet &c);

ConnectionJet pushforward_connection(const AutoJet &phi, const ConnectionJet &c);
ConnectionJet pullback_connection(const AutoJet &phi, const ConnectionJet &c);

struct EquivarianceReport {
    bool holds = false;
    int order_checked = 0;
    // Largest d such that all coefficients of degree <= d agree.
    int max_equal_order = 0;
    std::string violation;
};
EquivarianceReport check_equivariance(const AutoJet &psi, const ConnectionJet &c);

// Highest total fiber degree up to which all components agree.
int agreement_order(const AutoJet &a, const AutoJet &b, std::string *violation = nullptr);

} // namespace kapranov

#endif
