#ifndef KAPRANOV_FORMAL_DISC_HPP
#define KAPRANOV_FORMAL_DISC_HPP

#include <vector>

#include <kapranov/linalg.hpp>
#include <kapranov/series.hpp>

namespace kapranov
{

// Order-r jet of an automorphism of the formal disc fixing the origin, stored
// by its pullback on coordinates: component i is phi^*(u_i). The spec may carry
// base variables, which then act as passive parameters; the linear part must
// not depend on them.
class AutoJet
{
public:
    AutoJet(std::vector<TruncSeries> components, int order);

    static AutoJet identity(int dim, int order, const VarSpec &spec = {});
    static AutoJet linear(const Matrix &t, int order, const VarSpec &spec = {});

    int dim() const
    {
        return static_cast<int>(comps_.size());
    }
    int order() const
    {
        return order_;
    }
    const VarSpec &spec() const
    {
        return comps_.at(0).spec();
    }
    const std::vector<TruncSeries> &components() const
    {
        return comps_;
    }
    const TruncSeries &component(int i) const
    {
        return comps_.at(i);
    }
    bool in_J() const;

    // Same jet seen at a lower order.
    AutoJet truncated(int order) const;

    friend bool operator==(const AutoJet &, const AutoJet &) = default;

private:
    std::vector<TruncSeries> comps_;
    int order_;
};

AutoJet compose(const AutoJet &phi, const AutoJet &psi);
AutoJet invert(const AutoJet &phi);
Matrix linearize(const AutoJet &phi);

struct SemidirectParts {
    AutoJet j;
    Matrix t;
};
SemidirectParts semidirect_split(const AutoJet &phi);

// psi . phi = psi o phi o (d_0 psi)^{-1}; phi must lie in J.
AutoJet g_action_on_J(const AutoJet &psi, const AutoJet &phi);

enum class VectorFieldKind { g, j };

// Formal vector field sum_i X^i d/du_i vanishing at the origin (kind g) or
// to second order (kind j).
class VectorFieldJet
{
public:
    VectorFieldJet(std::vector<TruncSeries> components, int order, VectorFieldKind kind = VectorFieldKind::g);

    int dim() const
    {
        return static_cast<int>(comps_.size());
    }
    int order() const
    {
        return order_;
    }
    VectorFieldKind kind() const
    {
        return kind_;
    }
    const std::vector<TruncSeries> &components() const
    {
        return comps_;
    }

private:
    std::vector<TruncSeries> comps_;
    int order_;
    VectorFieldKind kind_;
};

TruncSeries vf_act_on_function(const VectorFieldJet &x, const TruncSeries &f);

} // namespace kapranov

#endif
