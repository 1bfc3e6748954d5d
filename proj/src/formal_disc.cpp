#include <kapranov/formal_disc.hpp>

namespace kapranov
{

namespace
{

VarSpec default_spec(int dim, const VarSpec &spec)
{
    if (spec.total() == 0) {
        return VarSpec::fiber(dim);
    }
    if (spec.n_u != dim) {
        throw ShapeError("AutoJet: spec fiber count differs from dimension");
    }
    return spec;
}

int fiber_degree(const TruncSeries &s, const Monomial &m)
{
    return m.group_degree(s.spec(), Group::fiber);
}

bool has_base_part(const VarSpec &spec, const Monomial &m)
{
    return m.group_degree(spec, Group::holo) + m.group_degree(spec, Group::antiholo) > 0;
}

// Identity images for base variables followed by the given fiber images.
std::vector<TruncSeries> images_with_params(const VarSpec &spec, const std::vector<TruncSeries> &fiber)
{
    std::vector<TruncSeries> imgs;
    for (int v = 0; v < spec.n_z + spec.n_zb; ++v) {
        imgs.push_back(TruncSeries::variable(spec, v));
    }
    imgs.insert(imgs.end(), fiber.begin(), fiber.end());
    return imgs;
}

void require_compatible(const AutoJet &a, const AutoJet &b, const char *op)
{
    if (a.dim() != b.dim() || a.order() != b.order() || !(a.spec() == b.spec())) {
        throw ShapeError(std::string(op) + ": jets of different shape");
    }
}

} // namespace

AutoJet::AutoJet(std::vector<TruncSeries> components, int order) : comps_(std::move(components)), order_(order)
{
    if (comps_.empty() || order_ < 1) {
        throw ShapeError("AutoJet: need at least one component and order >= 1");
    }
    const VarSpec spec = comps_[0].spec();
    if (spec.n_u != dim()) {
        throw ShapeError("AutoJet: one component per fiber variable required");
    }
    for (auto &c : comps_) {
        if (!(c.spec() == spec)) {
            throw ShapeError("AutoJet: components over different specs");
        }
        Caps caps = c.caps();
        caps[Group::fiber] = order_;
        c = c.truncated(caps);
        if (c.caps()[Group::fiber] < order_) {
            throw OrderError("AutoJet: component known to lower order than requested", c.caps()[Group::fiber]);
        }
        for (const auto &[m, v] : c.terms()) {
            const int d = fiber_degree(c, m);
            if (d == 0) {
                throw DomainError("AutoJet: components must vanish at the origin");
            }
            if (d == 1 && has_base_part(spec, m)) {
                throw DomainError("AutoJet: linear part must be constant");
            }
        }
    }
    if (determinant(linearize(*this)).is_zero()) {
        throw DomainError("AutoJet: linear part is singular");
    }
}

AutoJet AutoJet::identity(int dim, int order, const VarSpec &spec)
{
    return linear(identity_matrix(dim), order, spec);
}

AutoJet AutoJet::linear(const Matrix &t, int order, const VarSpec &spec_in)
{
    const int dim = static_cast<int>(t.size());
    const VarSpec spec = default_spec(dim, spec_in);
    std::vector<TruncSeries> comps;
    for (int i = 0; i < dim; ++i) {
        TruncSeries s(spec, Caps::of(kExact, kExact, order));
        for (int j = 0; j < dim; ++j) {
            Monomial m;
            m.e[spec.var(Group::fiber, j)] = 1;
            s.add_term(m, t.at(i).at(j));
        }
        comps.push_back(std::move(s));
    }
    return AutoJet(std::move(comps), order);
}

bool AutoJet::in_J() const
{
    return linearize(*this) == identity_matrix(dim());
}

AutoJet AutoJet::truncated(int order) const
{
    if (order > order_) {
        throw OrderError("AutoJet::truncated: cannot raise the order", order_);
    }
    return AutoJet(comps_, order);
}

Matrix linearize(const AutoJet &phi)
{
    const auto &spec = phi.spec();
    Matrix m(phi.dim(), std::vector<GRat>(phi.dim()));
    for (int i = 0; i < phi.dim(); ++i) {
        for (int j = 0; j < phi.dim(); ++j) {
            Monomial e;
            e.e[spec.var(Group::fiber, j)] = 1;
            m[i][j] = phi.component(i).coeff(e);
        }
    }
    return m;
}

AutoJet compose(const AutoJet &phi, const AutoJet &psi)
{
    require_compatible(phi, psi, "compose");
    const auto &spec = phi.spec();
    const auto imgs = images_with_params(spec, psi.components());
    std::vector<TruncSeries> out;
    for (const auto &c : phi.components()) {
        Caps caps = min(c.caps(), psi.component(0).caps());
        caps[Group::fiber] = phi.order();
        out.push_back(substitute(c, imgs, spec, caps));
    }
    return AutoJet(std::move(out), phi.order());
}

AutoJet invert(const AutoJet &phi)
{
    const Matrix ainv = mat_inverse(linearize(phi));
    const auto &spec = phi.spec();
    AutoJet psi = AutoJet::linear(ainv, phi.order(), spec);
    std::vector<TruncSeries> comps = psi.components();
    // Each pass fixes at least one more degree of phi o psi = id.
    for (int pass = 0; pass < phi.order(); ++pass) {
        const AutoJet err_jet = compose(phi, AutoJet(comps, phi.order()));
        std::vector<TruncSeries> err;
        bool done = true;
        for (int i = 0; i < phi.dim(); ++i) {
            TruncSeries e = err_jet.component(i);
            Monomial m;
            m.e[spec.var(Group::fiber, i)] = 1;
            e.add_term(m, GRat(-1));
            done = done && e.is_zero();
            err.push_back(std::move(e));
        }
        if (done) {
            break;
        }
        for (int i = 0; i < phi.dim(); ++i) {
            for (int j = 0; j < phi.dim(); ++j) {
                if (!ainv[i][j].is_zero()) {
                    comps[i] -= err[j] * ainv[i][j];
                }
            }
        }
    }
    return AutoJet(std::move(comps), phi.order());
}

SemidirectParts semidirect_split(const AutoJet &phi)
{
    const Matrix t = linearize(phi);
    AutoJet j = compose(phi, AutoJet::linear(mat_inverse(t), phi.order(), phi.spec()));
    return {std::move(j), t};
}

AutoJet g_action_on_J(const AutoJet &psi, const AutoJet &phi)
{
    if (!phi.in_J()) {
        throw DomainError("g_action_on_J: jet is not tangent to the identity");
    }
    const AutoJet back = AutoJet::linear(mat_inverse(linearize(psi)), psi.order(), psi.spec());
    return compose(compose(psi, phi), back);
}

VectorFieldJet::VectorFieldJet(std::vector<TruncSeries> components, int order, VectorFieldKind kind)
    : comps_(std::move(components)), order_(order), kind_(kind)
{
    if (comps_.empty()) {
        throw ShapeError("VectorFieldJet: need at least one component");
    }
    const VarSpec spec = comps_[0].spec();
    if (spec.n_u != dim()) {
        throw ShapeError("VectorFieldJet: one component per fiber variable required");
    }
    const int min_val = kind_ == VectorFieldKind::g ? 1 : 2;
    for (auto &c : comps_) {
        if (!(c.spec() == spec)) {
            throw ShapeError("VectorFieldJet: components over different specs");
        }
        Caps caps = c.caps();
        caps[Group::fiber] = std::min(caps[Group::fiber], order_);
        c = c.truncated(caps);
        for (const auto &kv : c.terms()) {
            if (fiber_degree(c, kv.first) < min_val) {
                throw DomainError("VectorFieldJet: component has too low a valuation");
            }
        }
    }
}

TruncSeries vf_act_on_function(const VectorFieldJet &x, const TruncSeries &f)
{
    const auto &spec = f.spec();
    if (!(spec == x.components()[0].spec())) {
        throw ShapeError("vf_act_on_function: spec mismatch");
    }
    TruncSeries out = x.components()[0] * partial(f, spec.var(Group::fiber, 0));
    for (int i = 1; i < x.dim(); ++i) {
        out += x.components()[i] * partial(f, spec.var(Group::fiber, i));
    }
    return out;
}

} // namespace kapranov
