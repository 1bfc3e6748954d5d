#include <kapranov/dolbeault.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <thread>

namespace kapranov
{

namespace
{

FormMask bit(int j)
{
    return FormMask{1} << j;
}

std::string mask_string(FormMask m)
{
    std::string s;
    for (int j = 0; m >> j; ++j) {
        if (m & bit(j)) {
            s += (s.empty() ? "dzb" : "^dzb") + std::to_string(j);
        }
    }
    return s.empty() ? "1" : s;
}

Caps dbar_caps(Caps c)
{
    if (c[Group::antiholo] < kExact) {
        c[Group::antiholo] -= 1;
    }
    return c;
}

// All exponent vectors over count variables with total degree <= d.
std::vector<std::vector<int>> exponent_vectors(int count, int d)
{
    std::vector<std::vector<int>> out{std::vector<int>(count, 0)};
    for (int i = 0; i < count; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto &v : out) {
            int used = 0;
            for (int x : v) {
                used += x;
            }
            for (int e = 0; used + e <= d; ++e) {
                auto w = v;
                w[i] = e;
                next.push_back(std::move(w));
            }
        }
        out = std::move(next);
    }
    return out;
}

Certificate make_certificate(std::string suite, std::string identity, std::string anchor, const Caps &caps)
{
    Certificate c;
    c.suite = std::move(suite);
    c.identity = std::move(identity);
    c.anchor = std::move(anchor);
    c.caps = caps.to_string();
    return c;
}

void record_failure(Certificate &cert, const std::string &where, const std::pair<std::string, std::string> &diff,
                    const std::string &stage)
{
    cert.pass = false;
    cert.monomial = where + " @ " + diff.first;
    cert.coefficient = diff.second;
    cert.stage = stage;
}

} // namespace

int worker_threads()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char *env = std::getenv("KAPRANOV_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) {
            n = n > 0 ? std::min(n, v) : v;
        }
    }
    return std::max(1, n);
}

int wedge_sign(FormMask a, FormMask b)
{
    if (a & b) {
        return 0;
    }
    int swaps = 0;
    for (int j = 0; b >> j; ++j) {
        if (b & bit(j)) {
            swaps += std::popcount(a >> (j + 1));
        }
    }
    return swaps % 2 ? -1 : 1;
}

DolbeaultElement::DolbeaultElement(int dim, const Caps &caps) : dim_(dim), caps_(caps.normalized(VarSpec::full(dim)))
{
    if (dim < 1 || dim > 5) {
        throw ShapeError("DolbeaultElement: dimension out of range");
    }
}

DolbeaultElement DolbeaultElement::function(const TruncSeries &f)
{
    const VarSpec &s = f.spec();
    if (s.n_u != s.n_z || s.n_zb != s.n_z) {
        throw ShapeError("DolbeaultElement: coefficient must live over full(n)");
    }
    DolbeaultElement x(s.n_u, f.caps());
    x.add(0, f);
    return x;
}

TruncSeries DolbeaultElement::coefficient(FormMask mask) const
{
    const auto it = forms_.find(mask);
    return it == forms_.end() ? TruncSeries(spec(), caps_) : it->second;
}

void DolbeaultElement::shrink(const Caps &caps)
{
    const Caps c = min(caps_, caps.normalized(spec()));
    if (c == caps_) {
        return;
    }
    caps_ = c;
    for (auto it = forms_.begin(); it != forms_.end();) {
        it->second = it->second.truncated(caps_);
        it = it->second.is_zero() ? forms_.erase(it) : std::next(it);
    }
}

void DolbeaultElement::add(FormMask mask, const TruncSeries &x)
{
    if (!(x.spec() == spec())) {
        throw ShapeError("DolbeaultElement::add: coefficient over the wrong spec");
    }
    if (mask >> dim_) {
        throw ShapeError("DolbeaultElement::add: form index out of range");
    }
    shrink(x.caps());
    auto [it, fresh] = forms_.try_emplace(mask, x.truncated(caps_));
    if (!fresh) {
        it->second += x.truncated(caps_);
    }
    if (it->second.is_zero()) {
        forms_.erase(it);
    }
}

int DolbeaultElement::degree() const
{
    int q = -2;
    for (const auto &kv : forms_) {
        const int d = std::popcount(kv.first);
        if (q == -2) {
            q = d;
        } else if (q != d) {
            return -1;
        }
    }
    return q == -2 ? 0 : q;
}

bool DolbeaultElement::is_zero() const
{
    return forms_.empty();
}

DolbeaultElement DolbeaultElement::truncated(const Caps &caps) const
{
    DolbeaultElement out = *this;
    out.shrink(caps);
    return out;
}

DolbeaultElement DolbeaultElement::fiber_part(int d) const
{
    DolbeaultElement out(dim_, caps_);
    const VarSpec s = spec();
    for (const auto &[mask, c] : forms_) {
        TruncSeries x(s, caps_);
        for (const auto &[m, v] : c.terms()) {
            if (m.group_degree(s, Group::fiber) == d) {
                x.add_term(m, v);
            }
        }
        out.add(mask, x);
    }
    return out;
}

DolbeaultElement &DolbeaultElement::operator+=(const DolbeaultElement &o)
{
    if (o.dim_ != dim_) {
        throw ShapeError("DolbeaultElement: dimension mismatch");
    }
    shrink(o.caps_);
    for (const auto &[mask, c] : o.forms_) {
        add(mask, c);
    }
    return *this;
}

DolbeaultElement &DolbeaultElement::operator-=(const DolbeaultElement &o)
{
    return *this += -o;
}

DolbeaultElement &DolbeaultElement::operator*=(const GRat &c)
{
    if (c.is_zero()) {
        forms_.clear();
        return *this;
    }
    for (auto &kv : forms_) {
        kv.second *= c;
    }
    return *this;
}

DolbeaultElement operator*(const DolbeaultElement &a, const DolbeaultElement &b)
{
    if (a.dim_ != b.dim_) {
        throw ShapeError("DolbeaultElement: dimension mismatch");
    }
    DolbeaultElement out(a.dim_, min(a.caps_, b.caps_));
    for (const auto &[ma, ca] : a.forms_) {
        for (const auto &[mb, cb] : b.forms_) {
            const int s = wedge_sign(ma, mb);
            if (s != 0) {
                out.add(ma | mb, GRat(s) * (ca * cb));
            }
        }
    }
    return out;
}

std::string DolbeaultElement::to_string() const
{
    if (forms_.empty()) {
        return "0";
    }
    std::string s;
    for (const auto &[mask, c] : forms_) {
        if (!s.empty()) {
            s += " + ";
        }
        s += "(" + c.to_string() + ")";
        if (mask) {
            s += " " + mask_string(mask);
        }
    }
    return s;
}

bool agree(const DolbeaultElement &a, const DolbeaultElement &b)
{
    return !first_difference(a, b).has_value();
}

std::optional<std::pair<std::string, std::string>> first_difference(const DolbeaultElement &a,
                                                                    const DolbeaultElement &b)
{
    const DolbeaultElement d = a - b;
    if (d.forms().empty()) {
        return std::nullopt;
    }
    const auto &[mask, c] = *d.forms().begin();
    const auto &[m, v] = *c.terms().begin();
    return std::make_pair(mask_string(mask) + " " + monomial_to_string(m, c.spec()), v.to_string());
}

DolbeaultElement dbar(const DolbeaultElement &x)
{
    const VarSpec spec = x.spec();
    DolbeaultElement out(x.dim(), dbar_caps(x.caps()));
    for (const auto &[mask, c] : x.forms()) {
        for (int j = 0; j < x.dim(); ++j) {
            const int s = wedge_sign(bit(j), mask);
            if (s == 0) {
                continue;
            }
            out.add(mask | bit(j), GRat(s) * partial(c, spec.var(Group::antiholo, j)));
        }
    }
    return out;
}

KapranovOperator::KapranovOperator(const std::vector<CurvatureTensor> &tower, const Caps &caps)
{
    if (tower.empty()) {
        throw ShapeError("KapranovOperator: empty tower");
    }
    const int n = tower.front().dim();
    const VarSpec full = VarSpec::full(n);
    caps_ = caps.normalized(full);
    for (int j = 0; j < n; ++j) {
        HomTensor d = HomTensor::zero(full, caps_);
        for (const auto &r : tower) {
            if (r.dim() != n) {
                throw ShapeError("KapranovOperator: tower of mixed dimensions");
            }
            if (r.degree() <= caps_[Group::fiber]) {
                d += r.cotangent_hom(j, caps_);
            }
        }
        directions_.push_back(std::move(d));
    }
}

KapranovOperator KapranovOperator::flat(int dim, const Caps &caps)
{
    const VarSpec base = VarSpec::base(dim);
    std::map<CurvatureTensor::Key, TruncSeries> zero;
    for (int l = 0; l < dim; ++l) {
        for (int i = 0; i < dim; ++i) {
            for (int k = i; k < dim; ++k) {
                for (int j = 0; j < dim; ++j) {
                    zero.emplace(CurvatureTensor::Key{l, Word{i, k}, j}, TruncSeries(base));
                }
            }
        }
    }
    return KapranovOperator({CurvatureTensor::from_full(dim, 2, zero)}, caps);
}

DolbeaultElement KapranovOperator::curvature_part(const DolbeaultElement &x) const
{
    if (x.dim() != dim()) {
        throw ShapeError("KapranovOperator: dimension mismatch");
    }
    DolbeaultElement out(dim(), min(x.caps(), caps_));
    for (const auto &[mask, c] : x.forms()) {
        for (int j = 0; j < dim(); ++j) {
            const int s = wedge_sign(bit(j), mask);
            if (s == 0) {
                continue;
            }
            out.add(mask | bit(j), GRat(s) * derivation_extend(directions_[j], c, caps_[Group::fiber]));
        }
    }
    return out;
}

DolbeaultElement KapranovOperator::apply(const DolbeaultElement &x) const
{
    return dbar(x) + curvature_part(x);
}

DolbeaultElement kapranov_D(const std::vector<CurvatureTensor> &tower, const DolbeaultElement &x)
{
    return KapranovOperator(tower, x.caps()).apply(x);
}

BiChartForm::BiChartForm(int dim) : dim_(dim)
{
    if (dim < 1 || dim > 4) {
        throw ShapeError("BiChartForm: dimension out of range");
    }
}

BiChartForm BiChartForm::function(const TruncSeries &f)
{
    const VarSpec &s = f.spec();
    if (s.n_u != 0 || s.n_z != s.n_zb || s.n_z % 2 != 0) {
        throw ShapeError("BiChartForm: coefficient must live over the bi-chart spec");
    }
    BiChartForm out(s.n_z / 2);
    out.add(0, 0, f);
    return out;
}

TruncSeries BiChartForm::z(int dim, int i)
{
    return TruncSeries::variable(spec(dim), Group::holo, i);
}

TruncSeries BiChartForm::w(int dim, int i)
{
    return TruncSeries::variable(spec(dim), Group::holo, dim + i);
}

TruncSeries BiChartForm::zbar(int dim, int i)
{
    return TruncSeries::variable(spec(dim), Group::antiholo, i);
}

TruncSeries BiChartForm::wbar(int dim, int i)
{
    return TruncSeries::variable(spec(dim), Group::antiholo, dim + i);
}

void BiChartForm::add(FormMask zmask, FormMask wmask, const TruncSeries &x)
{
    if (!(x.spec() == spec(dim_))) {
        throw ShapeError("BiChartForm::add: coefficient over the wrong spec");
    }
    if ((zmask >> dim_) || (wmask >> dim_)) {
        throw ShapeError("BiChartForm::add: form index out of range");
    }
    auto [it, fresh] = terms_.try_emplace(Key{zmask, wmask}, x);
    if (!fresh) {
        it->second += x;
    }
    if (it->second.is_zero() && it->second.caps().all_exact()) {
        terms_.erase(it);
    }
}

BiChartForm BiChartForm::dbar() const
{
    const VarSpec s = spec(dim_);
    BiChartForm out(dim_);
    for (const auto &[key, c] : terms_) {
        const auto [a, b] = key;
        const int pass_a = std::popcount(a) % 2 ? -1 : 1;
        for (int j = 0; j < dim_; ++j) {
            if (const int sz = wedge_sign(bit(j), a)) {
                out.add(a | bit(j), b, GRat(sz) * partial(c, s.var(Group::antiholo, j)));
            }
            if (const int sw = wedge_sign(bit(j), b)) {
                out.add(a, b | bit(j), GRat(pass_a * sw) * partial(c, s.var(Group::antiholo, dim_ + j)));
            }
        }
    }
    return out;
}

BiChartForm operator*(const BiChartForm &x, const BiChartForm &y)
{
    if (x.dim_ != y.dim_) {
        throw ShapeError("BiChartForm: dimension mismatch");
    }
    BiChartForm out(x.dim_);
    for (const auto &[kx, cx] : x.terms_) {
        for (const auto &[ky, cy] : y.terms_) {
            const int s1 = wedge_sign(kx.first, ky.first);
            const int s2 = wedge_sign(kx.second, ky.second);
            if (s1 == 0 || s2 == 0) {
                continue;
            }
            const int cross = (std::popcount(kx.second) * std::popcount(ky.first)) % 2 ? -1 : 1;
            out.add(kx.first | ky.first, kx.second | ky.second, GRat(s1 * s2 * cross) * (cx * cy));
        }
    }
    return out;
}

BiChartForm &BiChartForm::operator+=(const BiChartForm &o)
{
    if (o.dim_ != dim_) {
        throw ShapeError("BiChartForm: dimension mismatch");
    }
    for (const auto &[k, c] : o.terms_) {
        add(k.first, k.second, c);
    }
    return *this;
}

TruncSeries jet_of(const TruncSeries &f, const Caps &caps)
{
    const VarSpec &src = f.spec();
    const int n = src.n_z / 2;
    if (!(src == BiChartForm::spec(n))) {
        throw ShapeError("jet_of: series is not over the bi-chart spec");
    }
    const VarSpec full = VarSpec::full(n);
    std::vector<TruncSeries> images;
    for (int i = 0; i < 2 * n; ++i) {
        TruncSeries x = TruncSeries::variable(full, Group::holo, i % n);
        if (i >= n) {
            x += TruncSeries::variable(full, Group::fiber, i - n);
        }
        images.push_back(std::move(x));
    }
    for (int i = 0; i < 2 * n; ++i) {
        images.push_back(TruncSeries::variable(full, Group::antiholo, i % n));
    }
    return substitute(f, images, full, caps);
}

DolbeaultElement restrict_to_jets(const BiChartForm &eta, const Caps &caps)
{
    DolbeaultElement out(eta.dim(), caps);
    for (const auto &[key, c] : eta.terms()) {
        const int s = wedge_sign(key.first, key.second);
        if (s != 0) {
            out.add(key.first | key.second, GRat(s) * jet_of(c, caps));
        }
    }
    return out;
}

ConnectionJet connection_family(const ChartConnection &gamma, const Caps &caps_in)
{
    const int n = gamma.dim();
    if (!(gamma.spec() == VarSpec::base(n))) {
        throw ShapeError("connection_family: Christoffel symbols must be series in (z, zbar)");
    }
    const VarSpec full = VarSpec::full(n);
    const Caps caps = caps_in.normalized(full);
    if (caps[Group::fiber] >= kExact) {
        throw ShapeError("connection_family: fiber cap must be finite");
    }
    std::vector<TruncSeries> images;
    for (int i = 0; i < n; ++i) {
        images.push_back(TruncSeries::variable(full, Group::holo, i) + TruncSeries::variable(full, Group::fiber, i));
    }
    for (int i = 0; i < n; ++i) {
        images.push_back(TruncSeries::variable(full, Group::antiholo, i));
    }
    Tensor3 fam = gamma.gamma;
    for (auto &plane : fam) {
        for (auto &row : plane) {
            for (auto &x : row) {
                x = substitute(x, images, full, caps);
            }
        }
    }
    return ConnectionJet(std::move(fam), caps[Group::fiber] + 1);
}

TruncSeries taylor_series(const ConnectionJet &family, const TruncSeries &f, const Caps &caps,
                          bool require_symmetric)
{
    const VarSpec &full = family.spec();
    if (!(f.spec() == full)) {
        throw ShapeError("taylor_series: function over the wrong spec");
    }
    const Caps c = caps.normalized(full);
    const int nmax = c[Group::fiber];
    const auto tower = covector_tower(family.christoffels(), f, nmax);
    TruncSeries out(full, c);
    for (int k = 0; k <= nmax; ++k) {
        const FullTensor t0 = at_origin(tower[k]);
        if (require_symmetric) {
            if (const auto w = symmetry_defect(t0)) {
                std::string ws;
                for (int a : *w) {
                    ws += std::to_string(a);
                }
                throw DomainError("taylor_series: covariant derivative not symmetric at word " + ws);
            }
        }
        out += sym_project_series(t0, full, c);
    }
    return out.truncated(c);
}

DolbeaultElement exp_star(const ConnectionJet &family, const BiChartForm &eta, const Caps &caps)
{
    if (family.dim() != eta.dim()) {
        throw ShapeError("exp_star: dimension mismatch");
    }
    DolbeaultElement out(eta.dim(), caps);
    for (const auto &[key, c] : eta.terms()) {
        const int s = wedge_sign(key.first, key.second);
        if (s != 0) {
            out.add(key.first | key.second, GRat(s) * taylor_series(family, jet_of(c, caps), caps));
        }
    }
    return out;
}

KahlerModel kahler_model(const ChartMetric &h, int b, int n)
{
    if (b < 1 || n < 1) {
        throw ShapeError("kahler_model: caps must be positive");
    }
    const int need = model_metric_order(b, n);
    if (h.order() < need) {
        throw OrderError("kahler_model: metric known to order " + std::to_string(h.order()) + ", need " +
                             std::to_string(need),
                         h.order() - n - 1);
    }
    const ChartMetric metric = h.truncated(need);
    const Caps caps = Caps::of(b, b, n);
    ChartConnection conn = levi_civita(metric);
    auto tower = covariant_tower(conn, curvature_R(conn), std::max(n, 2));
    ConnectionJet family = connection_family(conn, caps);
    KapranovOperator op(tower, caps);
    return KahlerModel{metric, std::move(conn), std::move(tower), std::move(family), std::move(op), caps};
}

Certificate check_exp_commutator(const KahlerModel &model, const std::vector<BiChartForm> &samples)
{
    auto cert = make_certificate("kapranov", "exp_commutator", "dbar-exp-commutator", model.caps);
    for (const auto &eta : samples) {
        const DolbeaultElement e = exp_star(model.family, eta, model.caps);
        const DolbeaultElement lhs = dbar(e) - exp_star(model.family, eta.dbar(), model.caps);
        const DolbeaultElement rhs = -model.op.curvature_part(e);
        ++cert.checked;
        if (const auto d = first_difference(lhs, rhs)) {
            std::string where = "eta #" + std::to_string(cert.checked - 1);
            record_failure(cert, where, *d, "dbar exp* - exp* dbar vs -Rtilde exp*");
            return cert;
        }
    }
    return cert;
}

std::vector<DolbeaultElement> truncated_basis(int dim, const Caps &caps_in)
{
    const VarSpec full = VarSpec::full(dim);
    const Caps caps = caps_in.normalized(full);
    for (auto g : kAllGroups) {
        if (caps[g] >= kExact) {
            throw ShapeError("truncated_basis: all caps must be finite");
        }
    }
    const auto zs = exponent_vectors(dim, caps[Group::holo]);
    const auto zbs = exponent_vectors(dim, caps[Group::antiholo]);
    const auto us = exponent_vectors(dim, caps[Group::fiber]);
    std::vector<DolbeaultElement> out;
    for (FormMask mask = 0; mask < bit(dim); ++mask) {
        if (std::popcount(mask) > std::max(0, dim - 2)) {
            continue;
        }
        for (const auto &a : zs) {
            for (const auto &b : zbs) {
                for (const auto &c : us) {
                    Monomial m;
                    for (int i = 0; i < dim; ++i) {
                        m.e[full.var(Group::holo, i)] = static_cast<std::uint8_t>(a[i]);
                        m.e[full.var(Group::antiholo, i)] = static_cast<std::uint8_t>(b[i]);
                        m.e[full.var(Group::fiber, i)] = static_cast<std::uint8_t>(c[i]);
                    }
                    DolbeaultElement e(dim, caps);
                    e.add(mask, TruncSeries::monomial(full, m, GRat(1), caps));
                    out.push_back(std::move(e));
                }
            }
        }
    }
    return out;
}

Certificate check_D_squared(const KapranovOperator &op)
{
    auto cert = make_certificate("kapranov", "D_squared", "kapranov-differential-squares-to-zero", op.caps());
    const auto basis = truncated_basis(op.dim(), op.caps());
    std::vector<std::optional<std::pair<std::string, std::string>>> failures(basis.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < basis.size(); i = next++) {
            try {
                const DolbeaultElement dd = op.apply(op.apply(basis[i]));
                if (const auto d = first_difference(dd, DolbeaultElement(op.dim(), dd.caps()))) {
                    failures[i] = d;
                }
            } catch (const std::exception &ex) {
                failures[i] = std::make_pair(std::string("exception"), std::string(ex.what()));
            }
        }
    };
    const int nt = std::min<int>(worker_threads(), static_cast<int>(std::max<std::size_t>(basis.size(), 1)));
    std::vector<std::jthread> pool;
    for (int t = 1; t < nt; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    cert.checked = static_cast<long>(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (failures[i]) {
            record_failure(cert, "e = " + basis[i].to_string(), *failures[i], "D(D(e))");
            break;
        }
    }
    return cert;
}

std::vector<HomTensor> omega_from_section(const ConnectionJet &family, const Caps &caps_in)
{
    const int n = family.dim();
    const VarSpec full = VarSpec::full(n);
    if (!(family.spec() == full)) {
        throw ShapeError("omega_from_section: family must live over full(n)");
    }
    const Caps caps = caps_in.normalized(full);
    const int nmax = caps[Group::fiber];
    // Images of the fiber monomials, keyed by compact fiber exponents.
    std::map<Monomial, TruncSeries> table;
    for (const auto &e : exponent_vectors(n, nmax)) {
        Monomial key, m;
        for (int i = 0; i < n; ++i) {
            key.e[i] = static_cast<std::uint8_t>(e[i]);
            m.e[full.var(Group::fiber, i)] = static_cast<std::uint8_t>(e[i]);
        }
        table.emplace(key, taylor_series(family, TruncSeries::monomial(full, m, GRat(1), caps), caps));
    }
    auto apply_table = [&](const std::map<Monomial, TruncSeries> &parts) {
        TruncSeries out(full, caps);
        for (const auto &[key, p] : parts) {
            const auto it = table.find(key);
            if (it == table.end()) {
                continue;
            }
            out += mul_truncated(embed(p, full), it->second, min(caps, embed(p, full).caps()));
        }
        return out;
    };
    std::vector<std::vector<TruncSeries>> images(n);
    for (int l = 0; l < n; ++l) {
        const TruncSeries target = TruncSeries::variable(full, Group::fiber, l, caps);
        TruncSeries g = target;
        bool solved = false;
        for (int it = 0; it <= nmax + 1; ++it) {
            const TruncSeries r = (target - apply_table(split_fiber(g))).truncated(caps);
            if (r.is_zero()) {
                solved = true;
                break;
            }
            g += r;
        }
        if (!solved) {
            throw DomainError("omega_from_section: filtered inverse did not converge");
        }
        const auto parts = split_fiber(g);
        for (int j = 0; j < n; ++j) {
            std::map<Monomial, TruncSeries> d;
            for (const auto &[key, p] : parts) {
                d.emplace(key, -partial(p, VarSpec::base(n).var(Group::antiholo, j)));
            }
            images[j].push_back(apply_table(d));
        }
    }
    std::vector<HomTensor> out;
    for (auto &im : images) {
        out.emplace_back(std::move(im));
    }
    return out;
}

Certificate check_maurer_cartan(const std::vector<HomTensor> &omega)
{
    if (omega.empty()) {
        throw ShapeError("check_maurer_cartan: empty form");
    }
    const VarSpec &spec = omega[0].spec();
    Caps caps = Caps::exact();
    for (const auto &w : omega) {
        for (const auto &x : w.images()) {
            caps = min(caps, x.caps());
        }
    }
    auto cert = make_certificate("section", "maurer_cartan", "section-defect-maurer-cartan", caps);
    const int n = static_cast<int>(omega.size());
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const HomTensor br = derivation_bracket(omega[k], omega[j], caps[Group::fiber]);
            for (int l = 0; l < omega[k].dim(); ++l) {
                ++cert.checked;
                const TruncSeries lhs = partial(omega[j].image(l), spec.var(Group::antiholo, k)) -
                                        partial(omega[k].image(l), spec.var(Group::antiholo, j)) - br.image(l);
                if (!lhs.is_zero()) {
                    const auto &[m, v] = *lhs.terms().begin();
                    cert.pass = false;
                    cert.monomial = "k=" + std::to_string(k) + " j=" + std::to_string(j) + " u" + std::to_string(l) +
                                    " @ " + monomial_to_string(m, spec);
                    cert.coefficient = v.to_string();
                    cert.stage = "d_k omega_j - d_j omega_k - [omega_k, omega_j]";
                    return cert;
                }
            }
        }
    }
    return cert;
}

DolbeaultElement cosymbol(const DolbeaultElement &x, int r)
{
    const VarSpec spec = x.spec();
    for (const auto &[mask, c] : x.forms()) {
        for (const auto &[m, v] : c.terms()) {
            if (m.group_degree(spec, Group::fiber) < r + 1) {
                throw DomainError("cosymbol: element has a component of fiber degree " +
                                  std::to_string(m.group_degree(spec, Group::fiber)) + " below level " +
                                  std::to_string(r + 1));
            }
        }
    }
    return x.fiber_part(r + 1);
}

DolbeaultElement atiyah_tilde_I(const ChartConnection &gamma_hol, const BiChartForm &eta, const Caps &caps)
{
    for (const auto &plane : gamma_hol.gamma) {
        for (const auto &row : plane) {
            for (const auto &x : row) {
                for (const auto &kv : x.terms()) {
                    if (kv.first.group_degree(x.spec(), Group::antiholo) > 0) {
                        throw DomainError("atiyah_tilde_I: connection depends on zbar");
                    }
                }
            }
        }
    }
    const ConnectionJet family = connection_family(gamma_hol, caps);
    DolbeaultElement out(eta.dim(), caps);
    for (const auto &[key, c] : eta.terms()) {
        const int s = wedge_sign(key.first, key.second);
        if (s != 0) {
            out.add(key.first | key.second, GRat(s) * taylor_series(family, jet_of(c, caps), caps, false));
        }
    }
    return out;
}

Certificate check_atiyah(const ChartConnection &gamma_hol, const std::vector<BiChartForm> &samples,
                         const Caps &caps)
{
    auto cert = make_certificate("atiyah", "dbar_compatibility", "holomorphic-connection-taylor-map", caps);
    for (const auto &eta : samples) {
        const auto lhs = dbar(atiyah_tilde_I(gamma_hol, eta, caps));
        const auto rhs = atiyah_tilde_I(gamma_hol, eta.dbar(), caps);
        ++cert.checked;
        if (const auto d = first_difference(lhs, rhs)) {
            record_failure(cert, "eta #" + std::to_string(cert.checked - 1), *d, "dbar Itilde - Itilde dbar");
            return cert;
        }
    }
    return cert;
}

} // namespace kapranov
