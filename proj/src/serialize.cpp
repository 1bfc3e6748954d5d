#include <kapranov/serialize.hpp>

#include <fstream>

namespace kapranov
{

namespace
{

const char *const kGroupKeys[3] = {"z", "zb", "u"};

mpq_class rational_from_json(const Json &j)
{
    try {
        if (j.is_number_integer()) {
            return mpq_class(std::to_string(j.get<long long>()));
        }
        if (j.is_number_unsigned()) {
            return mpq_class(std::to_string(j.get<unsigned long long>()));
        }
        if (j.is_string()) {
            const auto s = j.get<std::string>();
            if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos) {
                throw InputError("not a decimal-free rational: \"" + s + "\"");
            }
            mpq_class q(s, 10);
            if (q.get_den() == 0) {
                throw InputError("zero denominator: \"" + s + "\"");
            }
            q.canonicalize();
            return q;
        }
        if (j.is_array() && j.size() == 2) {
            const mpq_class num = rational_from_json(j[0]);
            const mpq_class den = rational_from_json(j[1]);
            if (num.get_den() != 1 || den.get_den() != 1 || sgn(den) == 0) {
                throw InputError("rational pair must hold integers with nonzero denominator");
            }
            mpq_class q(num.get_num(), den.get_num());
            q.canonicalize();
            return q;
        }
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    if (j.is_number_float()) {
        throw InputError("floating-point coefficient rejected: " + j.dump());
    }
    throw InputError("expected a rational, got " + j.dump());
}

Json rational_to_json(const mpq_class &q)
{
    return Json::array({q.get_num().get_str(), q.get_den().get_str()});
}

const Json &field(const Json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

int int_field(const Json &j, const char *key, int lo, int hi)
{
    const Json &v = field(j, key);
    if (!v.is_number_integer()) {
        throw InputError(std::string("field \"") + key + "\" must be an integer");
    }
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
        throw InputError(std::string("field \"") + key + "\" out of range");
    }
    return static_cast<int>(x);
}

std::vector<int> index_list(const Json &j, int dim, const char *what)
{
    if (!j.is_array()) {
        throw InputError(std::string(what) + " must be an array");
    }
    std::vector<int> out;
    for (const auto &x : j) {
        if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() >= dim) {
            throw InputError(std::string(what) + ": index out of range");
        }
        out.push_back(x.get<int>());
    }
    return out;
}

FormMask mask_of(const std::vector<int> &idx, const char *what)
{
    FormMask m = 0;
    for (int i : idx) {
        if (m & (FormMask{1} << i)) {
            throw InputError(std::string(what) + ": repeated index");
        }
        m |= FormMask{1} << i;
    }
    return m;
}

Json mask_to_json(FormMask m)
{
    Json a = Json::array();
    for (int j = 0; m >> j; ++j) {
        if (m & (FormMask{1} << j)) {
            a.push_back(j);
        }
    }
    return a;
}

// Sign to bring dzbar_{i_1} ^ ... ^ dzbar_{i_k} to increasing order.
int ordering_sign(std::vector<int> idx)
{
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[j] < idx[i]) {
                sign = -sign;
            }
        }
    }
    return sign;
}

void fill_exponents(Monomial &m, const Json &term, const char *key, int offset, int count)
{
    if (!term.contains(key)) {
        return;
    }
    const Json &a = term.at(key);
    if (!a.is_array() || static_cast<int>(a.size()) != count) {
        throw InputError(std::string("exponent list \"") + key + "\" has the wrong length");
    }
    for (int i = 0; i < count; ++i) {
        if (!a[i].is_number_integer() || a[i].get<long long>() < 0 || a[i].get<long long>() > 255) {
            throw InputError(std::string("exponent list \"") + key + "\" holds an invalid exponent");
        }
        m.e[offset + i] = static_cast<std::uint8_t>(a[i].get<int>());
    }
}

Json word_to_json(const Word &w)
{
    Json a = Json::array();
    for (int x : w) {
        a.push_back(x);
    }
    return a;
}

} // namespace

Json to_json(const GRat &x)
{
    return Json{{"re", rational_to_json(x.re())}, {"im", rational_to_json(x.im())}};
}

GRat grat_from_json(const Json &j)
{
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            if (k != "re" && k != "im") {
                throw InputError("unexpected key \"" + k + "\" in a coefficient");
            }
        }
        const mpq_class re = j.contains("re") ? rational_from_json(j.at("re")) : mpq_class(0);
        const mpq_class im = j.contains("im") ? rational_from_json(j.at("im")) : mpq_class(0);
        return GRat(re, im);
    }
    return GRat(rational_from_json(j));
}

Json to_json(const Caps &c)
{
    Json o = Json::object();
    for (int g = 0; g < 3; ++g) {
        if (c.r[g] >= kExact) {
            o[kGroupKeys[g]] = "exact";
        } else {
            o[kGroupKeys[g]] = c.r[g];
        }
    }
    return o;
}

Caps caps_from_json(const Json &j)
{
    Caps c;
    for (int g = 0; g < 3; ++g) {
        if (!j.is_object() || !j.contains(kGroupKeys[g])) {
            continue;
        }
        const Json &v = j.at(kGroupKeys[g]);
        if (v.is_string() && v.get<std::string>() == "exact") {
            c.r[g] = kExact;
        } else if (v.is_number_integer() && v.get<long long>() >= 0 && v.get<long long>() < kExact) {
            c.r[g] = v.get<int>();
        } else {
            throw InputError("invalid cap: " + v.dump());
        }
    }
    return c;
}

Json to_json(const TruncSeries &s)
{
    const VarSpec &spec = s.spec();
    Json vars{{"z", spec.n_z}, {"zb", spec.n_zb}, {"u", spec.n_u}};
    Json terms = Json::array();
    for (const auto &[m, c] : s.terms()) {
        Json t = Json::object();
        for (int g = 0; g < 3; ++g) {
            const auto grp = kAllGroups[g];
            if (spec.count(grp) == 0) {
                continue;
            }
            Json e = Json::array();
            for (int i = 0; i < spec.count(grp); ++i) {
                e.push_back(static_cast<int>(m[spec.var(grp, i)]));
            }
            t[kGroupKeys[g]] = std::move(e);
        }
        t["c"] = to_json(c);
        terms.push_back(std::move(t));
    }
    return Json{{"vars", vars}, {"caps", to_json(s.caps().normalized(spec))}, {"terms", terms}};
}

TruncSeries series_from_json(const Json &j)
{
    const Json &vars = field(j, "vars");
    VarSpec spec;
    spec.n_z = vars.contains("z") ? int_field(vars, "z", 0, kMaxVars) : 0;
    spec.n_zb = vars.contains("zb") ? int_field(vars, "zb", 0, kMaxVars) : 0;
    spec.n_u = vars.contains("u") ? int_field(vars, "u", 0, kMaxVars) : 0;
    if (spec.total() > static_cast<int>(kMaxVars)) {
        throw InputError("too many variables in a series");
    }
    const Caps caps = j.contains("caps") ? caps_from_json(j.at("caps")) : Caps::exact();
    TruncSeries s(spec, caps);
    const Json &terms = field(j, "terms");
    if (!terms.is_array()) {
        throw InputError("\"terms\" must be an array");
    }
    for (const auto &t : terms) {
        Monomial m;
        for (int g = 0; g < 3; ++g) {
            const auto grp = kAllGroups[g];
            fill_exponents(m, t, kGroupKeys[g], spec.offset(grp), spec.count(grp));
        }
        s.add_term(m, grat_from_json(field(t, "c")));
    }
    return s;
}

Json tower_to_json(const std::vector<CurvatureTensor> &tower)
{
    Json levels = Json::array();
    for (const auto &r : tower) {
        Json comps = Json::array();
        for (const auto &[key, x] : r.components()) {
            const auto &[l, w, j] = key;
            comps.push_back(Json{{"out", l},
                                 {"in", word_to_json(w)},
                                 {"dzbar", j},
                                 {"at_origin", to_json(x.constant_term())},
                                 {"value", to_json(x)}});
        }
        levels.push_back(Json{{"n", r.degree()}, {"components", std::move(comps)}});
    }
    return levels;
}

std::vector<CurvatureTensor> tower_from_json(const Json &j)
{
    const int dim = int_field(j, "dim", 1, 5);
    const Json &levels = field(j, "tower");
    if (!levels.is_array()) {
        throw InputError("\"tower\" must be an array");
    }
    std::vector<CurvatureTensor> out;
    for (const auto &lv : levels) {
        const int n = int_field(lv, "n", 2, 64);
        std::map<CurvatureTensor::Key, TruncSeries> comps;
        for (const auto &c : field(lv, "components")) {
            const int l = int_field(c, "out", 0, dim - 1);
            const int jb = int_field(c, "dzbar", 0, dim - 1);
            Word w = index_list(field(c, "in"), dim, "input word");
            if (static_cast<int>(w.size()) != n) {
                throw InputError("input word length differs from n");
            }
            std::sort(w.begin(), w.end());
            TruncSeries x = series_from_json(field(c, "value"));
            if (!(x.spec() == VarSpec::base(dim))) {
                throw InputError("tower components must be series over (z, zbar)");
            }
            if (!comps.emplace(CurvatureTensor::Key{l, w, jb}, std::move(x)).second) {
                throw InputError("duplicate tower component");
            }
        }
        out.push_back(CurvatureTensor::from_full(dim, n, comps));
    }
    return out;
}

Json taylor_to_json(const DolbeaultElement &x)
{
    Json comps = Json::array();
    const int top = x.caps()[Group::fiber] >= kExact ? 0 : x.caps()[Group::fiber];
    for (int d = 0; d <= top; ++d) {
        Json forms = Json::array();
        const DolbeaultElement part = x.fiber_part(d);
        for (const auto &[mask, s] : part.forms()) {
            if (!s.is_zero()) {
                forms.push_back(Json{{"dzbar", mask_to_json(mask)}, {"value", to_json(s)}});
            }
        }
        comps.push_back(Json{{"fiber_degree", d}, {"forms", std::move(forms)}});
    }
    return comps;
}

Json alpha_to_json(const std::vector<HomTensor> &omega)
{
    Json out = Json::array();
    for (std::size_t j = 0; j < omega.size(); ++j) {
        // degree -> entries
        std::map<int, Json> by_degree;
        const HomTensor &h = omega[j];
        for (int l = 0; l < h.dim(); ++l) {
            for (const auto &[fib, coeff] : split_fiber(h.image(l))) {
                Word w;
                for (int i = 0; i < h.dim(); ++i) {
                    w.insert(w.end(), fib[i], i);
                }
                auto &slot = by_degree[static_cast<int>(w.size())];
                if (slot.is_null()) {
                    slot = Json::array();
                }
                slot.push_back(Json{{"out", l}, {"in", word_to_json(w)}, {"value", to_json(coeff)}});
            }
        }
        for (auto &[d, entries] : by_degree) {
            out.push_back(Json{{"dzbar", static_cast<int>(j)}, {"degree", d}, {"entries", std::move(entries)}});
        }
    }
    return out;
}

Json to_json(const Certificate &c)
{
    Json j{{"suite", c.suite},   {"identity", c.identity},         {"anchor", c.anchor},
           {"caps", c.caps},     {"status", c.pass ? "pass" : "fail"}, {"checked", c.checked}};
    if (!c.pass) {
        j["monomial"] = c.monomial;
        j["coefficient"] = c.coefficient;
        j["stage"] = c.stage;
    }
    return j;
}

ChartMetric metric_from_json(const Json &j)
{
    if (j.contains("potential") == j.contains("matrix")) {
        throw InputError("metric file needs exactly one of \"matrix\" and \"potential\"");
    }
    auto check_base = [](const TruncSeries &s) {
        if (s.spec().n_u != 0 || s.spec().n_z != s.spec().n_zb || s.spec().n_z == 0) {
            throw InputError("metric data must be series over (z, zbar)");
        }
    };
    if (j.contains("potential")) {
        TruncSeries k = series_from_json(j.at("potential"));
        check_base(k);
        return ChartMetric::from_potential(k);
    }
    const Json &rows = j.at("matrix");
    if (!rows.is_array() || rows.empty()) {
        throw InputError("\"matrix\" must be a nonempty array of rows");
    }
    SeriesMatrix m;
    for (const auto &row : rows) {
        if (!row.is_array() || row.size() != rows.size()) {
            throw InputError("\"matrix\" must be square");
        }
        std::vector<TruncSeries> r;
        for (const auto &x : row) {
            r.push_back(series_from_json(x));
            check_base(r.back());
            if (r.back().spec().n_z != static_cast<int>(rows.size())) {
                throw InputError("matrix size differs from the number of variables");
            }
        }
        m.push_back(std::move(r));
    }
    return ChartMetric(std::move(m));
}

BiChartForm form_from_json(const Json &j)
{
    const int dim = int_field(j, "dim", 1, 4);
    const VarSpec spec = BiChartForm::spec(dim);
    BiChartForm out(dim);
    const Json &terms = field(j, "terms");
    if (!terms.is_array()) {
        throw InputError("\"terms\" must be an array");
    }
    for (const auto &t : terms) {
        Monomial m;
        fill_exponents(m, t, "z", spec.var(Group::holo, 0), dim);
        fill_exponents(m, t, "w", spec.var(Group::holo, dim), dim);
        fill_exponents(m, t, "zb", spec.var(Group::antiholo, 0), dim);
        fill_exponents(m, t, "wb", spec.var(Group::antiholo, dim), dim);
        std::vector<int> dz, dw;
        if (t.contains("dzbar")) {
            dz = index_list(t.at("dzbar"), dim, "dzbar");
        }
        if (t.contains("dwbar")) {
            dw = index_list(t.at("dwbar"), dim, "dwbar");
        }
        const GRat c = grat_from_json(field(t, "c")) * GRat(ordering_sign(dz) * ordering_sign(dw));
        out.add(mask_of(dz, "dzbar"), mask_of(dw, "dwbar"), TruncSeries::monomial(spec, m, c));
    }
    return out;
}

ConnectionJet family_from_json(const Json &j)
{
    const int order = int_field(j, "order", 1, 64);
    const Json &g = field(j, "gamma");
    if (!g.is_array() || g.empty()) {
        throw InputError("\"gamma\" must be a nonempty array");
    }
    const int n = static_cast<int>(g.size());
    Tensor3 gamma(n);
    for (int k = 0; k < n; ++k) {
        if (!g[k].is_array() || static_cast<int>(g[k].size()) != n) {
            throw InputError("\"gamma\" must be an n x n x n array");
        }
        for (const auto &row : g[k]) {
            if (!row.is_array() || static_cast<int>(row.size()) != n) {
                throw InputError("\"gamma\" must be an n x n x n array");
            }
            std::vector<TruncSeries> r;
            for (const auto &x : row) {
                r.push_back(series_from_json(x));
                if (!(r.back().spec() == VarSpec::full(n))) {
                    throw InputError("family Christoffel symbols must be series over (z, zbar, u)");
                }
            }
            gamma[k].push_back(std::move(r));
        }
    }
    return ConnectionJet(std::move(gamma), order);
}

Json family_to_json(const ConnectionJet &c)
{
    Json g = Json::array();
    for (const auto &plane : c.christoffels()) {
        Json p = Json::array();
        for (const auto &row : plane) {
            Json r = Json::array();
            for (const auto &x : row) {
                r.push_back(to_json(x));
            }
            p.push_back(std::move(r));
        }
        g.push_back(std::move(p));
    }
    return Json{{"schema_version", kSchemaVersion}, {"order", c.order()}, {"gamma", std::move(g)}};
}

Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw InputError(path + ": " + e.what());
    }
}

} // namespace kapranov
