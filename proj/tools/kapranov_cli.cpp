// Command-line front end: verification suites and JSON export.
// Exit status: 0 pass, 1 identity violation, 2 input or feasibility error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include <kapranov/serialize.hpp>
#include <kapranov/suites.hpp>

using namespace kapranov;

namespace
{

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct RunConfig {
    std::string metric = "fubini_study";
    std::string metric_file;
    std::optional<int> dim;
    int base_order = 4;
    int fiber_cap = 4;
    std::optional<int> n_max;
    std::uint64_t seed = 0;
    std::vector<std::string> suites = suite_names();

    int resolved_n_max() const
    {
        return n_max ? *n_max : std::min(base_order, fiber_cap + 1);
    }
};

struct Flags {
    std::string config;
    std::optional<std::string> metric;
    std::optional<std::string> metric_file;
    std::optional<int> dim;
    std::optional<int> base_order;
    std::optional<int> fiber_cap;
    std::optional<int> n_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> suites;
    std::string output;
    std::string input;
    std::string family;
};

int int_value(const Json &v, const std::string &key)
{
    if (!v.is_number_integer()) {
        throw InputError("config: \"" + key + "\" must be an integer");
    }
    return v.get<int>();
}

RunConfig load_config(const Flags &f)
{
    RunConfig c;
    if (!f.config.empty()) {
        const Json j = read_json_file(f.config);
        if (!j.is_object()) {
            throw InputError("config: top level must be an object");
        }
        const auto dir = std::filesystem::path(f.config).parent_path();
        for (const auto &[k, v] : j.items()) {
            if (k == "schema_version") {
                if (v != kSchemaVersion) {
                    throw InputError("config: unsupported schema_version " + v.dump());
                }
            } else if (k == "metric") {
                c.metric = v.get<std::string>();
            } else if (k == "metric_file") {
                const std::filesystem::path p(v.get<std::string>());
                c.metric_file = (p.is_relative() ? dir / p : p).string();
            } else if (k == "dim") {
                c.dim = int_value(v, k);
            } else if (k == "base_order") {
                c.base_order = int_value(v, k);
            } else if (k == "fiber_cap") {
                c.fiber_cap = int_value(v, k);
            } else if (k == "n_max") {
                c.n_max = int_value(v, k);
            } else if (k == "seed") {
                if (!v.is_number_unsigned()) {
                    throw InputError("config: \"seed\" must be a nonnegative integer");
                }
                c.seed = v.get<std::uint64_t>();
            } else if (k == "suites") {
                c.suites = v.get<std::vector<std::string>>();
            } else {
                throw InputError("config: unknown key \"" + k + "\"");
            }
        }
    }
    if (f.metric) {
        c.metric = *f.metric;
    }
    if (f.metric_file) {
        c.metric_file = *f.metric_file;
        if (!f.metric) {
            c.metric = "user";
        }
    }
    if (f.dim) {
        c.dim = f.dim;
    }
    if (f.base_order) {
        c.base_order = *f.base_order;
    }
    if (f.fiber_cap) {
        c.fiber_cap = *f.fiber_cap;
    }
    if (f.n_max) {
        c.n_max = f.n_max;
    }
    if (f.seed) {
        c.seed = *f.seed;
    }
    if (f.suites) {
        c.suites = *f.suites;
    }
    return c;
}

void validate(RunConfig &c)
{
    if (c.metric != "flat" && c.metric != "fubini_study" && c.metric != "user") {
        throw InputError("unknown metric \"" + c.metric + "\" (flat, fubini_study, user)");
    }
    if (c.metric == "user" && c.metric_file.empty()) {
        throw InputError("metric \"user\" needs a metric file");
    }
    if (c.dim && (*c.dim < 1 || *c.dim > 4)) {
        throw InputError("dim must lie in 1..4");
    }
    if (c.base_order < 1 || c.fiber_cap < 1) {
        throw InputError("base order and fiber cap must be positive");
    }
    const int n_max = c.resolved_n_max();
    if (n_max < 2 || n_max > c.fiber_cap + 1 || c.base_order < n_max) {
        std::ostringstream os;
        os << "infeasible orders: B = " << c.base_order << ", N = " << c.fiber_cap << ", n_max = " << n_max
           << " (need 2 <= n_max <= N + 1 and B >= n_max); max feasible n_max for these B, N is "
           << std::min(c.base_order, c.fiber_cap + 1) << ", min feasible B for this n_max is " << std::max(n_max, 2)
           << ", min feasible N is " << std::max(n_max - 1, 1);
        throw InputError(os.str());
    }
    std::set<std::string> seen;
    std::vector<std::string> unique;
    for (const auto &s : c.suites) {
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
            throw InputError("unknown suite \"" + s + "\"");
        }
        if (seen.insert(s).second) {
            unique.push_back(s);
        }
    }
    c.suites = unique;
}

ChartMetric build_metric(const RunConfig &c)
{
    const int need = model_metric_order(c.base_order, c.fiber_cap);
    if (c.metric == "flat") {
        return ChartMetric::flat(c.dim.value_or(1), need);
    }
    if (c.metric == "fubini_study") {
        return ChartMetric::fubini_study(c.dim.value_or(1), need);
    }
    ChartMetric h = metric_from_json(read_json_file(c.metric_file));
    if (c.dim && *c.dim != h.dim()) {
        throw InputError("metric file has dimension " + std::to_string(h.dim()) + ", config asks for " +
                         std::to_string(*c.dim));
    }
    if (h.order() < need) {
        std::ostringstream os;
        os << "metric file is known to order " << h.order() << ", B = " << c.base_order << " and N = " << c.fiber_cap
           << " need order " << need << "; ";
        if (h.order() - c.fiber_cap - 1 >= 2) {
            os << "max feasible B for this N is " << h.order() - c.fiber_cap - 1;
        } else {
            os << "no B >= 2 is feasible for this N, max feasible N with B = 2 is " << h.order() - 3;
        }
        throw InputError(os.str());
    }
    if (!h.hermitian()) {
        throw InputError("metric is not hermitian");
    }
    return h.truncated(need);
}

Json header(const RunConfig &c, const char *kind, int dim)
{
    return Json{{"schema_version", kSchemaVersion},
                {"kind", kind},
                {"metric", c.metric},
                {"dim", dim},
                {"base_order", c.base_order},
                {"fiber_cap", c.fiber_cap},
                {"n_max", c.resolved_n_max()},
                {"conventions",
                 {{"tensor", "tangent"},
                  {"cotangent_sign", -1},
                  {"input_order", "sorted"},
                  {"dzbar_slot", "last"}}}};
}

void emit(const Json &doc, const std::string &path)
{
    if (path.empty() || path == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << doc.dump(2) << '\n';
}

int cmd_verify(const RunConfig &c)
{
    SuiteParams p{build_metric(c), c.metric == "flat", c.base_order, c.fiber_cap, c.resolved_n_max(), c.seed};
    const auto certs = run_suites(c.suites, p);
    int failed = 0;
    for (const auto &cert : certs) {
        std::cout << to_json(cert).dump() << '\n';
        std::cerr << (cert.pass ? "PASS " : "FAIL ") << cert.suite << '/' << cert.identity << "  caps " << cert.caps
                  << "  checked " << cert.checked;
        if (!cert.pass) {
            ++failed;
            std::cerr << "\n     at " << cert.monomial << " = " << cert.coefficient << " [" << cert.stage << ']';
        }
        std::cerr << '\n';
    }
    std::cerr << certs.size() - failed << " of " << certs.size() << " certificates pass\n";
    return failed ? kExitViolation : kExitPass;
}

int cmd_curvature(const RunConfig &c, const Flags &f)
{
    const ChartMetric h = build_metric(c);
    const ChartConnection g = levi_civita(h);
    const auto tower = covariant_tower(g, curvature_R(g), c.resolved_n_max());
    Json doc = header(c, "curvature_tower", h.dim());
    doc["tower"] = tower_to_json(tower);
    emit(doc, f.output);
    return kExitPass;
}

int cmd_taylor(const RunConfig &c, const Flags &f)
{
    if (f.input.empty()) {
        throw InputError("taylor needs --input");
    }
    const BiChartForm eta = form_from_json(read_json_file(f.input));
    const ChartMetric h = build_metric(c);
    if (eta.dim() != h.dim()) {
        throw InputError("form dimension " + std::to_string(eta.dim()) + " differs from metric dimension " +
                         std::to_string(h.dim()));
    }
    const auto model = kahler_model(h, c.base_order, c.fiber_cap);
    Json doc = header(c, "taylor", h.dim());
    doc["caps"] = to_json(model.caps);
    doc["components"] = taylor_to_json(exp_star(model.family, eta, model.caps));
    emit(doc, f.output);
    return kExitPass;
}

int cmd_export_alpha(const RunConfig &c, const Flags &f)
{
    const Caps caps = Caps::of(c.base_order, c.base_order, c.fiber_cap);
    std::vector<HomTensor> omega;
    int dim = 0;
    Json doc;
    if (!f.family.empty()) {
        const ConnectionJet fam = family_from_json(read_json_file(f.family));
        if (fam.order() < c.fiber_cap + 1) {
            throw InputError("family order " + std::to_string(fam.order()) + " below N + 1 = " +
                             std::to_string(c.fiber_cap + 1) + "; max feasible N is " + std::to_string(fam.order() - 1));
        }
        if (!fam.torsion_free() || !fam.flat()) {
            throw InputError("family is not flat and torsion-free in the fiber directions");
        }
        omega = omega_from_section(fam, caps);
        dim = fam.dim();
        doc = header(c, "alpha", dim);
        doc["source"] = "family_file";
    } else {
        const auto model = kahler_model(build_metric(c), c.base_order, c.fiber_cap);
        omega = omega_from_section(model.family, model.caps);
        dim = model.metric.dim();
        doc = header(c, "alpha", dim);
        doc["source"] = "kahler_family";
    }
    doc["caps"] = to_json(caps);
    doc["alpha"] = alpha_to_json(omega);
    emit(doc, f.output);
    return kExitPass;
}

void add_run_options(CLI::App &app, Flags &f)
{
    app.add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    app.add_option("--metric", f.metric, "flat, fubini_study or user");
    app.add_option("--metric-file", f.metric_file, "JSON metric (matrix or potential); implies --metric user");
    app.add_option("--dim", f.dim, "complex dimension");
    app.add_option("-B,--base-order", f.base_order, "base order B");
    app.add_option("-N,--fiber-cap", f.fiber_cap, "fiber cap N");
    app.add_option("--n-max", f.n_max, "top curvature degree");
    app.add_option("--seed", f.seed, "seed for randomized suites");
    app.add_option("--suites", f.suites, "comma-separated suites")->delimiter(',');
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact checks of the Kapranov structure on Kahler charts"};
    app.require_subcommand(1);
    Flags flags;
    auto *verify = app.add_subcommand("verify", "run identity suites; certificates on stdout");
    auto *curvature = app.add_subcommand("curvature", "export the curvature tower");
    auto *taylor = app.add_subcommand("taylor", "Taylor expansion of a bi-chart form");
    auto *alpha = app.add_subcommand("export-alpha", "defect of a section family or of the Kahler family");
    for (auto *sub : {verify, curvature, taylor, alpha}) {
        add_run_options(*sub, flags);
    }
    for (auto *sub : {curvature, taylor, alpha}) {
        sub->add_option("-o,--output", flags.output, "output file (default stdout)");
    }
    taylor->add_option("--input", flags.input, "bi-chart form JSON")->required()->check(CLI::ExistingFile);
    alpha->add_option("--family", flags.family, "section family JSON")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        RunConfig cfg = load_config(flags);
        validate(cfg);
        if (verify->parsed()) {
            return cmd_verify(cfg);
        }
        if (curvature->parsed()) {
            return cmd_curvature(cfg, flags);
        }
        if (taylor->parsed()) {
            return cmd_taylor(cfg, flags);
        }
        return cmd_export_alpha(cfg, flags);
    } catch (const OrderError &e) {
        std::cerr << "error: " << e.what() << " (max feasible " << e.max_feasible << ")\n";
        return kExitInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
