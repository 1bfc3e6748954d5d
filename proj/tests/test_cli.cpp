#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <kapranov/serialize.hpp>

#include "test_support.hpp"

using namespace kapranov;
using namespace kapranov::testing;
namespace fs = std::filesystem;

namespace
{

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch(const std::string &name)
{
    static std::atomic<int> counter{0};
    const fs::path dir = fs::temp_directory_path() / ("kapranov_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / (std::to_string(counter++) + "_" + name);
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_file(const std::string &name, const std::string &text)
{
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

Run cli(const std::string &args, const std::string &env = "")
{
    const auto out = scratch("out");
    const auto err = scratch("err");
    const std::string cmd =
        env + " " + KAPRANOV_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string sample(const std::string &name)
{
    return std::string(KAPRANOV_SOURCE_DIR) + "/tools/samples/" + name;
}

std::vector<Json> json_lines(const std::string &text)
{
    std::vector<Json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(Json::parse(line));
    }
    return out;
}

// Coefficient of z^a u^b in a dim-1 series document.
GRat coeff_z_u(const Json &series, int a, int b)
{
    const TruncSeries s = series_from_json(series);
    Monomial m;
    m.e[s.spec().var(Group::holo, 0)] = static_cast<std::uint8_t>(a);
    if (s.spec().n_u) {
        m.e[s.spec().var(Group::fiber, 0)] = static_cast<std::uint8_t>(b);
    }
    return s.coeff(m);
}

} // namespace

TEST_CASE("exact rationals in JSON")
{
    CHECK(to_json(GRat(-3, 4)) == Json::parse(R"({"re":["-3","4"],"im":["0","1"]})"));
    CHECK(grat_from_json(Json::parse(R"("6/-8")")) == GRat(-3, 4));
    CHECK(grat_from_json(Json::parse(R"({"re":[2,4],"im":"1/3"})")) == GRat(mpq_class(1, 2), mpq_class(1, 3)));
    CHECK(grat_from_json(Json(7)) == GRat(7));
    CHECK_THROWS_AS(grat_from_json(Json(0.5)), InputError);
    CHECK_THROWS_AS(grat_from_json(Json("0.5")), InputError);
    CHECK_THROWS_AS(grat_from_json(Json("1/0")), InputError);
    CHECK_THROWS_AS(grat_from_json(Json::parse(R"({"re":1,"x":2})")), InputError);

    Rng rng(71);
    const VarSpec full = VarSpec::full(2);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_series(rng, full, Caps::of(3, 2, 4), 4, 6);
        CHECK(series_from_json(to_json(s)) == s);
        CHECK(series_from_json(Json::parse(to_json(s).dump())) == s);
    }
}

TEST_CASE("exit codes")
{
    CHECK(cli("verify --metric flat --dim 1 --suites kapranov").code == 0);
    CHECK(cli("verify --metric fubini_study --dim 1 -B 4 -N 5 --suites kapranov").code == 0);

    const auto infeasible = cli("verify -B 2 -N 4 --n-max 3");
    CHECK(infeasible.code == 2);
    CHECK(infeasible.err.find("max feasible n_max for these B, N is 2") != std::string::npos);
    CHECK(cli("verify -N 2 --n-max 4").code == 2);
    CHECK(cli("verify --no-such-flag").code == 2);
    CHECK(cli("verify --suites algebra,nonsense").code == 2);
    CHECK(cli("verify --metric hyperbolic").code == 2);
    CHECK(cli("taylor --metric flat").code == 2);
    CHECK(cli("").code == 2);

    const auto floaty = write_file("float_metric.json", R"({"potential":{"vars":{"z":1,"zb":1},
        "terms":[{"z":[1],"zb":[1],"c":0.5}]}})");
    const auto r = cli("verify --metric-file " + floaty.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("floating-point") != std::string::npos);

    // Known to order 5 only, while B = N = 4 needs order 9.
    const auto short_metric = write_file("short_metric.json", R"({"potential":{"vars":{"z":1,"zb":1},
        "caps":{"z":6,"zb":6},"terms":[{"z":[1],"zb":[1],"c":1}]}})");
    const auto s = cli("verify --metric-file " + short_metric.string());
    CHECK(s.code == 2);
    CHECK(s.err.find("max feasible N with B = 2 is 2") != std::string::npos);
    CHECK(cli("verify --metric-file " + short_metric.string() + " -B 2 -N 2").code == 0);
}

TEST_CASE("identity violations exit with status one")
{
    // Hermitian but not Kahler: h_{0 1bar} = z_1.
    const auto m = write_file("non_kahler.json", R"({"matrix":[
        [{"vars":{"z":2,"zb":2},"terms":[{"z":[0,0],"zb":[0,0],"c":1}]},
         {"vars":{"z":2,"zb":2},"terms":[{"z":[0,1],"zb":[0,0],"c":1}]}],
        [{"vars":{"z":2,"zb":2},"terms":[{"z":[0,0],"zb":[0,1],"c":1}]},
         {"vars":{"z":2,"zb":2},"terms":[{"z":[0,0],"zb":[0,0],"c":1}]}]]})");
    const auto r = cli("verify --metric-file " + m.string() + " -B 2 -N 2 --n-max 2 --suites kapranov");
    CHECK(r.code == 1);
    bool saw_kahler_failure = false;
    for (const auto &c : json_lines(r.out)) {
        if (c["status"] == "fail") {
            CHECK(c.contains("monomial"));
            CHECK(c.contains("coefficient"));
            CHECK(c.contains("stage"));
        }
        saw_kahler_failure = saw_kahler_failure || (c["identity"] == "metric_kahler" && c["status"] == "fail");
    }
    CHECK(saw_kahler_failure);
    CHECK(r.err.find("FAIL kapranov/metric_kahler") != std::string::npos);
}

TEST_CASE("certificate stream is sorted and deterministic")
{
    const std::string args = "verify --dim 2 -B 2 -N 3 --n-max 2 --seed 11";
    const auto one = cli(args, "KAPRANOV_THREADS=1");
    const auto many = cli(args, "KAPRANOV_THREADS=4");
    REQUIRE(one.code == 0);
    CHECK(one.out == many.out);
    CHECK(one.out == cli(args).out);
    const auto certs = json_lines(one.out);
    CHECK(certs.size() > 20);
    for (std::size_t i = 1; i < certs.size(); ++i) {
        const auto a = std::make_pair(certs[i - 1]["suite"].get<std::string>(), certs[i - 1]["identity"].get<std::string>());
        const auto b = std::make_pair(certs[i]["suite"].get<std::string>(), certs[i]["identity"].get<std::string>());
        CHECK(a < b);
    }
    for (const auto &c : certs) {
        CHECK(c["status"] == "pass");
        CHECK_FALSE(c["anchor"].get<std::string>().empty());
    }
}

TEST_CASE("config file with flag overrides")
{
    const auto cfg = write_file("cfg.json", R"({"schema_version":"1.0.0","metric":"flat","dim":2,
        "base_order":3,"fiber_cap":3,"n_max":3,"suites":["algebra"]})");
    const auto doc = Json::parse(cli("curvature --config " + cfg.string()).out);
    CHECK(doc["metric"] == "flat");
    CHECK(doc["dim"] == 2);
    const auto over = Json::parse(cli("curvature --config " + cfg.string() + " --dim 1 --metric fubini_study").out);
    CHECK(over["metric"] == "fubini_study");
    CHECK(over["dim"] == 1);
    CHECK(over["n_max"] == 3);

    const auto bad = write_file("bad_cfg.json", R"({"metric":"flat","colour":"blue"})");
    CHECK(cli("verify --config " + bad.string()).code == 2);
    CHECK(cli("verify --config " + sample("user_potential.json")).code == 0);
}

TEST_CASE("flat metric exports an all-zero tower")
{
    const auto r = cli("curvature --metric flat --dim 2 -B 4 -N 3 --n-max 4");
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["conventions"]["tensor"] == "tangent");
    CHECK(doc["conventions"]["cotangent_sign"] == -1);
    REQUIRE(doc["tower"].size() == 3);
    for (const auto &level : doc["tower"]) {
        for (const auto &c : level["components"]) {
            CHECK(c["value"]["terms"].empty());
        }
    }
}

TEST_CASE("Fubini-Study curvature in dimension one")
{
    const auto doc = Json::parse(cli("curvature --metric fubini_study --dim 1 -B 2 -N 2 --n-max 2").out);
    REQUIRE(doc["tower"].size() == 1);
    const auto &level = doc["tower"][0];
    CHECK(level["n"] == 2);
    REQUIRE(level["components"].size() == 1);
    const auto &c = level["components"][0];
    CHECK(c["in"] == Json::parse("[0,0]"));
    // R_{z z zbar}^z at the origin of the affine chart.
    CHECK(c["at_origin"] == to_json(GRat(2)));
    CHECK(grat_from_json(c["at_origin"]) == curvature_R(levi_civita(ChartMetric::fubini_study(1, 4))).at(0, {0, 0}, 0).constant_term());
}

TEST_CASE("exported tower round-trips to the same operator")
{
    const std::string metric = sample("quartic_potential.json");
    const auto r = cli("curvature --metric-file " + metric + " -B 4 -N 3 --n-max 4");
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    const auto tower = tower_from_json(doc);
    REQUIRE(tower.size() == 3);
    CHECK_FALSE(tower.back().is_zero());
    CHECK(tower_to_json(tower) == doc["tower"]);

    const auto h = metric_from_json(read_json_file(metric));
    const auto model = kahler_model(h, 4, 3);
    const KapranovOperator imported(tower, model.caps);
    for (const auto &e : truncated_basis(1, model.caps)) {
        CHECK(imported.apply(e) == model.op.apply(e));
    }
}

TEST_CASE("taylor subcommand")
{
    const auto r = cli("taylor --metric flat --dim 1 -B 3 -N 3 --input " + sample("w_squared.json"));
    REQUIRE(r.code == 0);
    const auto comps = Json::parse(r.out)["components"];
    REQUIRE(comps.size() == 4);
    // w^2 -> z^2, 2 z u, u^2
    CHECK(coeff_z_u(comps[0]["forms"][0]["value"], 2, 0) == GRat(1));
    CHECK(coeff_z_u(comps[1]["forms"][0]["value"], 1, 1) == GRat(2));
    CHECK(coeff_z_u(comps[2]["forms"][0]["value"], 0, 2) == GRat(1));
    for (int d = 0; d < 3; ++d) {
        CHECK(comps[d]["forms"].size() == 1);
        CHECK(series_from_json(comps[d]["forms"][0]["value"]).size() == 1);
    }
    CHECK(comps[3]["forms"].empty());

    const auto constant = write_file("const.json", R"({"dim":1,"terms":[{"c":"5/2"}]})");
    const auto c = Json::parse(cli("taylor --dim 1 -B 3 -N 3 --input " + constant.string()).out)["components"];
    CHECK(coeff_z_u(c[0]["forms"][0]["value"], 0, 0) == GRat(5, 2));
    for (std::size_t d = 1; d < c.size(); ++d) {
        CHECK(c[d]["forms"].empty());
    }

    // First factor only: no fiber dependence even on a curved chart.
    const auto first = write_file("first.json", R"({"dim":1,"terms":[{"z":[2],"zb":[1],"c":3}]})");
    const auto f = Json::parse(cli("taylor --dim 1 -B 3 -N 3 --input " + first.string()).out)["components"];
    CHECK_FALSE(f[0]["forms"].empty());
    for (std::size_t d = 1; d < f.size(); ++d) {
        CHECK(f[d]["forms"].empty());
    }

    CHECK(cli("taylor --dim 2 --input " + sample("w_squared.json")).code == 2);
    const auto floaty = write_file("float_form.json", R"({"dim":1,"terms":[{"w":[1],"c":1.5}]})");
    CHECK(cli("taylor --dim 1 --input " + floaty.string()).code == 2);
}

TEST_CASE("export-alpha")
{
    const auto doc = Json::parse(cli("export-alpha --metric fubini_study --dim 1 -B 3 -N 3").out);
    CHECK(doc["source"] == "kahler_family");
    bool found = false;
    for (const auto &a : doc["alpha"]) {
        if (a["degree"] == 2) {
            REQUIRE(a["entries"].size() == 1);
            const auto &e = a["entries"][0];
            CHECK(e["in"] == Json::parse("[0,0]"));
            {
                // R_2 / 2! at the origin
                CHECK(series_from_json(e["value"]).constant_term() == GRat(1));
                found = true;
            }
        }
    }
    CHECK(found);

    Rng rng(72);
    const auto fam = random_section_family(rng, 1, 3);
    const auto file = write_file("family.json", family_to_json(fam).dump());
    const auto r = cli("export-alpha --dim 1 -B 3 -N 3 --family " + file.string());
    REQUIRE(r.code == 0);
    const auto got = Json::parse(r.out);
    CHECK(got["source"] == "family_file");
    CHECK(got["alpha"] == alpha_to_json(omega_from_section(fam, Caps::of(3, 3, 3))));
    CHECK_FALSE(got["alpha"].empty());

    CHECK(cli("export-alpha --dim 1 -B 3 -N 4 --family " + file.string()).code == 2);
}
