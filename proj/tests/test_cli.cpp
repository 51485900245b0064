#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
    fs::path dir;

    Sandbox()
    {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("nifs-cli-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    fs::path write(const std::string& name, const std::string& text) const
    {
        const fs::path p = dir / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    std::string read(const std::string& name) const
    {
        std::ifstream in(dir / name, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // Runs the CLI with stdout and stderr captured in `log`; returns the exit code.
    int run(const std::string& args, const std::string& env = "") const
    {
        const std::string cmd = env + " \"" NIFS_ATLAS_BIN "\" " + args + " > \"" + (dir / "log").string() + "\" 2>&1";
        const int st = std::system(cmd.c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }

    std::string log() const { return read("log"); }
};

std::string cantor_certify(int horizon, const std::string& extra_params = "")
{
    return R"x({"system": {"family": "cantor", "m": 2, "a_rule": "1/(j+2)", "seed_mode": "disk"},
              "horizon": )x" + std::to_string(horizon) + R"x(, "params": {)x" + extra_params + "}}";
}

const std::string kJuliaDichotomy =
    R"x({"system": {"family": "julia", "quad_a": 4, "quad_c": 2, "a_rule": 2}, "horizon": 30})x";

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s)
        n += c == '\n';
    return n;
}

bool has_temp_files(const fs::path& dir)
{
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().filename().string().find(".tmp") != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("cli certify writes a certified certificate")
{
    Sandbox sb;
    const auto cfg = sb.write("c.json", cantor_certify(30));
    REQUIRE(sb.run("certify --config " + cfg.string() + " --out " + sb.dir.string()) == 0);
    const json cert = json::parse(sb.read("certificate.json"));
    CHECK(cert.at("verdict") == "certified");
    int verified = 0;
    for (const auto& e : cert.at("entries"))
        verified += e.at("separationVerified").get<bool>();
    CHECK(verified >= 5);
    CHECK_FALSE(has_temp_files(sb.dir));
}

TEST_CASE("cli dichotomy report")
{
    Sandbox sb;
    const auto cfg = sb.write("d.json", kJuliaDichotomy);
    REQUIRE(sb.run("dichotomy --config " + cfg.string() + " --out " + sb.dir.string()) == 0);
    const std::string csv = sb.read("dichotomy.csv");
    CHECK(count_lines(csv) == 31);
    CHECK(csv.rfind("j,a_j_modulus,b_lower,delta_lower,eta_upper,ratio\n", 0) == 0);
    CHECK(sb.log().find("BOUNDED") != std::string::npos);
}

TEST_CASE("cli rejects bad configs with exit code 2")
{
    Sandbox sb;
    const auto unknown_family =
        sb.write("f.json", R"x({"system": {"family": "mandelbrot"}, "horizon": 3})x");
    CHECK(sb.run("pieces --config " + unknown_family.string() + " --out " + sb.dir.string()) == 2);
    CHECK(sb.log().find("unknown family") != std::string::npos);

    const auto unknown_key = sb.write(
        "k.json", R"x({"system": {"family": "cantor", "m": 2, "a_rule": 0.25, "colour": 1}, "horizon": 3})x");
    CHECK(sb.run("pieces --config " + unknown_key.string() + " --out " + sb.dir.string()) == 2);
    CHECK(sb.log().find("colour") != std::string::npos);

    const auto small_c = sb.write("s.json", cantor_certify(30, R"x("c": 2)x"));
    CHECK(sb.run("certify --config " + small_c.string() + " --out " + sb.dir.string()) == 2);
    CHECK(sb.log().find("n=1") != std::string::npos);

    const auto bad_expr = sb.write(
        "e.json", R"x({"system": {"family": "cantor", "m": 2, "a_rule": "1/(j+"}, "horizon": 3})x");
    CHECK(sb.run("pieces --config " + bad_expr.string() + " --out " + sb.dir.string()) == 2);
    CHECK(sb.log().find("syntax") != std::string::npos);

    const auto not_json = sb.write("n.json", "{ nope");
    CHECK(sb.run("pieces --config " + not_json.string() + " --out " + sb.dir.string()) == 2);

    CHECK(sb.run("pieces --config " + (sb.dir / "missing.json").string()) == 2);
    CHECK(sb.run("frobnicate") == 2);
    CHECK(sb.run("") == 2);
}

TEST_CASE("cli output is deterministic across reruns and thread counts")
{
    Sandbox sb;
    const auto cfg = sb.write("c.json", cantor_certify(30));
    REQUIRE(sb.run("certify --config " + cfg.string() + " --out " + sb.dir.string() + " --threads 1") == 0);
    const std::string first = sb.read("certificate.json");
    REQUIRE(sb.run("certify --config " + cfg.string() + " --out " + sb.dir.string() + " --threads 4") == 0);
    CHECK(sb.read("certificate.json") == first);

    const auto sample = sb.write("r.json", R"x({"system": {"family": "julia", "quad_a": 4, "quad_c": 2,
        "random": {"distribution": "one-plus-pareto", "shape": 1.5, "scale": 1, "seed": 99}},
        "horizon": 20, "action": "sample", "params": {"count": 8}})x");
    REQUIRE(sb.run("sample --config " + sample.string() + " --out " + sb.dir.string() + " --threads 1") == 0);
    const std::string s1 = sb.read("sample.json");
    REQUIRE(sb.run("sample --config " + sample.string() + " --out " + sb.dir.string(), "NIFS_ATLAS_THREADS=3") == 0);
    CHECK(sb.read("sample.json") == s1);
    REQUIRE(sb.run("sample --config " + sample.string() + " --out " + sb.dir.string() + " --seed 100") == 0);
    CHECK(sb.read("sample.json") != s1);
    CHECK_FALSE(has_temp_files(sb.dir));
}

TEST_CASE("cli examples")
{
    Sandbox sb;
    REQUIRE(sb.run("examples") == 0);
    const std::string listing = sb.log();
    CHECK(listing.find("figure1") != std::string::npos);
    CHECK(listing.find("julia-bounded") != std::string::npos);
    CHECK(listing.find("julia-sample") != std::string::npos);

    CHECK(sb.run("examples no-such-preset") == 2);
    CHECK(sb.run("examples figure1 --out " + sb.dir.string()) == 0);
    CHECK(fs::exists(sb.dir / "figure1.csv"));
    CHECK(sb.run("examples figure1 --out " + sb.dir.string(), "NIFS_ATLAS_THREADS=abc") == 2);
}
