// End-to-end checks of the command line binary: exit codes, artifact
// schemas, determinism. The binary path arrives as --skop-bin=<path>.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g_bin;
int g_dir_counter = 0;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_bin + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) output += buf;
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

fs::path fresh_dir() {
    const fs::path dir = fs::path("cli_out") / std::to_string(g_dir_counter++);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json load_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> load_csv(const fs::path& p, std::vector<std::string>* header) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    header->clear();
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) header->push_back(cell);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("kernel: validation passes for a B-spline, table schema is stable") {
    const auto dir = fresh_dir();
    const auto r = run("kernel --spec bspline:n=3 --validate --u-grid 128 --tol 1e-10 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto v = load_json(dir / "validation.json");
    CHECK(v["pass"] == true);
    std::vector<std::string> header;
    const auto rows = load_csv(dir / "kernel_table.csv", &header);
    CHECK(header == std::vector<std::string>{"x", "chi", "psi_minus", "psi_plus"});
    CHECK(rows.size() == 401);
}

TEST_CASE("kernel: classification surfaces the jump parameter") {
    const auto dir = fresh_dir();
    const auto r = run("kernel --spec compound-bspline:n=2,alpha=0.3 --classify --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto v = load_json(dir / "validation.json");
    CHECK(v["classification"]["kind"] == "constant-alpha");
    CHECK(std::abs(v["classification"]["alpha"].get<double>() - 0.3) < 1e-9);
}

TEST_CASE("kernel: the step function alone fails (chi2) with exit 1") {
    const auto dir = fresh_dir();
    const auto r = run("kernel --spec steps --validate --u-grid 64 --out " + dir.string());
    CHECK(r.exit_code == 1);
    const auto v = load_json(dir / "validation.json");
    CHECK(v["pass"] == false);
}

TEST_CASE("parse errors exit with code 2") {
    CHECK(run("kernel --spec nonsense:z=1 --out cli_out/x").exit_code == 2);
    CHECK(run("kernel --spec bspline:n=two --out cli_out/x").exit_code == 2);
    CHECK(run("reconstruct --spec bspline:n=2").exit_code == 2); // missing required flags
    CHECK(run("experiment jump-scan --spec fejer --mode bogus --out cli_out/x").exit_code == 2);
}

TEST_CASE("reconstruct: jump plateau appears in the table") {
    const auto dir = fresh_dir();
    const auto r = run("reconstruct --spec compound-bspline:n=2,alpha=0.3 "
                       "--signal heaviside:t=1 --w 16.5 --grid 0.5:1.5:101 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    std::vector<std::string> header;
    const auto rows = load_csv(dir / "reconstruction.csv", &header);
    CHECK(header == std::vector<std::string>{"t", "kantorovich", "signal", "error"});
    for (const auto& row : rows)
        if (std::abs(row[0] - 1.0) < 1e-12) CHECK(std::abs(row[1] - 0.3) < 1e-12);
}

TEST_CASE("reconstruct --causal: indices stay in the past; bad kernels exit 1") {
    const auto dir = fresh_dir();
    const auto r = run("reconstruct --spec bspline-shift:n=2 --signal sin --w 32 "
                       "--grid 0.25:3:45 --causal --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    std::vector<std::string> header;
    const auto rows = load_csv(dir / "reconstruction.csv", &header);
    REQUIRE(header.size() == 6); // t, kantorovich, signal, error, k_lo, k_hi
    for (const auto& row : rows) CHECK(row[5] / 32.0 < row[0]);

    CHECK(run("reconstruct --spec fejer --signal sin --w 32 --grid 0:1:5 --causal --out " +
              dir.string())
              .exit_code == 1);
}

TEST_CASE("experiment jump-scan: integer mode converges to the lattice limit") {
    const auto dir = fresh_dir();
    const auto r = run("experiment jump-scan --spec fejer --signal heaviside:t=1 --t 1 "
                       "--mode integer --count 11 --tol 1e-6 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto s = load_json(dir / "summary.json");
    CHECK(std::abs(s["empirical_limit"].get<double>() - 0.75) < 1e-6);
    CHECK(s["converged"] == true);
}

TEST_CASE("experiment divergence: Fejer fractional limits separate and match closed forms") {
    const auto dir = fresh_dir();
    const auto r = run("experiment divergence --spec fejer --signal heaviside:t=1 --t 1 "
                       "--x1 0.25 --x2 0.75 --count 8 --tol 1e-6 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto s = load_json(dir / "summary.json");
    CHECK(s["nonconvergent"] == true);
    CHECK(s["closed_form_match"] == true);
    CHECK(std::abs(s["difference"].get<double>() - 0.0148585) < 1e-4);
    CHECK(s["classification"] == "integer-lattice-only");
}

TEST_CASE("experiment rate: first-order convergence for sin with M3") {
    const auto dir = fresh_dir();
    const auto r = run("experiment rate --spec bspline:n=3 --signal sin "
                       "--w-ladder 8:256:2 --grid 0:6.283185307179586:65 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto s = load_json(dir / "summary.json");
    CHECK(s["strictly_decreasing"] == true);
    CHECK(std::abs(s["empirical_order"].get<double>() - 1.0) < 0.2);
}

TEST_CASE("experiment moments: dichotomy flags with explicit expectations") {
    const auto dir = fresh_dir();
    const auto r = run("experiment moments --spec sigmoidal-phi:gamma=1.5 "
                       "--beta 0.8 --expect diverging --radius 10000 --u-grid 64 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    const auto s = load_json(dir / "summary.json");
    CHECK(s["moments"][0]["diverging"] == true);
    std::vector<std::string> header;
    const auto rows = load_csv(dir / "report.csv", &header);
    CHECK(header == std::vector<std::string>{"beta", "radius", "partial_sup"});
    CHECK(rows.size() >= 3); // one row per ladder rung
}

TEST_CASE("byte-identical outputs for identical configs") {
    const auto d1 = fresh_dir();
    const auto d2 = fresh_dir();
    const std::string args = "experiment divergence --spec fejer --signal heaviside:t=1 "
                             "--t 1 --count 6 --seed 7 --tol 1e-6 --out ";
    CHECK(run(args + d1.string()).exit_code == 0);
    CHECK(run(args + d2.string()).exit_code == 0);
    CHECK(slurp(d1 / "report.csv") == slurp(d2 / "report.csv"));
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
}

TEST_CASE("csv signal ingestion round-trips through reconstruct") {
    const auto dir = fresh_dir();
    {
        std::ofstream sig(dir / "sig.csv");
        sig << "t,value\n0,1.0\n0.5,2.0\n1.0,-1.0\n";
    }
    const auto r = run("reconstruct --spec bspline:n=2 --signal csv:" +
                       (dir / "sig.csv").string() + " --w 64 --grid 0.1:0.4:4 --out " +
                       dir.string());
    CHECK(r.exit_code == 0);
    std::vector<std::string> header;
    const auto rows = load_csv(dir / "reconstruction.csv", &header);
    for (const auto& row : rows) CHECK(std::abs(row[1] - 1.0) < 1e-9); // constant region
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    std::vector<const char*> pass_through;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--skop-bin=", 0) == 0) {
            g_bin = arg.substr(11);
        } else {
            pass_through.push_back(argv[i]);
        }
    }
    if (g_bin.empty()) {
        std::fprintf(stderr, "test_cli needs --skop-bin=<path to the skop binary>\n");
        return 1;
    }
    ctx.applyCommandLine(static_cast<int>(pass_through.size()), pass_through.data());
    return ctx.run();
}
