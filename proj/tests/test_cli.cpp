#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tissue/field_io.hpp"
#include "tissue/harness.hpp"

using namespace tissue;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = -1;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tissue_sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.status = run_cli(int(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tissue_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "config.in";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream s;
    s << is.rdbuf();
    return s.str();
}

// Every file under `dir` by relative path; the manifest wall-time row is dropped.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string text = slurp(e.path());
        if (e.path().filename() == "manifest.csv") {
            const auto at = text.find("wall_time_s,");
            REQUIRE(at != std::string::npos);
            text.erase(at, text.find('\n', at) + 1 - at);
        }
        files[fs::relative(e.path(), dir).string()] = text;
    }
    return files;
}

std::map<std::string, std::string> manifest(const fs::path& dir) {
    std::ifstream is(dir / "manifest.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "key,value");
    std::map<std::string, std::string> m;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        m[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return m;
}

std::string first_line(const fs::path& p) {
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    return line;
}

}  // namespace

TEST_CASE("check passes and prints a tally") {
    const CliResult r = cli({"check", "--seed", "11"});
    CHECK(r.status == kExitOk);
    CHECK(r.out.find("invariants: 10 passed, 0 failed") != std::string::npos);
    CHECK(r.out.find("seed 11") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("smoke run writes field and diagnostic files that parse") {
    const fs::path dir = scratch("smoke");
    const fs::path cfg = write_config(dir, "preset = fig3-esvm\n[time]\nt_end = 0.004\n");
    const CliResult r = cli({"run", cfg.string(), "--grid", "64x64", "--out", (dir / "out").string()});
    REQUIRE(r.status == kExitOk);
    const fs::path out = dir / "out";
    for (const char* f : {"n1.csv", "n2.csv", "p1.csv", "p2.csv", "curl_v1.csv", "curl_v2.csv"}) {
        const ScalarField s = io::read_csv((out / f).string());
        CHECK(s.nx() == 64);
        CHECK(s.ny() == 64);
        CHECK(s.all_finite());
    }
    CHECK(first_line(out / "diagnostics.csv").rfind("t,mass1,mass2,overlap", 0) == 0);
    CHECK(slurp(out / "final.vtk").rfind("# vtk DataFile", 0) == 0);
    const auto m = manifest(out);
    CHECK(m.at("grid") == "64x64");
    CHECK(m.at("model") == "ESVM");
    CHECK(m.count("config_hash"));
    CHECK(m.count("final_overlap"));
    CHECK(std::stod(m.at("t")) == doctest::Approx(0.004));

    // The effective configuration is recorded and reproduces the hash.
    const RunConfig written = load_config((out / "config.txt").string());
    CHECK(written.grid.nx == 64);
    CHECK(config_hash(written) == m.at("config_hash"));
}

TEST_CASE("identical runs give identical bytes") {
    const fs::path dir = scratch("repro");
    const fs::path cfg = write_config(dir, "preset = fig3-esvm\n[grid]\nnx = 20\nny = 20\n[time]\nt_end = 0.004\n"
                                           "record_every = 1\n");
    const std::string out = (dir / "out").string();
    REQUIRE(cli({"run", cfg.string(), "--out", out}).status == kExitOk);
    const auto first = snapshot(out);
    fs::remove_all(out);
    REQUIRE(cli({"run", cfg.string(), "--out", out}).status == kExitOk);
    CHECK(snapshot(out) == first);
    CHECK(first.size() == 10);

    REQUIRE(cli({"run", "fig3-lesvm", "--grid", "16x16", "--out", out}).status == kExitOk);
    const auto limit = snapshot(out);
    REQUIRE(cli({"run", "fig3-lesvm", "--grid", "16x16", "--out", out}).status == kExitOk);
    CHECK(snapshot(out) == limit);
}

TEST_CASE("sweep outputs do not depend on the job count") {
    const fs::path dir = scratch("sweep");
    const fs::path cfg = write_config(dir, "preset = fig3-esvm\n[grid]\nnx = 16\nny = 16\n[time]\nt_end = 0.003\n"
                                           "[sweep]\neps = 0.1, 0.05, 0.02\nm = 30, 60, 120\n"
                                           "alpha = 1e-3, 5e-4, 2e-4\n");
    const std::string a = (dir / "a").string(), b = (dir / "b").string();
    REQUIRE(cli({"sweep", cfg.string(), "--out", a, "--jobs", "1"}).status == kExitOk);
    REQUIRE(cli({"sweep", cfg.string(), "--out", b, "--jobs", "3"}).status == kExitOk);
    auto sa = snapshot(a), sb = snapshot(b);
    // config.txt records the output directory.
    for (auto* s : {&sa, &sb}) std::erase_if(*s, [](const auto& kv) { return kv.first.find("config.txt") != std::string::npos; });
    CHECK(sa == sb);
    CHECK(sa.count("sweep.csv"));
    CHECK(sa.count("run_002/diagnostics.csv"));
    const RunConfig row = load_config((fs::path(a) / "run_001" / "config.txt").string());
    CHECK(row.params.m == 60.0);
    CHECK(row.sweep.empty());
}

TEST_CASE("config errors exit with status 1") {
    const fs::path dir = scratch("errors");
    CHECK(cli({"run", "no-such-preset"}).status == kExitConfigError);
    CHECK(cli({"run", "fig3-esvm", "--grid", "8by8"}).status == kExitConfigError);
    CHECK(cli({}).status == kExitConfigError);
    CHECK(cli({"launch", "fig3-esvm"}).status == kExitConfigError);
    const CliResult r = cli({"run", write_config(dir, "preset = fig3-vm\n[params]\nm = 40\ncolour = 2\n").string()});
    CHECK(r.status == kExitConfigError);
    CHECK(r.err.find("'params.m'") != std::string::npos);
    CHECK(r.err.find("'params.colour'") != std::string::npos);
    CHECK(cli({"sweep", "fig3-esvm"}).status == kExitConfigError);
    CHECK(cli({"--help"}).status == kExitOk);
}

TEST_CASE("solver failures exit with status 2") {
    const fs::path dir = scratch("failure");
    const fs::path cfg = write_config(dir, "preset = fig3-esvm\n[grid]\nnx = 16\nny = 16\n[time]\ndt = 1\n"
                                           "max_halvings = 0\n");
    const CliResult r = cli({"run", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.status == kExitSolverFailure);
    CHECK(r.err.find("no admissible time step") != std::string::npos);
}

TEST_CASE("stationary run with a failing coercivity condition warns and succeeds") {
    const fs::path dir = scratch("stationary");
    const fs::path cfg = write_config(dir, "preset = fig3-lesvm\nmodel = STATIONARY\n[grid]\nnx = 24\nny = 24\n"
                                           "[params]\nbeta1 = 0.1\nbeta2 = 0.2\ng1 = 1\ng2 = 1\n"
                                           "[initial]\npreset = concentric\n");
    const CliResult r = cli({"stationary", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.status == kExitOk);
    const auto line_end = r.out.find('\n');
    const std::string warning = r.out.substr(0, line_end);
    CHECK(warning.rfind("warning:", 0) == 0);
    CHECK(warning.find("-0.15") != std::string::npos);
    CHECK(warning.find("-0.05") != std::string::npos);
    for (const char* f : {"mask.csv", "pressure.csv", "q.csv", "jumps.csv", "transmission.csv", "interfaces.csv"})
        CHECK(fs::exists(dir / "out" / f));
    CHECK(first_line(dir / "out" / "jumps.csv").rfind("interface,face_index", 0) == 0);
    CHECK(manifest(dir / "out").at("coercivity_holds") == "false");
}
