#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed binary: exit codes, file formats,
// determinism. Each test works in its own temp directory.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(QMAXENT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qmaxent_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& contents) const {
        const auto p = path / name;
        std::ofstream(p) << contents;
        return p.string();
    }
    std::string slurp(const std::string& name) const {
        std::ifstream in(path / name);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

} // namespace

TEST_CASE("entropy: seff-corrected golden numbers") {
    const auto r = run("entropy --measure seff-corrected --ha 1.8 --hb 1.4 --iab 0.34");
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(17.461526936579990).epsilon(1e-12));
    const auto r0 = run("entropy --measure seff-corrected --ha 1.8 --hb 1.4 --iab 0");
    CHECK(std::stod(r0.out) == doctest::Approx(24.532530197109349).epsilon(1e-12));
}

TEST_CASE("entropy: renyi at q=1 equals shannon; hill at q=2") {
    TempDir t;
    const auto in = t.file("p.json", R"({"probs": [0.5, 0.25, 0.25]})");
    const auto rs = run("entropy --measure shannon --input " + in);
    const auto rr = run("entropy --measure renyi --q 1 --input " + in);
    CHECK(rs.code == 0);
    CHECK(rr.code == 0);
    CHECK(std::stod(rs.out) == doctest::Approx(std::stod(rr.out)).epsilon(1e-14));
    const auto rh = run("entropy --measure hill --q 2 --input " + in);
    CHECK(std::stod(rh.out) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    // bits conversion divides by ln 2
    const auto rb = run("entropy --measure shannon --bits --input " + in);
    CHECK(std::stod(rb.out) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("entropy: malformed input exits 2 with a diagnostic") {
    TempDir t;
    const auto bad = t.file("bad.json", R"({"probs": [0.5, "x"]})");
    CHECK(run("entropy --measure shannon --input " + bad).code == 2);
    const auto offmass = t.file("m.json", R"({"probs": [0.5, 0.4]})");
    CHECK(run("entropy --measure shannon --input " + offmass).code == 2);
    CHECK(run("entropy --measure shannon --input /nonexistent.json").code == 2);
    CHECK(run("entropy --nonsense-flag 3").code == 2);
}

TEST_CASE("entropy: profile CSV with manifest sidecar") {
    TempDir t;
    const auto in = t.file("p.json", R"({"probs": [0.7, 0.2, 0.1]})");
    const auto out = (t.path / "prof.csv").string();
    const auto r = run("entropy --measure profile --q-grid 0.5,1,2 --input " + in +
                       " --out " + out);
    CHECK(r.code == 0);
    const auto csv = t.slurp("prof.csv");
    CHECK(csv.rfind("q,hill_number\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    const auto manifest = t.slurp("prof.csv.manifest.json");
    CHECK(manifest.find("\"command\": \"entropy\"") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);
}

TEST_CASE("maxent: bernoulli solve and exit codes") {
    TempDir t;
    const auto cs = t.file("cs.json",
        R"({"states": ["0", "1"], "observables": [[0, 1]], "targets": [0.3]})");
    const auto out = (t.path / "sol.json").string();
    const auto r = run("maxent --constraints " + cs + " --out " + out);
    CHECK(r.code == 0);
    const auto sol = t.slurp("sol.json");
    CHECK(sol.find("0.8472978") != std::string::npos);
    CHECK(sol.find("\"manifest\"") != std::string::npos);

    const auto infeasible = t.file("inf.json",
        R"({"states": ["0", "1"], "observables": [[0, 1]], "targets": [1.7]})");
    CHECK(run("maxent --constraints " + infeasible).code == 4);

    // an iteration budget too small to converge reports non-convergence
    CHECK(run("maxent --constraints " + cs + " --tol 1e-12 --max-iter 1").code == 3);

    const auto empty = t.file("e.json", R"({"states": ["a", "b", "c"]})");
    const auto re = run("maxent --constraints " + empty);
    CHECK(re.code == 0);
    CHECK(re.out.find("0.3333333") != std::string::npos);
}

TEST_CASE("chain: count table, sampling determinism, too-large") {
    TempDir t;
    const auto r = run("chain --n 4 --d 1 --mode count");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("M,exact,asymptotic\n", 0) == 0);
    CHECK(r.out.find("1,2,1\n") != std::string::npos);
    CHECK(r.out.find("2,2,1\n") != std::string::npos);
    CHECK(r.out.find("3,2,1\n") != std::string::npos);

    const auto o1 = (t.path / "s1.csv").string(), o2 = (t.path / "s2.csv").string();
    const auto a = run("chain --n 100 --d 4 --mode sample --q 1.8 --psi 1.3 "
                       "--count 1000 --seed 42 --out " + o1);
    const auto b = run("chain --n 100 --d 4 --mode sample --q 1.8 --psi 1.3 "
                       "--count 1000 --seed 42 --out " + o2);
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    const auto s1 = t.slurp("s1.csv");
    CHECK(s1 == t.slurp("s2.csv")); // identical seed -> identical bytes
    int lines = 0;
    std::istringstream in(s1);
    std::string line;
    while (std::getline(in, line)) {
        const int v = std::stoi(line);
        CHECK(v >= 0);
        CHECK(v <= 100);
        ++lines;
    }
    CHECK(lines == 1000);

    CHECK(run("chain --n 2000 --d 12 --mode count").code == 5);

    const auto pm = run("chain --n 6 --d 1 --mode pmf --q 1 --psi 0.5");
    CHECK(pm.code == 0);
    CHECK(pm.out.rfind("M,probability\n", 0) == 0);

    const auto cj = run("chain --n 6 --d 1 --mode count --format json");
    CHECK(cj.code == 0);
    CHECK(cj.out.find("\"rows\"") != std::string::npos);
    CHECK(cj.out.find("\"exact\": 2") != std::string::npos);
    const auto pj = run("chain --n 6 --d 1 --mode pmf --q 1 --psi 0.5 --format json");
    CHECK(pj.code == 0);
    CHECK(pj.out.find("\"probability\"") != std::string::npos);
    CHECK(pj.out.find("\"psi\": 0.5") != std::string::npos);
}

TEST_CASE("fit: pipeline from chain samples, surface, failure exit") {
    TempDir t;
    const auto samples = (t.path / "m.csv").string();
    CHECK(run("chain --n 30 --d 3 --mode sample --q 1 --psi 0.8 --count 2000 "
              "--seed 7 --out " + samples).code == 0);

    const auto fitout = (t.path / "fit.json").string();
    const auto surf = (t.path / "surf.csv").string();
    const auto r = run("fit --samples " + samples + " --n 30 --d 3 --out " + fitout +
                       " --surface --surface-q 0.8,1.2,5 --surface-psi 0.5,1.1,5 "
                       "--surface-out " + surf);
    CHECK(r.code == 0);
    const auto fit = t.slurp("fit.json");
    CHECK(fit.find("\"q_star\"") != std::string::npos);
    CHECK(fit.find("\"degeneracy\": \"exact\"") != std::string::npos);
    const auto s = t.slurp("surf.csv");
    CHECK(s.rfind("q,psi,delta\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 26);
    CHECK(fit.find("\"surface\"") != std::string::npos); // JSON twin of the CSV
    CHECK(fit.find("\"ell_max\"") != std::string::npos);

    // JSON sample ingestion round-trip
    const auto j = t.file("m.json", R"({"n": 30, "d": 3, "samples": [5, 6, 7, 8, 9]})");
    CHECK(run("fit --samples " + j + " --q-min 0.8 --q-max 1.6").code == 0);

    // every grid point fails -> exit 6
    const auto allzero = t.file("z.json", R"({"n": 6, "d": 0, "samples": [0, 0, 0, 0]})");
    CHECK(run("fit --samples " + allzero + " --q-min 0.9 --q-max 1.1").code == 6);

    // CSV without a spec -> parse error
    CHECK(run("fit --samples " + samples).code == 2);
}

TEST_CASE("scaling: verdicts and insufficient data") {
    TempDir t;
    std::ostringstream exp;
    exp << "n,w\n";
    for (int n = 2; n <= 12; ++n) exp << n << ',' << std::pow(2.0, n) << '\n';
    const auto e = t.file("exp.csv", exp.str());
    const auto r = run("scaling --series " + e);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"model\": \"exponential\"") != std::string::npos);
    CHECK(r.out.find("\"recommendation\": \"shannon\"") != std::string::npos);

    const auto tiny = t.file("tiny.csv", "n,w\n2,4\n3,8\n4,16\n");
    CHECK(run("scaling --series " + tiny).code == 7);
    const auto nohdr = t.file("nohdr.csv", "2,4\n3,8\n4,16\n5,32\n");
    CHECK(run("scaling --series " + nohdr).code == 2);
}

TEST_CASE("rerun with the same manifest is byte-identical") {
    TempDir t;
    const auto o1 = (t.path / "a.csv").string(), o2 = (t.path / "b.csv").string();
    run("chain --n 40 --d 2 --mode pmf --q 1.5 --psi 0.7 --out " + o1);
    run("chain --n 40 --d 2 --mode pmf --q 1.5 --psi 0.7 --out " + o2);
    CHECK(t.slurp("a.csv") == t.slurp("b.csv"));
    // deterministic commands record no seed, so even the manifests match
    const auto m1 = t.slurp("a.csv.manifest.json");
    CHECK(m1 == t.slurp("b.csv.manifest.json"));
    CHECK(m1.find("\"kernel\"") != std::string::npos);
    CHECK(m1.find("\"seed\"") == std::string::npos);
    // sampling without --seed records the entropy-derived seed
    run("chain --n 10 --d 2 --mode sample --q 1 --psi 1 --count 3 --out " +
        (t.path / "s.csv").string());
    CHECK(t.slurp("s.csv.manifest.json").find("\"seed_source\": \"entropy\"") !=
          std::string::npos);
}

TEST_CASE("kernel flag selects the backend") {
    const auto r = run("--kernel scalar entropy --measure seff-corrected "
                       "--ha 1 --hb 1 --iab 0");
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK(run("--kernel sse9 entropy --measure shannon").code == 2);
}
