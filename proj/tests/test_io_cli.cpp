#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "truncft/io.hpp"
#include "truncft/rng.hpp"

using namespace truncft;
namespace fs = std::filesystem;

#ifndef TRUNCFT_CLI_PATH
#define TRUNCFT_CLI_PATH "truncft"
#endif

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::uint64_t counter = 0;
        path = fs::temp_directory_path() /
               ("truncft_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(TRUNCFT_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("17-digit formatting round-trips doubles") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const double v = (rng_u01(3, i, 0) - 0.5) * std::pow(10.0, 300.0 * (rng_u01(3, i, 1) - 0.5));
        REQUIRE(std::stod(fmt17(v)) == v);
    }
}

TEST_CASE("spectral CSV round trip") {
    TempDir dir;
    SpectralSamples samples;
    samples.grid = FrequencyGrid::with_count(4.0, 32);
    for (std::size_t m = 0; m < 32; ++m) {
        const NormalPair g = rng_gauss_pair(rng_key(1, 2), m);
        samples.values.push_back(cplx(g.first, g.second));
    }
    const fs::path p = dir.path / "samples.csv";
    write_spectral_csv(p.string(), samples);
    const SpectralSamples back = read_spectral_csv(p.string());
    REQUIRE(back.grid.sample_count == 32);
    REQUIRE(back.grid.bandwidth == Catch::Approx(4.0).epsilon(1e-14));
    for (std::size_t m = 0; m < 32; ++m) REQUIRE(back.values[m] == samples.values[m]);
}

TEST_CASE("grid signal CSV round trip") {
    TempDir dir;
    const GridSignal f2 = eval_eigenfunction({2}, 64);
    const fs::path p = dir.path / "signal.csv";
    write_grid_signal_csv(p.string(), f2);
    const GridSignal back = read_grid_signal_csv(p.string());
    REQUIRE(back.size() == 64);
    for (std::size_t m = 0; m < 64; ++m) REQUIRE(back.values[m] == f2.values[m]);
}

TEST_CASE("config parser") {
    TempDir dir;
    const fs::path good = dir.path / "good.cfg";
    {
        std::ofstream out(good);
        out << "# comment line\n"
            << "k_list = 4, 15\n"
            << "b_min = 1\n"
            << "b_max = 2\n"
            << "b_step = 0.5\n"
            << "delta_list = 0, 0.05\n"
            << "rate = 8\n"
            << "trials = 3\n"
            << "seed = 7\n"
            << "e_cut_list = 0.2, 0.5\n";
    }
    const SweepFileConfig cfg = parse_config_file(good.string());
    REQUIRE(cfg.experiment.k_list == std::vector<int>{4, 15});
    REQUIRE(cfg.experiment.b_grid.size() == 3);
    REQUIRE(cfg.experiment.delta_list.size() == 2);
    REQUIRE(cfg.experiment.trials == 3);
    REQUIRE(cfg.experiment.seed == 7);
    REQUIRE(cfg.e_cut_list == std::vector<double>{0.2, 0.5});

    const fs::path bad_key = dir.path / "bad_key.cfg";
    {
        std::ofstream out(bad_key);
        out << "k_list = 4\nwibble = 3\n";
    }
    REQUIRE_THROWS_WITH(parse_config_file(bad_key.string()),
                        Catch::Matchers::ContainsSubstring("bad_key.cfg:2"));

    const fs::path bad_num = dir.path / "bad_num.cfg";
    {
        std::ofstream out(bad_num);
        out << "k_list = 4\n\nb_min = huh\n";
    }
    REQUIRE_THROWS_WITH(parse_config_file(bad_num.string()),
                        Catch::Matchers::ContainsSubstring("bad_num.cfg:3"));
}

TEST_CASE("cli: transform writes the expected rows and a manifest") {
    TempDir dir;
    const int rc = run_cli("--out-dir " + dir.path.string() +
                               " transform --k 4 --bandwidth 10 --spacing 0.1 --closed-form",
                           dir.path / "log.txt");
    REQUIRE(rc == 0);
    REQUIRE(count_lines(dir.path / "transform.csv") == 201);  // header + 200 samples
    const auto manifest = nlohmann::json::parse(slurp(dir.path / "transform_manifest.json"));
    REQUIRE(manifest["command"] == "transform");
    REQUIRE(manifest["outputs"].size() == 1);
}

TEST_CASE("cli: usage and validation errors carry distinct exit codes") {
    TempDir dir;
    REQUIRE(run_cli("transform --bandwidth 10 --spacing 0.1", dir.path / "a.txt") == 2);
    const int rc = run_cli("--out-dir " + dir.path.string() +
                               " transform --k 4 --bandwidth 10 --spacing 0.3",
                           dir.path / "b.txt");
    REQUIRE(rc == 3);
    REQUIRE(slurp(dir.path / "b.txt").find("nearest valid spacing") != std::string::npos);
}

TEST_CASE("cli: stability prints JSON with eta in (0,1)") {
    TempDir dir;
    REQUIRE(run_cli("stability --L 1 --B0 6.3 --B 3 --gamma 2 --mesh 0.03125", dir.path / "s.txt") == 0);
    const auto out = nlohmann::json::parse(slurp(dir.path / "s.txt"));
    REQUIRE(out["eta"].get<double>() > 0.0);
    REQUIRE(out["eta"].get<double>() < 1.0);
    REQUIRE(out["w_fd"].get<double>() >= out["eta"].get<double>());
    REQUIRE(out.contains("k_eta"));
    REQUIRE(out.contains("k_w"));

    REQUIRE(run_cli("stability --L 1 --B0 6.3 --B 3 --gamma 1", dir.path / "t.txt") == 3);
    REQUIRE(run_cli("stability --L 1 --B0 6.3 --B 6.3 --gamma 2", dir.path / "u.txt") == 3);
}

TEST_CASE("cli: reconstruct inverts a transform file") {
    TempDir dir;
    REQUIRE(run_cli("--out-dir " + dir.path.string() +
                        " transform --k 2 --bandwidth 8 --spacing 0.125 --closed-form",
                    dir.path / "log1.txt") == 0);
    REQUIRE(run_cli("--out-dir " + dir.path.string() + " reconstruct --input " +
                        (dir.path / "transform.csv").string(),
                    dir.path / "log2.txt") == 0);
    REQUIRE(count_lines(dir.path / "reconstruction.csv") == 129);  // header + 128 nodes
}

TEST_CASE("cli: sweep emits one row per cell and reruns bit-identically") {
    TempDir dir;
    const fs::path cfg = dir.path / "sweep.cfg";
    {
        std::ofstream out(cfg);
        out << "k_list = 4\nb_min = 1\nb_max = 1.5\nb_step = 0.5\ndelta_list = 0\ntrials = 2\nseed = 5\n";
    }
    const std::string args = "--out-dir " + dir.path.string() + " sweep --config " + cfg.string();
    REQUIRE(run_cli(args, dir.path / "log1.txt") == 0);
    const std::string first = slurp(dir.path / "sweep.csv");
    REQUIRE(count_lines(dir.path / "sweep.csv") == 3);  // header + 2 cells
    REQUIRE(run_cli(args, dir.path / "log2.txt") == 0);
    REQUIRE(slurp(dir.path / "sweep.csv") == first);
}

TEST_CASE("cli: critical reports inf for unreachable cutoffs") {
    TempDir dir;
    const fs::path cfg = dir.path / "crit.cfg";
    {
        std::ofstream out(cfg);
        out << "k_list = 2\nb_min = 0.5\nb_max = 2\nb_step = 0.5\ndelta_list = 0.05\n"
            << "trials = 4\nseed = 1\ne_cut_list = 0.2\n";
    }
    REQUIRE(run_cli("--out-dir " + dir.path.string() + " critical --config " + cfg.string(),
                    dir.path / "log.txt") == 0);
    REQUIRE(slurp(dir.path / "log.txt").find("B0=inf") != std::string::npos);
    REQUIRE(slurp(dir.path / "critical.csv").find("inf") != std::string::npos);
}

TEST_CASE("cli: spectrum rows carry the plateau facts") {
    TempDir dir;
    REQUIRE(run_cli("--out-dir " + dir.path.string() + " spectrum --bandwidth 10 --n 192",
                    dir.path / "log.txt") == 0);
    std::ifstream in(dir.path / "spectrum.csv");
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "index,sigma");
    double sigma9 = 0.0, sigma11 = 0.0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const int idx = std::stoi(line.substr(0, comma));
        if (idx == 9) sigma9 = std::stod(line.substr(comma + 1));
        if (idx == 11) sigma11 = std::stod(line.substr(comma + 1));
    }
    REQUIRE(sigma9 > 0.4);
    REQUIRE(sigma11 < 0.6);
    REQUIRE(fs::exists(dir.path / "spectrum.svg"));
}

TEST_CASE("cli: harmonic-measure emits csv and heatmap") {
    TempDir dir;
    REQUIRE(run_cli("--out-dir " + dir.path.string() +
                        " harmonic-measure --L 1 --B 2 --mesh 0.0625",
                    dir.path / "log.txt") == 0);
    REQUIRE(fs::exists(dir.path / "harmonic.csv"));
    REQUIRE(fs::exists(dir.path / "harmonic.svg"));
    const std::string head = slurp(dir.path / "harmonic.csv").substr(0, 6);
    REQUIRE(head == "x,y,w\n");
}

TEST_CASE("cli: the output directory falls back to the environment") {
    TempDir dir;
    const std::string cmd = "TRUNCFT_OUT_DIR=" + dir.path.string() + " " + TRUNCFT_CLI_PATH +
                            " transform --k 1 --bandwidth 2 --spacing 0.5 --closed-form >" +
                            (dir.path / "log.txt").string() + " 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    REQUIRE(fs::exists(dir.path / "transform.csv"));
}
