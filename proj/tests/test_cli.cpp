#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gridsample/io_util.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() {
    return GRIDSAMPLE_CLI;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gridsample_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

int run_cli(const std::string& args) {
    const std::string command = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string run_cli_stdout(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const std::string command =
        std::string(cli_path()) + " " + args + " > " + out.string() + " 2>/dev/null";
    std::system(command.c_str());
    return gridsample::read_text_file(out);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("cli: usage and data error exit codes") {
    TempDir dir;
    CHECK(run_cli("") == 1);                      // missing subcommand
    CHECK(run_cli("grid") == 1);                  // missing required flags
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("grid --bbox 0,0,1000,1000 --boundary x.geojson -o " +
                  (dir.path / "u.csv").string()) == 1);  // both sources

    write_file(dir.path / "bad.csv", "id,x,y,cell_side,builtup\n0,1,2,1000,abc\n");
    CHECK(run_cli("stratify --units " + (dir.path / "bad.csv").string() + " --out-dense " +
                  (dir.path / "d.csv").string() + " --out-sparse " +
                  (dir.path / "s.csv").string()) == 2);
}

TEST_CASE("cli: grid then enrich reports out-of-grid POIs") {
    TempDir dir;
    const fs::path units = dir.path / "units.csv";
    CHECK(run_cli("grid --bbox 0,0,2000,1000 --cell-side 1000 -o " + units.string()) == 0);

    const fs::path pois = dir.path / "pois.csv";
    write_file(pois, "id,x,y,category\n0,500,500,shop\n1,1500,500,school\n2,-5,0,shop\n");
    const fs::path enriched = dir.path / "enriched.csv";
    const std::string summary = run_cli_stdout(
        "enrich --units " + units.string() + " --pois " + pois.string() + " -o " +
            enriched.string(),
        dir.path);
    CHECK(summary.find("out_of_grid_count=1") != std::string::npos);
    CHECK(fs::exists(enriched));
    CHECK(fs::exists(dir.path / "enriched.csv.manifest.json"));
}

TEST_CASE("cli: stratify --threshold auto matches the quartile fixture") {
    TempDir dir;
    const fs::path units = dir.path / "units.csv";
    write_file(units,
               "id,x,y,cell_side,builtup\n"
               "0,500,500,1000,0.0\n"
               "1,1500,500,1000,0.1\n"
               "2,2500,500,1000,0.2\n"
               "3,3500,500,1000,0.9\n");
    const std::string summary = run_cli_stdout(
        "stratify --units " + units.string() + " --threshold auto --out-dense " +
            (dir.path / "dense.csv").string() + " --out-sparse " +
            (dir.path / "sparse.csv").string(),
        dir.path);
    CHECK(summary.find("threshold=0.075") != std::string::npos);
    CHECK(summary.find("dense_units=3") != std::string::npos);
    CHECK(summary.find("sparse_units=1") != std::string::npos);
}

TEST_CASE("cli: sample runs are reproducible byte for byte") {
    TempDir dir;
    // Build a small enriched stratum through the real pipeline.
    const fs::path units = dir.path / "units.csv";
    CHECK(run_cli("grid --bbox 0,0,8000,8000 --cell-side 1000 -o " + units.string()) == 0);
    std::ostringstream pois;
    pois << "id,x,y,category\n";
    for (int i = 0; i < 200; ++i) {
        pois << i << ',' << (i * 37) % 8000 << ',' << (i * 53) % 8000 << ",cat" << i % 4 << "\n";
    }
    write_file(dir.path / "pois.csv", pois.str());
    const fs::path enriched = dir.path / "enriched.csv";
    CHECK(run_cli("enrich --units " + units.string() + " --pois " +
                  (dir.path / "pois.csv").string() + " -o " + enriched.string()) == 0);

    const std::string flags = "sample --units " + enriched.string() +
                              " --stratum dense --n 8 --iters 200 --seed 42 --trace ";
    CHECK(run_cli(flags + (dir.path / "t1.csv").string() + " -o " +
                  (dir.path / "s1.csv").string()) == 0);
    CHECK(run_cli(flags + (dir.path / "t2.csv").string() + " -o " +
                  (dir.path / "s2.csv").string()) == 0);
    CHECK(gridsample::read_text_file(dir.path / "s1.csv") ==
          gridsample::read_text_file(dir.path / "s2.csv"));
    CHECK(gridsample::read_text_file(dir.path / "t1.csv") ==
          gridsample::read_text_file(dir.path / "t2.csv"));

    // The selected CSV carries the stratum column.
    const std::string selected = gridsample::read_text_file(dir.path / "s1.csv");
    CHECK(selected.find("id,x,y,cell_side,builtup,d0,d1,d2,mul,stratum") == 0);
    CHECK(selected.find(",dense") != std::string::npos);
}

TEST_CASE("cli: eval binary and kappa modes") {
    TempDir dir;
    write_file(dir.path / "pred.csv", "1,1,0\n0,1,0\n");
    write_file(dir.path / "truth.csv", "1,0,0\n0,1,1\n");
    const std::string metrics = run_cli_stdout(
        "eval --mode binary --pred " + (dir.path / "pred.csv").string() + " --truth " +
            (dir.path / "truth.csv").string() + " -o " + (dir.path / "m.csv").string(),
        dir.path);
    const std::string written = gridsample::read_text_file(dir.path / "m.csv");
    CHECK(written.find("metric,value\n") == 0);
    CHECK(written.find("tp,2") != std::string::npos);
    CHECK(written.find("fp,1") != std::string::npos);
    CHECK(written.find("fn,1") != std::string::npos);

    write_file(dir.path / "pt.csv", "0,1\n2,2\n");
    write_file(dir.path / "tt.csv", "0,1\n2,1\n");
    CHECK(run_cli("eval --mode kappa --pred " + (dir.path / "pt.csv").string() + " --truth " +
                  (dir.path / "tt.csv").string() + " -o " + (dir.path / "k.csv").string()) == 0);
    const std::string kappa_out = gridsample::read_text_file(dir.path / "k.csv");
    CHECK(kappa_out.find("kappa,") != std::string::npos);
}

TEST_CASE("cli: resolve majority vote with class map ordering") {
    TempDir dir;
    write_file(dir.path / "pixels.csv",
               "instance_id,class_id,count\n"
               "0,1,5\n0,2,3\n"
               "1,3,4\n1,1,4\n"
               "2,2,7\n");
    write_file(dir.path / "classes.csv", "class_id,class_name\n3,flat\n1,gable\n2,hip\n");
    CHECK(run_cli("resolve --pixels " + (dir.path / "pixels.csv").string() + " --classes " +
                  (dir.path / "classes.csv").string() + " -o " +
                  (dir.path / "labels.csv").string()) == 0);
    const std::string labels = gridsample::read_text_file(dir.path / "labels.csv");
    CHECK(labels ==
          "instance_id,class_id\n"
          "0,1\n"
          "1,3\n"  // tie broken by declared order: 3 precedes 1
          "2,2\n");
}

TEST_CASE("cli: compare on a small synthetic scenario") {
    TempDir dir;
    const fs::path report = dir.path / "report.csv";
    const std::string flags =
        "compare --methods random,dual --seeds 2 --nx 12 --ny 12 --clusters 6 "
        "--pois-per-cluster 150 --spread 2500 --scenario-seed 99 --n 30 --iters 120 -o ";
    CHECK(run_cli(flags + report.string()) == 0);
    const std::string text = gridsample::read_text_file(report);
    CHECK(text.find("method,seed,stratum,n,final_cost_ann,final_cost_amul,wall_time_ms") == 0);
    int lines = 0;
    for (const char c : text) {
        lines += c == '\n';
    }
    CHECK(lines == 1 + 2 * 2 * 2);  // header + methods x seeds x strata
}
