#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ewopt/json_io.hpp"
#include "ewopt/sweep.hpp"

#ifndef EWOPT_CLI_PATH
#error "EWOPT_CLI_PATH must point at the CLI binary"
#endif

using namespace ewopt;

namespace {

namespace fs = std::filesystem;

fs::path workdir() {
  const fs::path dir = fs::temp_directory_path() / "ewopt_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Runs the CLI with stderr captured to a file; returns the exit status.
int run(const std::string& args, std::string* err = nullptr) {
  const std::string err_file = path("stderr.txt");
  const std::string cmd = std::string(EWOPT_CLI_PATH) + " " + args + " > " + path("stdout.txt") +
                          " 2> " + err_file;
  const int raw = std::system(cmd.c_str());
  if (err) {
    std::ifstream in(err_file);
    std::stringstream ss;
    ss << in.rdbuf();
    *err = ss.str();
  }
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("build-hakye writes witness and zeros") {
  REQUIRE(run("build-hakye --theta 0.5235987755982988 --b 2 -o " + path("w.json") + " --zeros-out " +
              path("z.json")) == 0);
  const Witness w = read_witness(path("w.json"));
  CHECK(w.dim() == 9);
  CHECK(std::abs(w.matrix().trace().real() - 10.5) <= 1e-14);
  CHECK(zeros_from_json(read_json_file(path("z.json"))).size() == 6);

  CHECK(run("build-hakye --theta 0.5 --b 1 -o " + path("bad.json")) == 2);
  CHECK(run("build-hakye --theta 0 --b 2 -o " + path("bad.json")) == 2);
  CHECK(run("build-hakye --theta 0 --b 2 --allow-theta-zero -o " + path("w0.json")) == 0);
  CHECK(run("build-hakye --theta 0.5 --b 2 -o /nonexistent/dir/w.json") == 3);
}

TEST_CASE("check-optimality with built-in zeros") {
  REQUIRE(run("build-hakye --theta 0.5235987755982988 --b 2 -o " + path("w.json") + " --zeros-out " +
              path("z.json")) == 0);
  REQUIRE(run("check-optimality " + path("w.json") + " --zeros " + path("z.json") + " -o " +
              path("report.json")) == 0);
  const Json report = read_json_file(path("report.json"));
  CHECK(report["verdict"] == "NotOptimal");
  CHECK(report["span_dim"] == 6);
  CHECK(std::abs(report["min_gap"].get<double>() - 5.0 / 6.0) <= 1e-9);
  CHECK(report["zeros_discovered"] == false);
  CHECK_FALSE(report.contains("caveat"));
}

TEST_CASE("check-optimality discovers the W- zero set") {
  write_witness(path("wminus.json"), two_qubit_segment(0.0));
  REQUIRE(run("check-optimality " + path("wminus.json") + " --restarts 200 --seed 3 -o " +
              path("wminus_report.json")) == 0);
  const Json report = read_json_file(path("wminus_report.json"));
  CHECK(report["verdict"] == "Inconclusive");
  CHECK(report["reason"] == "spanning");
  CHECK(report["span_dim"] == 4);
  CHECK(report["zeros_discovered"] == true);
  CHECK(report.contains("caveat"));
}

TEST_CASE("malformed input reports the parse location") {
  {
    std::ofstream out(path("broken.json"));
    out << "{\n  \"dA\": 2,\n  \"dB\": 2,\n  \"matrix\": [\n}\n";
  }
  std::string err;
  CHECK(run("check-optimality " + path("broken.json"), &err) == 2);
  CHECK(err.find("line") != std::string::npos);

  CHECK(run("check-optimality " + path("missing.json")) == 3);
  CHECK(run("no-such-command") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("spa and min-product") {
  REQUIRE(run("build-hakye --theta 0.5235987755982988 --b 2 -o " + path("w.json")) == 0);
  REQUIRE(run("spa " + path("w.json") + " -o " + path("spa.json")) == 0);
  const Json spa = read_json_file(path("spa.json"));
  CHECK(std::abs(spa["p_star"].get<double>() - 0.131779) <= 1e-6);
  CHECK(spa["ppt"].contains("is_npt"));
  CHECK(spa["ccnr"].contains("realignment_trace_norm"));

  REQUIRE(run("min-product " + path("w.json") + " --restarts 50 --seed 4 -o " + path("min.json")) == 0);
  const Json mp = read_json_file(path("min.json"));
  CHECK(std::abs(mp["value"].get<double>()) <= 1e-9);
  CHECK(mp["restarts"] == 50);
}

TEST_CASE("sweep honors spec files and flags") {
  const Json spec{{"theta_min", -0.1}, {"theta_max", 0.1}, {"theta_step", 0.1}, {"b_min", 1.5},
                  {"b_max", 2.5},      {"b_step", 1.0},    {"restarts", 10},    {"lambda_tol", 1e-2}};
  write_json_file(path("spec.json"), spec);
  REQUIRE(run("sweep --spec " + path("spec.json") + " --seed 8 -o " + path("a.csv")) == 0);
  REQUIRE(run("sweep --spec " + path("spec.json") + " --seed 8 --workers 2 -o " + path("b.csv")) == 0);
  const std::string a = slurp(path("a.csv"));
  CHECK(a == slurp(path("b.csv")));
  std::istringstream in(a);
  const auto cells = read_sweep_csv(in);
  CHECK(cells.size() == 6);

  // Flags override the spec file.
  REQUIRE(run("sweep --spec " + path("spec.json") + " --b-max 1.5 -o " + path("c.csv")) == 0);
  std::istringstream in_c(slurp(path("c.csv")));
  CHECK(read_sweep_csv(in_c).size() == 3);

  write_json_file(path("badspec.json"), Json{{"bogus", 1}});
  CHECK(run("sweep --spec " + path("badspec.json") + " -o " + path("d.csv")) == 2);
  CHECK(run("sweep --fast --full -o " + path("e.csv")) == 2);
}
