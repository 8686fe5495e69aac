// Drives the installed CLI binary (path given as argv[1]) end to end through
// temp files and pipes; returns nonzero if any expectation fails.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

using Json = nlohmann::json;

namespace {

int g_failures = 0;

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      ++g_failures;                                                       \
      std::cerr << "FAILED: " << #cond << " at line " << __LINE__ << "\n"; \
    }                                                                     \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <resetgeo-binary>\n";
    return 2;
  }
  const std::string bin = argv[1];

  write_file("cli_two_level.json", R"({"dim": 2, "rows": [[1.0, 0.5], [0.0, 0.5]]})");
  write_file("cli_identity.json", R"({"dim": 2, "rows": [[1.0, 0.0], [0.0, 1.0]]})");
  write_file("cli_hollow_swapped.json",
             R"({"dim": 3, "rows": [[0.5, 0.0, 0.5], [0.0, 0.5, 0.5], [0.5, 0.5, 0.0]]})");
  write_file("cli_protocols.json",
             R"({"dim": 2, "protocols": [{"rows": [[0.0, 1.0], [0.0, -1.0]], "duration": 1.0}]})");
  write_file("cli_bad.json", "{broken");
  write_file(
      "cli_swap25.json",
      R"({"dim": 2, "kraus": [
           [[[0.8660254037844386, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
           [[[0.0, 0.0], [0.8660254037844386, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
           [[[0.0, 0.0], [0.0, 0.0]], [[0.5, 0.0], [0.0, 0.0]]],
           [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]})");

  // analyze: frozen two-level numbers, clean exit
  {
    const auto r = run(bin + " analyze cli_two_level.json 2>/dev/null");
    EXPECT(r.exit_code == 0);
    const Json rep = Json::parse(r.out);
    EXPECT(rep["dim"] == 2);
    EXPECT(near(rep["ell"].get<double>(), 0.8030286220374507, 1e-12));
    EXPECT(near(rep["upper"].get<double>(), 1.9386825902965916, 1e-12));
    EXPECT(near(rep["epsilon"].get<double>(), 0.5, 1e-12));
    EXPECT(rep["margin"].get<double>() >= 1.0);
    EXPECT(rep["violation"] == false);
    EXPECT(rep["undesired"] == Json::array({2}));
  }

  // analyze identity: the lazy protocol is free and exactly saturates the bound
  {
    const auto r = run(bin + " analyze cli_identity.json 2>/dev/null");
    EXPECT(r.exit_code == 0);
    const Json rep = Json::parse(r.out);
    EXPECT(near(rep["ell"].get<double>(), 0.0, 1e-12));
    EXPECT(near(rep["margin"].get<double>(), 1.0, 1e-12));
  }

  // malformed input: exit 1, no payload on stdout
  {
    const auto r = run(bin + " analyze cli_bad.json 2>/dev/null");
    EXPECT(r.exit_code == 1);
    EXPECT(r.out.empty());
  }

  // sweep determinism: identical bytes across two runs with the same seed
  {
    const auto a = run(bin + " sweep --kind random --count 8 --seed 99 --out cli_a.csv 2>/dev/null");
    const auto b = run(bin + " sweep --kind random --count 8 --seed 99 --out cli_b.csv 2>/dev/null");
    EXPECT(a.exit_code == 0);
    EXPECT(b.exit_code == 0);
    const std::string bytes_a = read_file("cli_a.csv");
    EXPECT(!bytes_a.empty());
    EXPECT(bytes_a == read_file("cli_b.csv"));
    const auto c = run(bin + " sweep --kind random --count 8 --seed 100 --out cli_c.csv 2>/dev/null");
    EXPECT(c.exit_code == 0);
    EXPECT(bytes_a != read_file("cli_c.csv"));
  }

  // two-level sweep hits the closed form on its grid
  {
    const auto r = run(bin + " sweep --kind two-level --values 0.25,1.0 2>/dev/null");
    EXPECT(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header, row1;
    std::getline(lines, header);
    std::getline(lines, row1);
    EXPECT(header == "wtau,C,C_minus_wtau,ell,upper,epsilon,margin,entropic_bound");
    EXPECT(row1.rfind("0.25,0.320689771154,", 0) == 0);
  }

  // path: CSV rows plus a bracket-checked summary
  {
    const auto r = run(bin + " path cli_two_level.json --segments 8 --out cli_path.csv");
    EXPECT(r.exit_code == 0);
    const Json summary = Json::parse(r.out);
    EXPECT(near(summary["ell"].get<double>(), 0.8030286220374507, 1e-12));
    EXPECT(summary["c_hat"].get<double>() >= summary["ell"].get<double>() - 1e-9);
    EXPECT(summary["violation"] == false);

    std::istringstream csv(read_file("cli_path.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT(header == "t,r_1,r_2,segment_speed");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT(rows == 9);
  }

  // protocol-check: frozen minimum protocol count
  {
    const auto r = run(bin + " protocol-check cli_protocols.json --gamma 1.0 2>/dev/null");
    EXPECT(r.exit_code == 0);
    const Json rep = Json::parse(r.out);
    EXPECT(rep["N"] == 1);
    EXPECT(near(rep["N_min"].get<double>(), 0.46504831480303445, 1e-10));
    EXPECT(rep["violation"] == false);
  }

  // decompose-search: negative determinant is blocked, residual stays positive
  {
    const auto r = run(bin + " decompose-search cli_hollow_swapped.json --depth 2 --grid 0.25 2>/dev/null");
    EXPECT(r.exit_code == 0);
    const Json rep = Json::parse(r.out);
    EXPECT(near(rep["det"].get<double>(), -0.25, 1e-12));
    EXPECT(rep["verdict"] == "blocked");
    EXPECT(rep["residual"].get<double>() > 0.0);
    EXPECT(rep["nodes_visited"].get<long long>() > 0);
  }

  // quantum-analyze: frozen swap numbers through the file format
  {
    const auto r = run(bin + " quantum-analyze cli_swap25.json 2>/dev/null");
    EXPECT(r.exit_code == 0);
    const Json rep = Json::parse(r.out);
    EXPECT(near(rep["ell"].get<double>(), 0.8030286220374507, 1e-9));
    EXPECT(near(rep["epsilon"].get<double>(), 0.5, 1e-12));
    EXPECT(near(rep["entropy_bound"].get<double>(), 0.20914434351035935, 1e-9));
    EXPECT(rep["violation"] == false);
  }

  // quantum sweep determinism mirrors the classical one
  {
    const auto a = run(bin + " quantum-sweep --kind random --count 6 --seed 5 2>/dev/null");
    const auto b = run(bin + " quantum-sweep --kind random --count 6 --seed 5 2>/dev/null");
    EXPECT(a.exit_code == 0);
    EXPECT(a.out == b.out);
    EXPECT(!a.out.empty());
  }

  if (g_failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << g_failures << " cli expectations failed\n";
  return 1;
}
