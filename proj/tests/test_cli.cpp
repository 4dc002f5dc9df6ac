#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "generators.hpp"
#include "sphframe/io.hpp"

using namespace sphframe;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(SPHFRAME_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) num += (a[k] - b[k]) * (a[k] - b[k]), den += b[k] * b[k];
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("cli: help and bad flags") {
  const auto dir = gen::scratch("cli_help");
  const Run help = run("--help", dir);
  CHECK(help.code == 0);
  for (const char* cmd : {"decompose", "reconstruct", "denoise", "approx-error", "bench", "validate",
                          "emit-filter-curves", "emit-framelet", "gen-signal"})
    CHECK(help.out.find(cmd) != std::string::npos);
  CHECK(run("", dir).code == 2);
  CHECK(run("decompose --bogus 1", dir).code == 2);
  CHECK(run("denoise --levels 6:4 --out x", dir).code == 2);
  CHECK(run("denoise --bank nope --out x", dir).code == 2);
}

TEST_CASE("cli: decompose on gl:255 writes one lowpass and four detail files") {
  const auto dir = gen::scratch("cli_dec");
  REQUIRE(run("gen-signal --function wendland --n 2 --rule gl:255 --out " + (dir / "f2.csv").string(), dir).code == 0);
  const Run r = run("decompose --rule gl:255 --levels 5:7 --input " + (dir / "f2.csv").string() + " --out " +
                        (dir / "dec").string(),
                    dir);
  REQUIRE(r.code == 0);
  int details = 0;
  for (const auto& e : fs::directory_iterator(dir / "dec"))
    if (e.path().filename().string().rfind("detail_", 0) == 0) ++details;
  CHECK(details == 4);
  CHECK(fs::exists(dir / "dec" / "lowpass.csv"));
  const auto kv = read_manifest(dir / "dec" / "manifest.txt");
  CHECK(kv.at("rule_j7") == "gl:255");
  CHECK(slurp(dir / "dec" / "residual.csv").find("projection,7,") != std::string::npos);
}

TEST_CASE("cli: decompose then reconstruct reproduces band-limited input") {
  const auto dir = gen::scratch("cli_rt");
  for (const std::string layout : {"gl", "sp"}) {
    const fs::path in = dir / (layout + "_in.csv"), out = dir / (layout + "_out.csv"), dec = dir / (layout + "_dec");
    REQUIRE(run("gen-signal --function random --layout " + layout + " --level 5 --seed 4 --out " + in.string(), dir).code == 0);
    REQUIRE(run("decompose --layout " + layout + " --levels 3:5 --input " + in.string() + " --out " + dec.string(), dir).code == 0);
    REQUIRE(run("reconstruct --dir " + dec.string() + " --out " + out.string(), dir).code == 0);
    const double err = rel_err(read_values(out), read_values(in));
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("cli: input errors exit 2 and name the file") {
  const auto dir = gen::scratch("cli_err");
  const Run missing = run("decompose --input " + (dir / "nope.csv").string() + " --out " + (dir / "d").string(), dir);
  CHECK(missing.code == 2);
  CHECK(missing.err.find("nope.csv") != std::string::npos);
  REQUIRE(run("gen-signal --level 4 --out " + (dir / "small.csv").string(), dir).code == 0);
  const Run shape = run("decompose --levels 4:6 --input " + (dir / "small.csv").string() + " --out " + (dir / "d").string(), dir);
  CHECK(shape.code == 2);
  CHECK(shape.err.find("small.csv") != std::string::npos);
  CHECK(run("reconstruct --dir " + (dir / "nothing").string() + " --out " + (dir / "o.csv").string(), dir).code == 2);
}

TEST_CASE("cli: solver failure exits 3") {
  const auto dir = gen::scratch("cli_cg");
  REQUIRE(run("gen-signal --layout sp --level 5 --out " + (dir / "sp.csv").string(), dir).code == 0);
  const Run r = run("decompose --layout sp --levels 3:5 --max-iter 1 --input " + (dir / "sp.csv").string() + " --out " +
                        (dir / "d").string(),
                    dir);
  CHECK(r.code == 3);
  CHECK(r.err.find("converge") != std::string::npos);
}

TEST_CASE("cli: validate") {
  const auto dir = gen::scratch("cli_val");
  CHECK(run("validate --levels 3:6", dir).code == 0);
  for (const char* b : {"eta1", "eta2", "eta3"}) CHECK(run(std::string("validate --bank ") + b, dir).code == 0);
  const Run sp = run("validate --layout sp --levels 3:5", dir);
  CHECK(sp.code == 1);
  CHECK(sp.out.find("max_error") != std::string::npos);
  CHECK(sp.err.find("exactness") != std::string::npos);
  const Run bad = run("validate --perturb-highpass 0.5", dir);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("UEP") != std::string::npos);
}

TEST_CASE("cli: approx-error decreases with smoothness on gl") {
  const auto dir = gen::scratch("cli_apx");
  const Run r = run("approx-error --rule gl:63 --level 5 --wendland original", dir);
  REQUIRE(r.code == 0);
  std::istringstream ss(r.out);
  std::string line;
  std::vector<double> errs;
  while (std::getline(ss, line))
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) errs.push_back(std::stod(line.substr(line.find(',') + 1)));
  REQUIRE(errs.size() == 5);
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
}

TEST_CASE("cli: bench table") {
  const auto dir = gen::scratch("cli_bench");
  const Run r = run("bench --levels 3:5 --j0 2 --min-time 0.01 --out " + (dir / "b.csv").string(), dir);
  REQUIRE(r.code == 0);
  std::istringstream ss(slurp(dir / "b.csv"));
  std::string line;
  std::getline(ss, line);
  CHECK(line.find("ratio_total") != std::string::npos);
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line[0] == '#') {
      CHECK(line.find("exponent_total=") != std::string::npos);
      continue;
    }
    ++rows;
    const int J = std::stoi(line);
    const auto cells = std::count(line.begin(), line.end(), ',');
    CHECK(cells == 9);
    // Ratio columns are filled from J0 + 2 on.
    const bool has_ratio = line.find(",,") == std::string::npos;
    CHECK(has_ratio == (J >= 4));
  }
  CHECK(rows == 3);
}

TEST_CASE("cli: denoise outputs and determinism") {
  const auto dir = gen::scratch("cli_den");
  const std::string args = "denoise --theta 0.1 --seed 3 --bank eta2 --levels 4:6 --wendland original --out ";
  REQUIRE(run(args + (dir / "a").string(), dir).code == 0);
  REQUIRE(run(args + (dir / "b").string(), dir).code == 0);
  CHECK(fs::exists(dir / "a" / "restored.csv"));
  const std::string report = slurp(dir / "a" / "report.txt");
  CHECK(report.find("snr_restored_db=") != std::string::npos);
  CHECK(report.find("zeroed_j4_n1=") != std::string::npos);
  CHECK(slurp(dir / "a" / "restored.csv") == slurp(dir / "b" / "restored.csv"));
  // External noisy input with a clean reference.
  REQUIRE(run("gen-signal --level 6 --n 4 --wendland original --out " + (dir / "clean.csv").string(), dir).code == 0);
  REQUIRE(run("gen-signal --level 6 --n 4 --wendland original --noise --theta 0.1 --seed 3 --out " + (dir / "noisy.csv").string(), dir)
              .code == 0);
  REQUIRE(run("denoise --bank eta2 --input " + (dir / "noisy.csv").string() + " --reference " + (dir / "clean.csv").string() +
                  " --out " + (dir / "c").string(),
              dir)
              .code == 0);
  CHECK(slurp(dir / "c" / "restored.csv") == slurp(dir / "a" / "restored.csv"));
  CHECK(run("denoise --input " + (dir / "noisy.csv").string() + " --out " + (dir / "d").string(), dir).code == 2);
}

TEST_CASE("cli: filter curves and framelets") {
  const auto dir = gen::scratch("cli_curves");
  const Run c = run("emit-filter-curves --bank eta3 --step 0.001", dir);
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("xi,a,b1,b2,b3,phi,psi1,psi2,psi3\n", 0) == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 1002);
  const Run f = run("emit-framelet --j 6 --kind b1 --node-at north --n-theta 91", dir);
  REQUIRE(f.code == 0);
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 92);
  const Run g = run("emit-framelet --j 3 --kind phi --node-at 5 --grid latlon --n-theta 5 --n-phi 8", dir);
  REQUIRE(g.code == 0);
  CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 41);
  CHECK(run("emit-framelet --kind b3", dir).code == 2);
  CHECK(run("emit-framelet --j 3 --node-at 100000", dir).code == 2);
  const Run a = run("gen-signal --noise --seed 9 --out " + (dir / "x.csv").string(), dir);
  const std::string first = slurp(dir / "x.csv");
  run("gen-signal --noise --seed 9 --out " + (dir / "x.csv").string(), dir);
  CHECK(a.code == 0);
  CHECK(first == slurp(dir / "x.csv"));
}
