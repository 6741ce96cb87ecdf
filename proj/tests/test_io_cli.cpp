#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schurlab/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace schurlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "schurlab-cli-tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef SCHURLAB_CLI_PATH
int run_cli(const std::string& args, const fs::path& out, const fs::path& err) {
  const std::string cmd = std::string(SCHURLAB_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("matrix JSON round trip, complex and real") {
  std::mt19937_64 rng(91);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index m = 1 + trial % 4;
    ComplexMatrix a(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) {
        a(i, j) = trial % 2 ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng));
      }
    }
    const io::json doc = io::matrix_to_json(a);
    const ComplexMatrix back = io::matrix_from_json(doc, m);
    CHECK((back - a).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matrix JSON accepts nested rows, flat entries and bare reals") {
  const io::json nested = io::json::parse("[[0, 1], [1, 0]]");
  const ComplexMatrix a = io::matrix_from_json(nested);
  CHECK(a.rows() == 2);
  CHECK(a(0, 1).real() == 1.0);

  const io::json flat = io::json::parse("[[0,1],[2,3],[4,5],[6,7]]");
  const ComplexMatrix b = io::matrix_from_json(flat);
  CHECK(b.rows() == 2);
  CHECK(b(0, 0) == Complex(0, 1));
  CHECK(b(1, 1) == Complex(6, 7));

  const io::json plain = io::json::parse("[1, 2, 3, 4]");
  const ComplexMatrix c = io::matrix_from_json(plain);
  CHECK(c(1, 0).real() == 3.0);

  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[1, 2, 3]")), io::FileError);
}

TEST_CASE("kernel, cost, multiplier and block element documents round trip") {
  RealMatrix line(3, 3);
  line << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  const Kernel k({"x", "y", "z"}, line.cast<Complex>());
  const Kernel k2 = io::kernel_from_json(io::kernel_to_json(k));
  CHECK(k2.points() == k.points());
  CHECK((k2.values() - k.values()).cwiseAbs().maxCoeff() == 0.0);

  const CostMatrix cost({"a", "b"}, (RealMatrix(2, 2) << 0, 1, 4, 0).finished());
  const CostMatrix cost2 = io::cost_from_json(io::cost_to_json(cost));
  CHECK((cost2.entries() - cost.entries()).cwiseAbs().maxCoeff() == 0.0);

  io::json complex_cost{{"values", io::json::array({io::json::array({1.0, 0.5})})}};
  CHECK_THROWS_AS(io::cost_from_json(complex_cost), io::FileError);

  ComplexVector phi(3);
  phi << Complex(1, 0), Complex(0, 1), Complex(-0.5, 0.25);
  const CyclicMultiplier mult(3, phi);
  const CyclicMultiplier mult2 = io::multiplier_from_json(io::multiplier_to_json(mult));
  CHECK(mult2.N == 3);
  CHECK((mult2.phi - phi).cwiseAbs().maxCoeff() == 0.0);

  const BlockElement blk(2, 2, ComplexMatrix::Identity(4, 4));
  const BlockElement blk2 = io::block_element_from_json(io::block_element_to_json(blk));
  CHECK(blk2.m == 2);
  CHECK(blk2.d == 2);
  CHECK((blk2.entries - blk.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("schatten index serialization") {
  CHECK(io::schatten_to_json(SchattenIndex::infinity()) == io::json("inf"));
  CHECK(io::schatten_from_json(io::json("inf")).is_infinite());
  CHECK(io::schatten_from_json(io::json(2.0)).is(2.0));
  CHECK_THROWS_AS(io::schatten_from_json(io::json("weird")), io::FileError);
}

TEST_CASE("report serialization carries the schema fields") {
  NormReport rep;
  rep.p = SchattenIndex::infinity();
  rep.lower = 1.0;
  rep.upper = 1.5;
  const io::json j = io::norm_report_to_json(rep);
  CHECK(j.at("p") == io::json("inf"));
  CHECK(j.at("lower") == 1.0);
  CHECK(j.at("upper") == 1.5);
  CHECK(j.contains("exact"));

  ProbeReport probe;
  probe.t = 0.5;
  probe.n = 2;
  probe.threshold = 4.0;
  probe.verdict = ProbeReport::Verdict::strictly_below;
  const std::string csv = io::sweep_csv({probe});
  CHECK(csv.rfind("t,lower,upper,threshold,margin,verdict\n", 0) == 0);
  CHECK(csv.find("strictly-below") != std::string::npos);
}

#ifdef SCHURLAB_CLI_PATH

TEST_CASE("cli classifies, probes and sweeps with documented exit codes") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";

  io::write_text_file((dir / "ones.json").string(),
                      io::json{{"values", io::json::array({1, 1, 1, 1})}}.dump());
  io::write_text_file((dir / "crafted.json").string(),
                      io::json{{"values", io::json::array({0, 1, 4, 0})}}.dump());

  CHECK(run_cli("norm " + (dir / "ones.json").string() + " --p inf", out, err) == 0);
  const io::json norm = io::json::parse(slurp(out));
  CHECK(std::abs(norm.at("upper").get<double>() - 1.0) <= 1e-9);

  CHECK(run_cli("classify-cost " + (dir / "crafted.json").string(), out, err) == 1);
  const io::json cls = io::json::parse(slurp(out));
  CHECK(cls.at("verdict") == io::json("infeasible"));
  CHECK(cls.at("certificate").at("grade") == io::json("norm_bound"));

  CHECK(run_cli("probe " + (dir / "crafted.json").string() + " --t 1 --n 2 --p 2", out, err) ==
        0);
  const io::json probe = io::json::parse(slurp(out));
  CHECK(probe.at("verdict") == io::json("strictly-below"));

  const fs::path csv = dir / "sweep.csv";
  CHECK(run_cli("sweep " + (dir / "ones.json").string() +
                    " --grid log:0.25:4:5 --n 1 --p 2 -o " + csv.string(),
                out, err) == 0);
  const std::string body = slurp(csv);
  CHECK(body.rfind("t,lower,upper,threshold,margin,verdict\n", 0) == 0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 6);

  // usage, grid, and file errors carry distinct exit codes
  CHECK(run_cli("frobnicate", out, err) == 2);
  CHECK(run_cli("sweep " + (dir / "ones.json").string() + " --grid log:1:2 --n 1", out, err) ==
        4);
  CHECK(run_cli("norm " + (dir / "missing.json").string(), out, err) == 5);
}

TEST_CASE("cli artifacts are byte-identical across reruns") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";

  io::write_text_file((dir / "cost.json").string(),
                      io::json{{"values", io::json::array({0, 1, 1, 0})}}.dump());

  const fs::path csv1 = dir / "s1.csv";
  const fs::path csv2 = dir / "s2.csv";
  const fs::path man1 = dir / "m1.json";
  const fs::path man2 = dir / "m2.json";
  const std::string base = "sweep " + (dir / "cost.json").string() +
                           " --grid log:0.015625:64:13 --n 2 --p inf --seed 0";
  CHECK(run_cli(base + " -o " + csv1.string() + " --manifest " + man1.string(), out, err) == 0);
  CHECK(run_cli(base + " -o " + csv2.string() + " --manifest " + man2.string(), out, err) == 0);
  CHECK(slurp(csv1) == slurp(csv2));

  io::json j1 = io::json::parse(slurp(man1));
  io::json j2 = io::json::parse(slurp(man2));
  CHECK(j1.at("checks") == j2.at("checks"));
  CHECK(j1.at("seed") == j2.at("seed"));
  CHECK(j1.at("tool_version") == j2.at("tool_version"));
  j1.erase("wall_time_ms");
  j2.erase("wall_time_ms");
  j1.erase("command");
  j2.erase("command");
  CHECK(j1 == j2);
}

TEST_CASE("cli honors the tolerance environment override") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";

  // diagonal entry 5e-4 violates the default residual tolerance but passes
  // a relaxed one supplied through the environment
  io::write_text_file((dir / "offdiag.json").string(),
                      io::json{{"values", io::json::array({0.0005, 1, 1, 0})}}.dump());
  CHECK(run_cli("embed " + (dir / "offdiag.json").string(), out, err) == 1);
  const std::string cmd = std::string("SCHURLAB_TOL=1e-2 ") + SCHURLAB_CLI_PATH + " embed " +
                          (dir / "offdiag.json").string() + " > " + out.string() + " 2> " +
                          err.string();
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
}

TEST_CASE("cli embed and transfer verbs") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";

  io::write_text_file((dir / "line.json").string(),
                      io::json{{"values", io::json::array({0, 1, 4, 1, 0, 1, 4, 1, 0})}}.dump());
  CHECK(run_cli("embed " + (dir / "line.json").string(), out, err) == 0);
  const io::json emb = io::json::parse(slurp(out));
  CHECK(emb.at("residual").get<double>() <= 1e-9);

  io::write_text_file((dir / "notcnd.json").string(),
                      io::json{{"values", io::json::array({0, -1, -1, 0})}}.dump());
  CHECK(run_cli("embed " + (dir / "notcnd.json").string(), out, err) == 1);

  io::write_text_file((dir / "mult.json").string(),
                      io::json{{"N", 3}, {"phi", io::json::array({0.5, -0.25, 1.0})}}.dump());
  CHECK(run_cli("transfer " + (dir / "mult.json").string() + " --p inf", out, err) == 0);
  const io::json rep = io::json::parse(slurp(out));
  CHECK(rep.at("outcome") == io::json("pass"));
}

#endif  // SCHURLAB_CLI_PATH
