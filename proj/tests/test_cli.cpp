#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracsing/errors.hpp"
#include "fracsing_cli/commands.hpp"
#include "fracsing_cli/config.hpp"
#include "fracsing_cli/io.hpp"
#include "support.hpp"

using namespace fracsing;
using namespace fracsing::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("fracsing-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Runs the installed executable; returns its exit status.
int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("FRACSING_CACHE='") + FRACSING_TEST_CACHE + "' '" + FRACSING_EXE +
                          "' " + args + " -o '" + out.string() + "' 2>'" + (out / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("config defaults, overrides and validation") {
  const auto cfg = load_config({}, {});
  CHECK(cfg.params.dim == 2);
  CHECK(cfg.params.alpha == 0.75);
  CHECK(cfg.params.p == 2.0);
  CHECK(cfg.grid.n_nodes == 400);
  CHECK(cfg.wants("csv"));

  const auto o = load_config({}, {"k=0.5", "params.alpha=0.6", "grid.n_nodes=128", "N=3",
                                  "tolerances.picard_tol=1e-12", "output.formats=[\"json\"]"});
  CHECK(o.params.k == 0.5);
  CHECK(o.params.alpha == 0.6);
  CHECK(o.params.dim == 3);
  CHECK(o.grid.n_nodes == 128);
  CHECK(o.tolerances.picard_tol == 1e-12);
  CHECK_FALSE(o.wants("csv"));

  CHECK_THROWS_AS(load_config({}, {"nonsense=1"}), InvalidArgument);
  CHECK_THROWS_AS(load_config({}, {"k"}), InvalidArgument);
  CHECK_THROWS_AS(load_config({}, {"params.k=\"abc\""}), InvalidArgument);
  CHECK_THROWS_AS(load_config({}, {"grid.n_nodes=8"}), InvalidArgument);
  CHECK_THROWS_AS(load_config({}, {"alpha=1.2"}), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json", {}), InvalidArgument);

  // JSON round trip.
  const auto back = from_json(to_json(o));
  CHECK(to_json(back) == to_json(o));
  CHECK(from_json(default_config_json()).grid == GridSpec{});
}

TEST_CASE("config file with overrides applied on top") {
  const auto dir = scratch("config");
  {
    std::ofstream f(dir / "cfg.json");
    f << R"({"params": {"k": 0.2, "p": 1.5}, "grid": {"n_nodes": 64}})";
  }
  const auto cfg = load_config(dir / "cfg.json", {"k=0.3"});
  CHECK(cfg.params.k == 0.3);
  CHECK(cfg.params.p == 1.5);
  CHECK(cfg.grid.n_nodes == 64);
  {
    std::ofstream f(dir / "bad.json");
    f << "{not json";
  }
  CHECK_THROWS_AS(load_config(dir / "bad.json", {}), InvalidArgument);
}

TEST_CASE("config hash ignores plumbing but not physics") {
  auto a = load_config({}, {"k=0.1"});
  auto b = a;
  b.threads = 7;
  b.output.directory = "/elsewhere";
  b.emit_plots = true;
  CHECK(config_hash(a) == config_hash(b));
  b.params.k = 0.2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("doubles round trip through text") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 4.9e-324}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK(parse_double(format_double(-INFINITY)) == -INFINITY);
  CHECK_THROWS(parse_double("1.0x"));
}

TEST_CASE("CSV with JSON header and atomic writes") {
  const auto dir = scratch("csv");
  Table t{{"a", "b"}, {{1.0, 0.1}, {2.0, 1e-17}}};
  write_csv(dir / "t.csv", {{"config_hash", "abc"}, {"version", "x"}}, t);
  const auto text = slurp(dir / "t.csv");
  CHECK(text.rfind("# {", 0) == 0);
  const auto back = read_csv(dir / "t.csv");
  CHECK(back.header.at("config_hash") == "abc");
  CHECK(back.table.columns == t.columns);
  CHECK(back.table.rows == t.rows);
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().filename() == "t.csv");
  }
  CHECK(parse_double(" 2.5\r") == 2.5);
  write_text_atomic(dir / "nested" / "x.csv", "x");
  CHECK(slurp(dir / "nested" / "x.csv") == "x");
  // A regular file where a directory is needed is an I/O error, not a partial file.
  CHECK_THROWS(write_text_atomic(dir / "t.csv" / "x.csv", "x"));
}

TEST_CASE("profile CSV round trips bit-exactly through load/save") {
  const auto dir = scratch("profile");
  const auto g = fracsing::testing::grid(64);
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) {
    v[static_cast<std::size_t>(i)] = std::sin(1.0 / 3.0 + i) * 1e-3;
  }
  const RadialFunction u(g, v, 0.1 / 3.0, -0.5);
  save_profile_csv(dir / "a.csv", {{"config_hash", "h"}}, u);
  const auto back = load_profile_csv(dir / "a.csv", g);
  for (int i = 0; i < 64; ++i) {
    CHECK(back.total(i) == u.total(i));
    CHECK(back.values()[i] == u.values()[i]);
  }
  CHECK(back.singular_coeff() == u.singular_coeff());
  save_profile_csv(dir / "b.csv", {{"config_hash", "h"}}, back);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK_THROWS_AS(load_profile_csv(dir / "a.csv", fracsing::testing::grid(64, 2, 3.0)), InvalidArgument);
}

TEST_CASE("solve: k = 0 gives the zero profile") {
  const auto out = scratch("solve0");
  REQUIRE(run_cli("solve --set k=0", out) == 0);
  const auto csv = read_csv(out / "solution.csv");
  CHECK(csv.table.columns == std::vector<std::string>{"r", "u_total", "u_smooth", "u_singular"});
  for (const auto& row : csv.table.rows) {
    CHECK(row[1] == 0.0);
  }
  const auto rep = read_json(out / "report.json");
  CHECK(rep.at("status") == "Converged");
  CHECK(rep.at("iterations") == 1);
  const auto& prov = rep.at("provenance");
  CHECK(prov.contains("config"));
  CHECK(prov.contains("grid"));
  CHECK(prov.at("c2").get<double>() > 0.0);
  CHECK(prov.at("lambda1").get<double>() > 0.0);
  CHECK(csv.header.at("config_hash") == prov.at("config_hash"));
  CHECK(csv.header.contains("version"));
}

TEST_CASE("solve: small k is barrier-certified and classified") {
  const auto out = scratch("solve");
  REQUIRE(run_cli("solve --set k=0.05 --emit-plots", out) == 0);
  const auto rep = read_json(out / "report.json");
  CHECK(rep.at("barrier_certified") == true);
  CHECK(rep.at("classification").at("verdict") == "DiracSingularity");
  CHECK(fs::exists(out / "classification.json"));
  CHECK(fs::exists(out / "plot_solution.csv"));
  const auto plot = read_csv(out / "plot_solution.csv");
  CHECK(plot.table.columns == std::vector<std::string>{"series", "x", "y"});
}

TEST_CASE("exit codes") {
  const auto out = scratch("exit");
  CHECK(run_cli("solve --set N=2 --set alpha=0.6 --set p=6 --set k=0.01", out) == 2);
  CHECK(slurp(out / "stderr.txt").find("nonexistence") != std::string::npos);
  CHECK(run_cli("solve --set k=100", out) == 2);
  CHECK(run_cli("solve --set bogus=1", out) == 1);
  CHECK(run_cli("frobnicate", out) == 1);
  CHECK(run_cli("", out) == 1);
  CHECK(run_cli("classify", out) == 1);
  CHECK(run_cli("classify /nonexistent.csv", out) == 1);
  CHECK(run_cli("--config /nonexistent.json solve", out) == 1);
  CHECK(run_cli("kstar --set p=4", out) == 2);
  CHECK(run_cli("mountain-pass --set k=5", out) == 2);
}

TEST_CASE("determinism: identical runs give byte-identical CSV bodies") {
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  REQUIRE(run_cli("solve --set k=0.5 --threads 1", a) == 0);
  REQUIRE(run_cli("solve --set k=0.5 --threads 3", b) == 0);
  CHECK(body(slurp(a / "solution.csv")) == body(slurp(b / "solution.csv")));
  CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
}

TEST_CASE("classify an externally supplied profile") {
  const auto out = scratch("classify");
  REQUIRE(run_cli("solve --set k=0.05", out) == 0);
  REQUIRE(run_cli("classify '" + (out / "solution.csv").string() + "' --set k=0.05", out) == 0);
  const auto rep = read_json(out / "classification.json");
  CHECK(rep.at("verdict") == "DiracSingularity");
  CHECK(rep.at("k_estimate").get<double>() == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("kstar, eigen, stability, mountain-pass and bifurcation artifacts") {
  const auto out = scratch("all");
  REQUIRE(run_cli("kstar", out) == 0);
  const auto ks = read_json(out / "kstar.json");
  const double k_lo = ks.at("k_lo").get<double>();
  const double k_hi = ks.at("k_hi").get<double>();
  CHECK(k_hi - k_lo <= 1e-3 * k_lo);
  CHECK(k_lo >= ks.at("k_p").get<double>());
  CHECK(fs::exists(out / "extremal.csv"));

  REQUIRE(run_cli("eigen", out) == 0);
  const auto eig = read_json(out / "eigen.json");
  CHECK(eig.at("relative_difference").get<double>() <= 1e-8);
  for (const auto& row : read_csv(out / "eigenfunction.csv").table.rows) {
    CHECK(row[1] > 0.0);
  }

  REQUIRE(run_cli("stability", out) == 0);
  const auto st = read_csv(out / "stability.csv");
  REQUIRE(st.table.rows.size() == 8);
  for (std::size_t j = 1; j < st.table.rows.size(); ++j) {
    CHECK(st.table.rows[j][1] <= st.table.rows[j - 1][1]);
  }

  std::ostringstream k_half;
  k_half.precision(17);
  k_half << 0.5 * k_lo;
  REQUIRE(run_cli("mountain-pass --set k=" + k_half.str(), out) == 0);
  const auto mp = read_json(out / "mountain_pass.json");
  CHECK(mp.at("method_agreement").get<double>() <= 1e-4);
  const auto sol = read_csv(out / "solutions.csv");
  for (const auto& row : sol.table.rows) {
    CHECK(row[2] > row[1]);
  }
  CHECK(read_csv(out / "energy_trace.csv").table.rows.size() > 2);

  REQUIRE(run_cli("bifurcation --set scan_samples=5", out) == 0);
  const auto bif = read_csv(out / "bifurcation.csv");
  REQUIRE(bif.table.rows.size() == 5);
  // Two branches, the gap between them closing as k -> k_lo.
  double prev_gap = INFINITY;
  for (const auto& row : bif.table.rows) {
    const double gap = row[3] - row[1];
    CHECK(gap >= 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap == doctest::Approx(0.0));
}
