#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fracsing/errors.hpp"
#include "fracsing/operator_io.hpp"
#include "support.hpp"

using namespace fracsing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("fracsing-io-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

GreenOperator small_op() {
  return assemble(fracsing::testing::grid(48), ProblemParams(2, 0.75, 2.0, 0.0));
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  const std::string empty;
  CHECK(fnv1a64({reinterpret_cast<const unsigned char*>(empty.data()), 0}) == 0xcbf29ce484222325ULL);
  const std::string a = "a";
  CHECK(fnv1a64({reinterpret_cast<const unsigned char*>(a.data()), 1}) == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("dump and load round trip") {
  const auto dir = scratch("roundtrip");
  const auto op = small_op();
  const auto path = dir / "op.bin";
  save_operator(op, path);
  CHECK(fs::exists(path));
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().filename() == "op.bin");  // no temporaries left behind
  }
  const auto back = load_operator(path);
  CHECK(back.size() == op.size());
  CHECK(back.dim() == 2);
  CHECK(back.alpha() == 0.75);
  const double scale = op.matrix().cwiseAbs().maxCoeff();
  CHECK((back.matrix() - op.matrix()).cwiseAbs().maxCoeff() <= 1e-15 * scale);
  for (int i = 0; i < op.size(); ++i) {
    CHECK(back.dirac_column()[i] == op.dirac_column()[i]);
    CHECK(back.grid()->node(i) == op.grid()->node(i));
  }

  // The header is plain JSON following the magic and length.
  std::ifstream in(path, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  CHECK(std::string(magic, 8) == "FRACSOP1");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 8);
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  CHECK(header.find("\"checksum\"") != std::string::npos);
  CHECK(fs::file_size(path) == 16 + len + sizeof(double) * (48 * 48 + 48));
}

TEST_CASE("corrupt files are rejected") {
  const auto dir = scratch("corrupt");
  const auto op = small_op();
  const auto path = dir / "op.bin";
  save_operator(op, path);
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(-20, std::ios::end);
    const char junk = 0x5a;
    f.write(&junk, 1);
  }
  CHECK_THROWS_AS(load_operator(path), InvalidArgument);
  {
    std::ofstream f(dir / "bad.bin", std::ios::binary);
    f << "NOTANOPERATOR";
  }
  CHECK_THROWS_AS(load_operator(dir / "bad.bin"), InvalidArgument);
  CHECK_THROWS(load_operator(dir / "missing.bin"));
}

TEST_CASE("cache keys and cached assembly") {
  GridSpec spec;
  CHECK(cache_key(spec, 2, 0.75) != cache_key(spec, 2, 0.5));
  CHECK(cache_key(spec, 2, 0.75) != cache_key(spec, 3, 0.75));
  spec.n_nodes = 200;
  CHECK(cache_key(spec, 2, 0.75) != cache_key(GridSpec{}, 2, 0.75));

  const auto dir = scratch("cache");
  const auto grid = fracsing::testing::grid(48);
  const ProblemParams params(2, 0.75, 2.0, 0.0);
  const auto first = cached_assemble(grid, params, {}, dir);
  const auto file = dir / cache_key(grid->spec(), 2, 0.75);
  REQUIRE(fs::exists(file));
  const auto stamp = fs::last_write_time(file);
  const auto second = cached_assemble(grid, params, {}, dir);
  CHECK(fs::last_write_time(file) == stamp);
  CHECK(second.grid() == grid);
  CHECK((second.matrix() - first.matrix()).cwiseAbs().maxCoeff() <= 1e-15 * first.matrix().cwiseAbs().maxCoeff());

  // A corrupt entry is rebuilt rather than trusted.
  { std::ofstream(file, std::ios::binary | std::ios::trunc) << "garbage"; }
  const auto third = cached_assemble(grid, params, {}, dir);
  CHECK(third.size() == 48);
  CHECK_NOTHROW(load_operator(file));
}

TEST_CASE("FRACSING_CACHE names the cache directory") {
  ::setenv("FRACSING_CACHE", "/tmp/some-cache", 1);
  REQUIRE(cache_directory_from_env().has_value());
  CHECK(*cache_directory_from_env() == fs::path("/tmp/some-cache"));
  ::setenv("FRACSING_CACHE", "", 1);
  CHECK_FALSE(cache_directory_from_env().has_value());
  ::unsetenv("FRACSING_CACHE");
  CHECK_FALSE(cache_directory_from_env().has_value());
}
