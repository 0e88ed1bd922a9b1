#include "rmds/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rmds/rng.hpp"
#include "support.hpp"

using namespace rmds;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    const auto tick = std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() / ("rmds_io_test_" + std::to_string(tick));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("matrix CSV round-trips doubles exactly") {
  TempDir tmp;
  Rng rng(1);
  Matrix m(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = rng.uniform(-1e8, 1e8) * std::pow(10.0, -rng.below(12));
  }
  m(0, 0) = 0.1;  // not exactly representable
  m(1, 1) = -2500.0;
  m(2, 2) = 1e-300;
  io::write_matrix_csv(tmp.file("m.csv"), m);
  const Matrix back = io::read_matrix_csv(tmp.file("m.csv"));
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix CSV parse errors name the location") {
  std::istringstream bad("1,2\n3,oops\n");
  CHECK_THROWS_WITH_AS(io::read_matrix_csv(bad, "bad.csv"),
                       doctest::Contains("row 2, column 2"), ValidationError);

  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_matrix_csv(ragged, "r.csv"), ValidationError);

  std::istringstream empty("");
  CHECK_THROWS_AS(io::read_matrix_csv(empty, "e.csv"), ValidationError);

  CHECK_THROWS_AS(io::read_matrix_csv("/nonexistent/path.csv"), ValidationError);
}

TEST_CASE("points CSV writes a header and reads it back") {
  TempDir tmp;
  Matrix pts(3, 2);
  pts << 1.5, -2, 0, 4.25, 6, 6;
  io::write_points_csv(tmp.file("p.csv"), pts);
  {
    std::ifstream f(tmp.file("p.csv"));
    std::string first;
    std::getline(f, first);
    CHECK(first == "x,y");
  }
  const Matrix back = io::read_points_csv(tmp.file("p.csv"));
  CHECK((back - pts).cwiseAbs().maxCoeff() == 0.0);

  // Headerless files parse too.
  io::write_points_csv(tmp.file("q.csv"), pts, false);
  const Matrix back2 = io::read_points_csv(tmp.file("q.csv"));
  CHECK((back2 - pts).cwiseAbs().maxCoeff() == 0.0);

  // Single-row files, with and without a header.
  io::write_points_csv(tmp.file("one.csv"), pts.topRows(1), false);
  CHECK((io::read_points_csv(tmp.file("one.csv")) - pts.topRows(1))
            .cwiseAbs().maxCoeff() == 0.0);
  io::write_points_csv(tmp.file("one_h.csv"), pts.topRows(1), true);
  CHECK((io::read_points_csv(tmp.file("one_h.csv")) - pts.topRows(1))
            .cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("triplet CSV round trip") {
  TempDir tmp;
  SparseSymmetric s;
  s.n = 6;
  s.entries = {{0, 2, 3.75}, {1, 1, -0.5}, {4, 5, 1e-13}};
  io::write_triplets_csv(tmp.file("s.csv"), s);
  const SparseSymmetric back = io::read_triplets_csv(tmp.file("s.csv"), 6);
  REQUIRE(back.support_size() == 3);
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    CHECK(back.entries[i].i == s.entries[i].i);
    CHECK(back.entries[i].j == s.entries[i].j);
    CHECK(back.entries[i].value == s.entries[i].value);
  }
  CHECK((back.to_dense() - s.to_dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("table and trace formats") {
  std::ostringstream s;
  io::write_success_table_csv(
      s, {{0.05, 0.5, 1.2, 100, 99, 0.99}});
  CHECK(s.str() == "p,gamma,xi0_multiplier,trials,successes,rate\n"
                   "0.05,0.5,1.2,100,99,0.99\n");

  std::ostringstream r;
  io::write_rmse_table_csv(r, {{0.1, 15, "rmds_aap", 0.0123456789123, 0.5}});
  CHECK(r.str() == "sigma2,m,method,mean_rmse,std_rmse\n"
                   "0.1,15,rmds_aap,0.01234567891,0.5\n");

  SolverTrace tr;
  TraceRecord rec;
  rec.k = 3;
  rec.xi = 375.0;
  rec.support_size = 42;
  rec.err_outlier_inf = 1.25;
  rec.err_gram_inf = 0.5;
  rec.err_points_two_inf = 0.0625;
  tr.records.push_back(rec);
  std::ostringstream t;
  io::write_trace_csv(t, tr);
  CHECK(t.str() == "k,xi_k,supp_size,err_S_inf,err_L_inf,err_X_2inf\n"
                   "3,375,42,1.25,0.5,0.0625\n");
}

TEST_CASE("format helpers") {
  CHECK(io::format_full(0.1) == "0.10000000000000001");
  CHECK(io::format_short(0.1) == "0.1");
  CHECK(io::format_full(2500.0) == "2500");
}
