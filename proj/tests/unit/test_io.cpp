#include <atomic>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <lrr/cli_config.hpp>
#include <lrr/io.hpp>
#include <lrr/nets.hpp>
#include <lrr/prob.hpp>
#include <lrr/rng.hpp>
#include <lrr/sensing.hpp>

#include "doctest.h"
#include "test_util.hpp"

namespace fs = std::filesystem;
using lrr::Matrix;
using lrr::RngStream;
using lrr::Vector;
using lrr_test::random_matrix;

namespace {

std::atomic<long> temp_counter{0};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lrr_io_test_" + std::to_string(temp_counter.fetch_add(1)));
    std::error_code ec;
    fs::remove_all(path, ec);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path file(const std::string& name) const { return path / name; }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("float formatting round-trips doubles exactly") {
  RngStream rng(31, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double x = rng.next_gaussian() * std::pow(10.0, rng.next_below(20)) *
                     (rng.next_sign() > 0 ? 1.0 : 1e-12);
    const std::string s = lrr::format_float(x);
    CHECK(lrr::parse_float(s) == x);
  }
  CHECK(lrr::parse_float(lrr::format_float(0.0)) == 0.0);
  CHECK_THROWS_AS(lrr::parse_float(""), std::invalid_argument);
  CHECK_THROWS_AS(lrr::parse_float("not-a-number"), std::invalid_argument);
}

TEST_CASE("matrix csv round-trip is lossless") {
  TempDir dir;
  RngStream rng(32, 0);
  const Matrix a = random_matrix(rng, 5, 7);
  const fs::path p = dir.file("a.csv");
  lrr::write_matrix_csv(p, a);
  const Matrix back = lrr::read_matrix_csv(p);
  REQUIRE(back.rows() == a.rows());
  REQUIRE(back.cols() == a.cols());
  CHECK((back - a).norm() == 0.0);
}

TEST_CASE("matrix csv reader rejects malformed input") {
  TempDir dir;
  const fs::path ragged = dir.file("ragged.csv");
  {
    std::ofstream out(ragged);
    out << "1,2,3\n1,2\n";
  }
  CHECK_THROWS_AS(lrr::read_matrix_csv(ragged), std::invalid_argument);

  const fs::path empty = dir.file("empty.csv");
  { std::ofstream out(empty); }
  CHECK_THROWS_AS(lrr::read_matrix_csv(empty), std::invalid_argument);

  CHECK_THROWS_AS(lrr::read_matrix_csv(dir.file("missing.csv")),
                  std::invalid_argument);

  const fs::path nonfinite = dir.file("nan.csv");
  {
    std::ofstream out(nonfinite);
    out << "1,nan\n2,3\n";
  }
  CHECK_THROWS_AS(lrr::read_matrix_csv(nonfinite), std::invalid_argument);
}

TEST_CASE("point set csv round-trip") {
  TempDir dir;
  RngStream rng(33, 0);
  std::vector<Vector> pts;
  for (int i = 0; i < 6; ++i) {
    pts.push_back(random_matrix(rng, 4, 1).col(0));
  }
  const lrr::PointSet ps = lrr::make_point_set(pts);
  const fs::path p = dir.file("points.csv");
  lrr::write_point_set_csv(p, ps);
  const lrr::PointSet back = lrr::read_point_set_csv(p);
  REQUIRE(back.dim == 4);
  REQUIRE(back.points.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK((back.points[i] - pts[i]).norm() == 0.0);
  }
}

TEST_CASE("net csv lists one flattened element per line") {
  TempDir dir;
  RngStream rng(34, 0);
  const lrr::Net net = lrr::sphere_net(3, 0.7, rng);
  const fs::path p = dir.file("net.csv");
  lrr::write_net_csv(p, net);
  std::ifstream in(p);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == net.elements.size());
}

TEST_CASE("entry-basis sampling operator json round-trip") {
  TempDir dir;
  RngStream rng(35, 0);
  const auto op = lrr::sample_operator(lrr::OperatorBasis::entry(4), 9, true, rng);
  const fs::path p = dir.file("op.json");
  lrr::write_sampling_operator_json(p, op);
  const auto back = lrr::read_sampling_operator_json(p);
  CHECK(back.n == op.n);
  CHECK(back.replacement == op.replacement);
  CHECK(back.basis.is_entry());
  REQUIRE(back.omegas.size() == op.omegas.size());
  for (std::size_t i = 0; i < op.omegas.size(); ++i) {
    CHECK(back.omegas[i] == op.omegas[i]);
  }
}

TEST_CASE("explicit-basis sampling operator json writes a basis sidecar") {
  TempDir dir;
  RngStream rng(36, 0);
  // An orthonormal explicit basis of 2x2 matrices: entry dyads in a shuffled
  // order still form an orthonormal family.
  std::vector<Matrix> mats;
  mats.push_back(lrr::entry_basis_element(2, 2, 1));
  mats.push_back(lrr::entry_basis_element(2, 1, 1));
  mats.push_back(lrr::entry_basis_element(2, 2, 2));
  mats.push_back(lrr::entry_basis_element(2, 1, 2));
  auto basis = lrr::OperatorBasis::explicit_basis(mats);
  const auto op = lrr::sample_operator(std::move(basis), 6, true, rng);
  const fs::path p = dir.file("op.json");
  lrr::write_sampling_operator_json(p, op);
  CHECK(fs::exists(dir.file("op.json.basis.csv")));
  const auto back = lrr::read_sampling_operator_json(p);
  CHECK_FALSE(back.basis.is_entry());
  for (int a = 1; a <= 4; ++a) {
    CHECK((back.basis.element(a) - mats[static_cast<std::size_t>(a - 1)])
              .norm() == 0.0);
  }
}

TEST_CASE("gaussian map json persists the layout only") {
  TempDir dir;
  RngStream rng(37, 5);
  const auto map = lrr::gaussian_map_new(rng, 3, 4, 5);
  REQUIRE(map.from_seed);
  const fs::path p = dir.file("map.json");
  lrr::write_gaussian_map_json(p, map);
  const auto back = lrr::read_gaussian_map_json(p);
  REQUIRE(back.mats.size() == map.mats.size());
  for (std::size_t j = 0; j < map.mats.size(); ++j) {
    CHECK((back.mats[j] - map.mats[j]).norm() == 0.0);
  }
  // Maps assembled from explicit matrices cannot be reconstructed from a seed.
  const auto explicit_map = lrr::map_from_mats({Matrix::Identity(2, 2)});
  CHECK_THROWS_AS(lrr::write_gaussian_map_json(dir.file("bad.json"), explicit_map),
                  std::invalid_argument);
}

TEST_CASE("experiment config json round-trip is lossless") {
  lrr::ExperimentConfig cfg;
  cfg.subcommand = "jl";
  cfg.seed = 77;
  cfg.trials = 12;
  cfg.threads = 3;
  cfg.out = "results";
  cfg.params["eps"] = 0.5;
  cfg.params["points"] = "p.csv";
  const auto j = lrr::config_to_json(cfg);
  const lrr::ExperimentConfig back = lrr::config_from_json(j);
  CHECK(back == cfg);

  TempDir dir;
  const fs::path p = dir.file("config.json");
  lrr::save_config(cfg, p);
  CHECK(lrr::load_config(p) == cfg);
}

TEST_CASE("experiment config rejects unknown keys") {
  nlohmann::json j;
  j["subcommand"] = "jl";
  j["params"] = nlohmann::json::object();
  j["mystery"] = 1;
  CHECK_THROWS_AS(lrr::config_from_json(j), std::invalid_argument);

  nlohmann::json bad_trials;
  bad_trials["subcommand"] = "jl";
  bad_trials["params"] = nlohmann::json::object();
  bad_trials["trials"] = 0;
  CHECK_THROWS_AS(lrr::config_from_json(bad_trials), std::invalid_argument);
}

}  // TEST_SUITE
