#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helmdg/study.hpp"

using namespace helmdg;

namespace {

StudyRecord row(std::size_t n, std::optional<double> e1) {
  StudyRecord r;
  r.mesh = "regular";
  r.k = 10;
  r.n = n;
  r.e1 = e1;
  return r;
}

StudyConfig small_config() {
  StudyConfig c;
  c.k = {5.0};
  c.mu = {0.0, 1.0};
  c.n = {4, 8, 16};
  return c;
}

}  // namespace

TEST_SUITE("study") {
  TEST_CASE("rates") {
    std::vector<StudyRecord> rs{row(8, 0.4), row(16, 0.1), row(32, 0.0), row(64, 0.01)};
    compute_rates(rs);
    CHECK_FALSE(rs[0].rate_e1.has_value());
    CHECK(*rs[1].rate_e1 == doctest::Approx(2.0));
    CHECK_FALSE(rs[2].rate_e1.has_value());
    CHECK_FALSE(rs[3].rate_e1.has_value());

    std::vector<StudyRecord> published{row(128, 1.8968e-3), row(256, 5.1132e-4)};
    compute_rates(published);
    CHECK(*published[1].rate_e1 == doctest::Approx(1.891).epsilon(1e-3));

    std::vector<StudyRecord> gap{row(8, 0.4), row(24, 0.1)};
    CHECK_THROWS_AS(compute_rates(gap), std::invalid_argument);

    // a new family restarts the rates
    std::vector<StudyRecord> fam{row(8, 0.4), row(16, 0.1)};
    fam[1].mu = 1.0;
    compute_rates(fam);
    CHECK_FALSE(fam[1].rate_e1.has_value());
  }

  TEST_CASE("synthetic second order errors give rate 2") {
    std::vector<StudyRecord> rs;
    for (std::size_t n : {4u, 8u, 16u, 32u}) {
      const double h = 1.0 / double(n);
      StudyRecord r = row(n, 0.7 * h * h);
      r.e2 = 3.0 * h * h;
      r.uhui = 0.01 * h * h;
      rs.push_back(r);
    }
    compute_rates(rs);
    for (std::size_t i = 1; i < rs.size(); ++i) {
      CHECK(std::abs(*rs[i].rate_e1 - 2.0) <= 1e-3);
      CHECK(std::abs(*rs[i].rate_e2 - 2.0) <= 1e-3);
      CHECK(std::abs(*rs[i].rate_uhui - 2.0) <= 1e-3);
      CHECK_FALSE(rs[i].rate_e3.has_value());
    }
  }

  TEST_CASE("config validation") {
    StudyConfig c;
    CHECK_NOTHROW(c.validate());
    c.n.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StudyConfig{};
    c.n = {8, 4};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.n = {4, 12};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.n = {256, 512};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.allow_large = true;
    CHECK_NOTHROW(c.validate());
    c = StudyConfig{};
    c.k = {-1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StudyConfig{};
    c.solve.tol = 1e-3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StudyConfig{};
    c.out = "";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(estimator_kind_from_string("ppr") == EstimatorKind::ppr);
    CHECK_THROWS_AS(estimator_kind_from_string("zz"), std::invalid_argument);
  }

  TEST_CASE("csv format") {
    CHECK(format_value(std::nullopt).empty());
    CHECK(format_value(0.0123456789) == "1.23457e-02");
    std::ostringstream s;
    write_csv(s, {});
    CHECK(s.str() == std::string(kCsvHeader) + "\n");
    CHECK(std::string(kCsvHeader) ==
          "mesh,k,mu,rho0,lambda_policy,estimator,N,h,ndof,E1,rate_E1,E2,rate_E2,E3,rate_E3,"
          "eta,rate_eta,err_uhuI_1h,rate_uhuI,knorm_L2,J0_jump,status");
  }

  TEST_CASE("sweep, csv round trip and determinism") {
    const StudyConfig c = small_config();
    const auto a = run_study(c);
    const auto b = run_study(c);
    REQUIRE(a.size() == 6);
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    CHECK(sa.str() == sb.str());
    for (const auto& r : a) {
      CHECK(r.ok());
      CHECK(r.e1.has_value());
      CHECK(r.e2.has_value());
      CHECK(r.uhui.has_value());
      CHECK(r.e3.has_value() == (r.n != 4));
      CHECK(r.eta.has_value() == (r.n != 4));
      CHECK(*r.ndof == 3 * 2 * r.n * r.n);
    }
    CHECK(a[1].rate_e1.has_value());
    CHECK_FALSE(a[3].rate_e1.has_value());

    std::istringstream in(sa.str());
    const auto back = read_csv(in);
    REQUIRE(back.size() == a.size());
    std::ostringstream again;
    write_csv(again, back);
    CHECK(again.str() == sa.str());
  }

  TEST_CASE("failed cells keep their row") {
    StudyConfig c;
    c.k = {5.0};
    c.n = {1, 2, 4};
    const auto rs = run_study(c);
    REQUIRE(rs.size() == 3);
    CHECK_FALSE(rs[0].ok());
    CHECK(rs[0].status.rfind("failed: ", 0) == 0);
    CHECK(rs[0].status.find(',') == std::string::npos);
    CHECK_FALSE(rs[0].e1.has_value());
    std::ostringstream s;
    write_csv(s, rs);
    std::istringstream in(s.str());
    CHECK(read_csv(in).size() == 3);
  }

  TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "helmdg_study_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.csv").string();
    write_csv_atomic(path, {row(8, 0.5)});
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::ifstream in(path);
    const auto rs = read_csv(in);
    REQUIRE(rs.size() == 1);
    CHECK(*rs[0].e1 == 0.5);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("read_csv rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), std::invalid_argument);
    std::istringstream missing("mesh,k\nregular,1\n");
    CHECK_THROWS_AS(read_csv(missing), std::invalid_argument);
    std::istringstream short_row(std::string(kCsvHeader) + "\nregular,1\n");
    CHECK_THROWS_AS(read_csv(short_row), std::invalid_argument);
  }
}
