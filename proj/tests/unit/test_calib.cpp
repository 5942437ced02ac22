#include <cmath>
#include <filesystem>
#include <fstream>

#include "ascnet/calib/importance.hpp"
#include "ascnet/calib/metrics.hpp"
#include "ascnet/calib/thresholds.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/common/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ascnet;
using namespace ascnet::calib;

namespace {

using V = std::vector<double>;

std::vector<double> random_gold(std::size_t n, const V& values, Rng& rng) {
  V g;
  do {
    g.clear();
    for (std::size_t i = 0; i < n; ++i) g.push_back(values[rng.below(values.size())]);
  } while (std::all_of(g.begin(), g.end(), [&](double v) { return v == g[0]; }));
  return g;
}

}  // namespace

TEST_CASE("pearson") {
  CHECK(pearson(V{1, 2, 3, 4}, V{2, 4, 6, 8}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(V{1, 2, 3, 4}, V{-1, -2, -3, -4}) == doctest::Approx(-1.0).epsilon(1e-15));
  // cov = 4/4, var = 5/4 each -> 0.8
  CHECK(pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK_THROWS_AS(pearson(V{1, 1, 1}, V{1, 2, 3}), NumericalError);
  CHECK_THROWS_AS(pearson(V{1, 2}, V{1, 2, 3}), DataError);
  CHECK_THROWS_AS(pearson(V{1}, V{1}), DataError);
}

TEST_CASE("pearson is invariant under positive affine maps (property)") {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    V x, y, x2;
    const double a = rng.uniform(0.5, 4.0), b = rng.uniform(-3, 3);
    for (int i = 0; i < 15; ++i) {
      x.push_back(rng.uniform(-1, 1));
      y.push_back(rng.uniform(-1, 1));
      x2.push_back(a * x.back() + b);
    }
    CHECK(std::abs(pearson(x, y) - pearson(x2, y)) < 1e-12);
  }
}

TEST_CASE("jaccard") {
  Matrix y(2, 3), p(2, 3);
  y(0, 0) = y(0, 2) = 1;
  p(0, 0) = p(0, 1) = 1;
  // row 0: {a,c} vs {a,b} -> 1/3; row 1: both empty -> 1
  CHECK(jaccard(y, p) == doctest::Approx((1.0 / 3 + 1.0) / 2));
  CHECK(jaccard(y, y) == 1.0);
  Matrix a(1, 3), b(1, 3);
  a(0, 0) = 1;
  b(0, 1) = 1;
  CHECK(jaccard(a, b) == 0.0);
  CHECK_THROWS_AS(jaccard(a, Matrix(1, 2)), ShapeError);
  b(0, 2) = 0.3;
  CHECK_THROWS_AS(jaccard(a, b), DataError);
}

TEST_CASE("reporting arithmetic") {
  const V ei = {0.748, 0.670, 0.748, 0.721};
  CHECK(macro_average(ei) == doctest::Approx(0.72175).epsilon(1e-15));
  CHECK(truncate3(macro_average(ei)) == 0.721);
  CHECK(truncate3(0.7) == 0.7);
  CHECK(truncate3(0.8439) == 0.843);
  CHECK_THROWS_AS(macro_average(V{}), DataError);
}

TEST_CASE("apply thresholds") {
  CalibrationThresholds t{{0.2, 0.4, 0.5, 0.6, 0.7, 0.9}, ordinal_values(-3, 3)};
  CHECK(apply_threshold(0.0, t) == -3);
  CHECK(apply_threshold(0.95, t) == 3);
  CHECK(apply_threshold(0.5, t) == 0);   // equal to a cut: upper class
  CHECK(apply_threshold(0.49, t) == -1);
  Rng rng(2);
  V s;
  for (int i = 0; i < 500; ++i) s.push_back(rng.uniform());
  std::sort(s.begin(), s.end());
  auto c = apply_thresholds(s, t);
  CHECK(std::is_sorted(c.begin(), c.end()));
  CalibrationThresholds bad{{0.5, 0.4}, ordinal_values(0, 2)};
  CHECK_THROWS_AS(apply_thresholds(s, bad), DataError);
  CHECK(CalibrationThresholds::from_json(t.to_json()).cuts == t.cuts);
}

TEST_CASE("grid search basics") {
  auto r = grid_search_thresholds(V{0.1, 0.2, 0.8, 0.9}, V{0, 0, 1, 1}, ordinal_values(0, 1));
  CHECK(r.pearson == doctest::Approx(1.0));
  REQUIRE(r.thresholds.cuts.size() == 1);
  CHECK(r.thresholds.cuts[0] == doctest::Approx(0.5));  // the only cut inside (0.2, 0.8)

  // Sorted scores with k distinct gold values in the same order.
  V s, g;
  for (int i = 0; i < 14; ++i) {
    s.push_back(0.03 + 0.07 * i);
    g.push_back(-3 + i / 2);
  }
  CHECK(grid_search_thresholds(s, g, ordinal_values(-3, 3)).pearson == doctest::Approx(1.0));

  CHECK_THROWS_AS(grid_search_thresholds(V{0.1, 0.2, 0.3}, V{1, 1, 1}, ordinal_values(0, 1)), NumericalError);
  CHECK_THROWS_AS(grid_search_thresholds(V{0.1, 0.2}, V{0, 5}, ordinal_values(0, 1)), DataError);
  CHECK_THROWS_AS(grid_search_thresholds(V{0.1, 1.2}, V{0, 1}, ordinal_values(0, 1)), DataError);
}

TEST_CASE("grid search matches brute force") {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const V values = t % 3 == 0 ? ordinal_values(0, 1) : t % 3 == 1 ? ordinal_values(0, 3) : ordinal_values(-3, 3);
    const std::size_t n = values.size() + 1 + rng.below(20 - values.size());
    V s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(std::round(rng.uniform() * 40) / 40);  // some ties
    auto g = random_gold(n, values, rng);
    auto oracle = fixtures::brute_force_cuts(s, g, values);
    std::vector<double> distinct = s;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < values.size()) {
      CHECK_THROWS_AS(grid_search_thresholds(s, g, values), DataError);
      continue;
    }
    auto r = grid_search_thresholds(s, g, values);
    CHECK(r.exhaustive);
    CHECK(r.pearson == doctest::Approx(oracle.pearson).epsilon(1e-12));
    CHECK(r.thresholds.cuts == oracle.cuts);
  }
}

TEST_CASE("beam search dominates equal-count binning") {
  Rng rng(4);
  for (int t = 0; t < 3; ++t) {
    V s, g;
    for (int i = 0; i < 400; ++i) {
      const double latent = rng.uniform();
      s.push_back(std::clamp(latent + rng.normal() * 0.15, 0.0, 1.0));
      g.push_back(std::floor(latent * 6.999) - 3);
    }
    GridSearchOptions o;
    o.beam_width = 200;
    auto r = grid_search_thresholds(s, g, ordinal_values(-3, 3), o);
    CHECK_FALSE(r.exhaustive);
    auto eq = equal_frequency_thresholds(s, ordinal_values(-3, 3));
    CHECK(r.pearson >= pearson(apply_thresholds(s, eq), g) - 1e-12);
  }
}

TEST_CASE("pratt importance") {
  Rng rng(5);
  SUBCASE("single feature") {
    Matrix x(50, 1);
    V y;
    for (std::size_t i = 0; i < 50; ++i) {
      x(i, 0) = rng.normal();
      y.push_back(2 * x(i, 0) + rng.normal());
    }
    auto rep = pratt_importance(x, y, {"f"}, {"g"});
    CHECK(rep.d[0] == 1.0);
    CHECK(rep.beta[0] * rep.rho[0] == doctest::Approx(rep.r2).epsilon(1e-12));
  }
  SUBCASE("orthogonal features") {
    // Columns with zero mean and zero cross product.
    Matrix x(4, 2);
    const double a[4] = {1, -1, 1, -1}, b[4] = {1, 1, -1, -1};
    V y = {3, 0.5, 1, -2};
    for (std::size_t i = 0; i < 4; ++i) x(i, 0) = a[i], x(i, 1) = b[i];
    auto rep = pratt_importance(x, y);
    const double r0 = pearson(x.column(0), y), r1 = pearson(x.column(1), y);
    CHECK(rep.d[0] == doctest::Approx(r0 * r0 / rep.r2).epsilon(1e-12));
    CHECK(rep.d[1] == doctest::Approx(r1 * r1 / rep.r2).epsilon(1e-12));
    CHECK(rep.d_sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("decomposition identity and group shares") {
    for (int t = 0; t < 10; ++t) {
      const std::size_t p = 2 + rng.below(9);
      Matrix x(200, p);
      V y(200, 0.0);
      for (std::size_t i = 0; i < 200; ++i) {
        for (std::size_t j = 0; j < p; ++j) x(i, j) = rng.normal() + (j ? 0.3 * x(i, 0) : 0.0);
        for (std::size_t j = 0; j < p; ++j) y[i] += (j % 3 == 0 ? -0.4 : 0.7) * x(i, j);
        y[i] += rng.normal();
      }
      std::vector<std::string> groups;
      for (std::size_t j = 0; j < p; ++j) groups.push_back(j % 2 ? "odd" : "even");
      auto rep = pratt_importance(x, y, {}, groups);
      CHECK(std::abs(rep.d_sum() - 1.0) < 1e-6);
      double pct = 0;
      for (const auto& g : rep.shares) pct += g.percent;
      CHECK(pct == doctest::Approx(100.0));
      CHECK(rep.shares.size() == 2);
      CHECK(rep.shares[0].percent >= rep.shares[1].percent);
    }
  }
  SUBCASE("rank deficiency names the columns") {
    Matrix x(20, 3);
    V y;
    for (std::size_t i = 0; i < 20; ++i) {
      x(i, 0) = rng.normal();
      x(i, 1) = rng.normal();
      x(i, 2) = x(i, 0) - 2 * x(i, 1);
      y.push_back(rng.normal());
    }
    try {
      pratt_importance(x, y, {"a", "b", "c"});
      FAIL("rank-deficient matrix accepted");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("dependent") != std::string::npos);
    }
    CHECK_THROWS_AS(pratt_importance(Matrix(3, 3), V(3, 0.0)), DataError);
  }
  SUBCASE("report files") {
    Matrix x(30, 2);
    V y;
    for (std::size_t i = 0; i < 30; ++i) {
      x(i, 0) = rng.normal();
      x(i, 1) = rng.normal();
      y.push_back(x(i, 0) + rng.normal());
    }
    auto rep = pratt_importance(x, y, {"ASC_0", "blob"}, {"ASC", "blob"});
    auto dir = std::filesystem::temp_directory_path() / "ascnet_test_calib";
    std::filesystem::create_directories(dir);
    rep.write_tsv(dir / "imp.tsv");
    rep.write_groups_tsv(dir / "groups.tsv");
    std::ifstream in(dir / "groups.tsv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "name\tdim\tpercent");
  }
}
