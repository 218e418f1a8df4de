#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bsprop/metrics.hpp"
#include "test_support.hpp"

using namespace bsprop;
using doctest::Approx;

namespace {

MisalignmentCurve curve_of(std::vector<double> db, std::size_t stride = 1) {
  return MisalignmentCurve{std::move(db), stride, 1};
}

}  // namespace

TEST_CASE("normalized misalignment") {
  CHECK(normalized_misalignment_db(std::vector<double>{0.3, -0.4}, std::vector<double>{0, 0}) == 0.0);
  CHECK(normalized_misalignment_db(std::vector<double>{1, 0}, std::vector<double>{0.9, 0}) ==
        Approx(-20.0).epsilon(1e-12));
  CHECK(normalized_misalignment_db(std::vector<double>{1, 2}, std::vector<double>{1, 2}) ==
        kMisalignmentFloorDb);
  CHECK_THROWS_AS(normalized_misalignment_db(std::vector<double>{0, 0}, std::vector<double>{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(normalized_misalignment_db(std::vector<double>{1}, std::vector<double>{1, 0}),
                  std::invalid_argument);
}

TEST_CASE("property: misalignment is invariant to a common scale") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = testing_support::gaussian(rng, 20);
    const auto e = testing_support::gaussian(rng, 20);
    const double c = scale(rng);
    std::vector<double> ch(h), ce(e);
    for (auto& v : ch) v *= c;
    for (auto& v : ce) v *= c;
    CHECK(normalized_misalignment_db(h, e) == Approx(normalized_misalignment_db(ch, ce)).epsilon(1e-12));
  }
}

TEST_CASE("run averaging") {
  const auto a = curve_of({0.0, -10.0, -25.5});
  SUBCASE("single curve unchanged") {
    CHECK(average_runs({a}).values_db == a.values_db);
  }
  SUBCASE("identical curves") {
    const auto avg = average_runs({a, a, a, a, a});
    CHECK(avg.runs_averaged == 5);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(avg.values_db[k] - a.values_db[k]) <= 1e-12);
  }
  SUBCASE("linear-domain mean") {
    const auto avg = average_runs({curve_of({0.0}), curve_of({kMisalignmentFloorDb})});
    CHECK(avg.values_db[0] == Approx(10.0 * std::log10(0.5)).epsilon(1e-12));
    CHECK(avg.values_db[0] == Approx(-3.0103).epsilon(1e-5));
  }
  SUBCASE("mismatch") {
    CHECK_THROWS_AS(average_runs({a, curve_of({0.0})}), std::invalid_argument);
    CHECK_THROWS_AS(average_runs({a, curve_of({0.0, -10.0, -25.5}, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(average_runs({}), std::invalid_argument);
  }
}

TEST_CASE("property: averaging copies of a curve returns it") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> db(-300.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    MisalignmentCurve c{std::vector<double>(100), 10, 1};
    for (auto& v : c.values_db) v = db(rng);
    const std::vector<MisalignmentCurve> copies(1 + trial % 7, c);
    const auto avg = average_runs(copies);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(avg.values_db[k] - c.values_db[k]) <= 1e-12);
  }
}

TEST_CASE("time to threshold") {
  SUBCASE("monotone crossing") {
    // 0 dB falling 0.04 dB per record: crosses -20 dB at record 500.
    std::vector<double> v(2000);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = -0.04 * double(k);
    CHECK(time_to_threshold(curve_of(v, 10), -20.0) == 5000u);
    CHECK(time_to_threshold(curve_of(v, 1), -20.0) == 500u);
  }
  SUBCASE("never reached") {
    CHECK_FALSE(time_to_threshold(curve_of(std::vector<double>(100, -5.0)), -20.0).has_value());
  }
  SUBCASE("single-record dip is debounced") {
    std::vector<double> v(5000, -5.0);
    v[100] = -21.0;   // dip, then rebound 10 dB above the threshold band
    v[101] = -11.0;
    for (std::size_t k = 3000; k < v.size(); ++k) v[k] = -25.0;
    CHECK(time_to_threshold(curve_of(v), -20.0) == 3000u);
  }
  SUBCASE("wiggle inside the +3 dB band is tolerated") {
    std::vector<double> v(3000, -5.0);
    for (std::size_t k = 200; k < v.size(); ++k) v[k] = (k % 2) ? -20.5 : -17.5;
    CHECK(time_to_threshold(curve_of(v), -20.0) == 201u);
  }
}

TEST_CASE("property: a looser threshold is never reached later") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> wiggle(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(3000);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = -0.01 * double(k) + wiggle(rng);
    const auto c = curve_of(v, 1 + trial % 4);
    for (double thr = -28.0; thr < 0.0; thr += 2.0) {
      const auto tight = time_to_threshold(c, thr);
      const auto loose = time_to_threshold(c, thr + 1.5);
      if (tight) {
        REQUIRE(loose.has_value());
        CHECK(*loose <= *tight);
      }
    }
  }
}

TEST_CASE("slicing by sample range") {
  MisalignmentCurve c{{0, 1, 2, 3, 4, 5, 6, 7}, 10, 3};
  const auto s = slice_samples(c, 40, 80);
  CHECK(s.values_db == std::vector<double>{4, 5, 6, 7});
  CHECK(s.record_stride == 10);
  CHECK(s.runs_averaged == 3);
  CHECK(slice_samples(c, 0, 35).values_db == std::vector<double>{0, 1, 2, 3});
  CHECK_THROWS_AS(slice_samples(c, 15, 40), std::invalid_argument);
}
