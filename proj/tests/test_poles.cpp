#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hocpoles/error.hpp"
#include "hocpoles/model.hpp"
#include "hocpoles/poles.hpp"
#include "oracles.hpp"

using namespace hocpoles;
using doctest::Approx;

namespace {

DenominatorEstimate estimate(std::vector<double> a) {
  DenominatorEstimate e;
  e.a = std::move(a);
  return e;
}

Complex horner(const std::vector<double>& c, Complex z) {
  Complex acc = 0.0;
  for (double v : c) acc = acc * z + v;
  return acc;
}

double norm1(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += std::abs(v);
  return s;
}

}  // namespace

TEST_CASE("roots of small polynomials") {
  const std::vector<double> lin{1.0, -0.95};
  const auto r1 = find_roots(lin);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == Complex(0.95, 0.0));

  const std::vector<double> g21{1.0, -1.85, 0.855};
  const auto r2 = find_roots(g21);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0].real() == Approx(0.95));
  CHECK(r2[1].real() == Approx(0.9));
  CHECK(r2[0].imag() == 0.0);
  CHECK(r2[1].imag() == 0.0);

  const std::vector<double> kc05{1.0, -1.9, 0.95};
  const auto r3 = find_roots(kc05);
  CHECK(r3[0].real() == Approx(0.95));
  CHECK(r3[0].imag() == Approx(0.21794).epsilon(1e-4));
  CHECK(r3[1] == std::conj(r3[0]));

  CHECK(find_roots(std::vector<double>{1.0}).empty());
  CHECK_THROWS_AS(find_roots(std::vector<double>{2.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(find_roots(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("roots against the quadratic formula") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double b = u(rng), c = u(rng);
    const std::vector<double> poly{1.0, b, c};
    auto expect = oracle::quadratic_roots(b, c);
    auto got = find_roots(poly);
    auto key = [](const Complex& z) { return std::make_pair(z.real(), z.imag()); };
    std::sort(expect.begin(), expect.end(), [&](auto x, auto y) { return key(x) < key(y); });
    std::sort(got.begin(), got.end(), [&](auto x, auto y) { return key(x) < key(y); });
    for (int j = 0; j < 2; ++j) CHECK(std::abs(expect[j] - got[j]) < 1e-7);
  }
}

TEST_CASE("root residuals and conjugate symmetry up to degree 10") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int degree = 1 + trial % 10;
    const auto poly = oracle::poly_from_roots(oracle::random_stable_roots(rng, degree, 0.99));
    const auto roots = find_roots(poly);
    REQUIRE(roots.size() == static_cast<std::size_t>(degree));
    for (const auto& r : roots) {
      CHECK(std::abs(horner(poly, r)) <= 1e-8 * std::max(1.0, norm1(poly)));
      if (r.imag() != 0.0) {
        bool has_conj = false;
        for (const auto& s : roots) has_conj = has_conj || s == std::conj(r);
        CHECK(has_conj);
      }
    }
  }
}

TEST_CASE("root round trip up to degree 6") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int degree = 1 + trial % 6;
    auto original = oracle::random_stable_roots(rng, degree, 0.95);
    const auto roots = find_roots(oracle::poly_from_roots(original));
    for (const auto& r : original) {
      double best = 1e9;
      for (const auto& s : roots) best = std::min(best, std::abs(r - s));
      CHECK(best < 1e-7);
    }
  }
}

TEST_CASE("continuous mapping") {
  CHECK(to_continuous(1.0, 0.5) == Complex(0.0, 0.0));
  const auto ps = to_continuous({0.95, 0.05});
  CHECK(ps.real() == Approx(-0.04992).epsilon(1e-3));
  CHECK(ps.imag() == Approx(0.05258).epsilon(1e-3));
  CHECK(to_continuous(std::exp(-0.1)).real() == Approx(-0.1));
  CHECK(to_continuous(std::exp(-0.1), 0.5).real() == Approx(-0.2));
  CHECK(to_continuous(-0.5).imag() == Approx(std::numbers::pi));
  CHECK_THROWS_AS(to_continuous(0.0), InvalidArgument);
  CHECK_THROWS_AS(to_continuous(0.5, 0.0), InvalidArgument);
}

TEST_CASE("mapping preserves stability") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> r(0.01, 2.0), th(-3.1, 3.1);
  for (int i = 0; i < 2000; ++i) {
    const Complex z = std::polar(r(rng), th(rng));
    const auto s = to_continuous(z);
    CHECK((std::abs(z) < 1.0) == (s.real() < 0.0));
    CHECK(std::abs(to_continuous(std::polar(1.0, th(rng))).real()) < 1e-12);
  }
}

TEST_CASE("damping ratios") {
  CHECK(damping_conjugate(to_continuous({0.95, 0.05})) == Approx(0.6885).epsilon(1e-3));
  CHECK(damping_conjugate(to_continuous({0.95, 0.2693})) == Approx(0.046).epsilon(0.02));
  CHECK(damping_real_pair(-0.1, -0.1) == Approx(1.0));
  CHECK(damping_real_pair(-0.05, -0.2) == Approx(1.25));
  CHECK_THROWS_AS(damping_real_pair(0.1, -0.1), NumericalError);
  CHECK_THROWS_AS(damping_real_pair(0.0, -0.1), NumericalError);
}

TEST_CASE("damping bounds") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> r(0.05, 1.5), th(0.01, 3.1);
  for (int i = 0; i < 2000; ++i) {
    const Complex z = std::polar(r(rng), th(rng));
    const double zeta = damping_conjugate(to_continuous(z));
    CHECK(zeta > -1.0);
    CHECK(zeta < 1.0);
    if (std::abs(z) < 1.0) CHECK(zeta > 0.0);
  }
  double prev = 1.0;
  for (double rad : {0.9, 0.99, 0.999, 0.9999}) {
    const double zeta = damping_conjugate(to_continuous(std::polar(rad, 0.3)));
    CHECK(zeta < prev);
    prev = zeta;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("assess closed-loop gains") {
  const auto a075 = closed_loop_to_arma({.alpha = 0.9, .delay = 2, .kc = 0.75}).den;
  const auto rep = assess(estimate({a075[1], a075[2]}), 1.0, 0.1);
  REQUIRE(rep.modes.size() == 1);
  CHECK(rep.modes[0].kind == ModeKind::ConjugatePair);
  CHECK(*rep.modes[0].zeta == Approx(0.046).epsilon(0.02));
  CHECK(rep.modes[0].oscillatory);
  CHECK(rep.any_oscillatory());
  CHECK_FALSE(rep.any_unstable());

  const auto a005 = closed_loop_to_arma({.alpha = 0.9, .delay = 2, .kc = 0.05}).den;
  CHECK_FALSE(assess(estimate({a005[1], a005[2]})).any_oscillatory());
  CHECK(assess(estimate({a005[1], a005[2]}), 1.0, 0.7).any_oscillatory());
}

TEST_CASE("assess degenerate and boundary cases") {
  SUBCASE("white-noise estimate") {
    const auto rep = assess(estimate({0.0, 0.0}));
    CHECK(rep.has_zero_pole);
    CHECK(rep.discrete.size() == 2);
    CHECK_FALSE(rep.continuous[0].has_value());
    CHECK(rep.modes.empty());
    CHECK_FALSE(rep.any_oscillatory());
  }
  SUBCASE("integrating loop") {
    const auto rep = assess(estimate({-1.9, 0.9}));
    CHECK(rep.discrete[0].real() == Approx(1.0));
    CHECK(rep.discrete[1].real() == Approx(0.9));
    CHECK(rep.unstable[0]);
    CHECK_FALSE(rep.unstable[1]);
    CHECK(rep.any_unstable());
    REQUIRE(rep.modes.size() == 1);
    CHECK(rep.modes[0].kind == ModeKind::RealPair);
  }
  SUBCASE("stable real pair and leftover pole") {
    const auto poly = oracle::poly_from_roots({0.95, 0.9, 0.5});
    const auto rep = assess(estimate({poly[1], poly[2], poly[3]}));
    REQUIRE(rep.modes.size() == 2);
    CHECK(rep.modes[0].kind == ModeKind::RealPair);
    CHECK(*rep.modes[0].zeta >= 1.0);
    CHECK(rep.modes[1].kind == ModeKind::UnpairedReal);
    CHECK_FALSE(rep.modes[1].zeta.has_value());
  }
  SUBCASE("negative real pole") {
    const auto rep = assess(estimate({0.5}));
    REQUIRE(rep.modes.size() == 1);
    CHECK(rep.modes[0].kind == ModeKind::ConjugatePair);
    CHECK(*rep.modes[0].zeta == Approx(std::log(2.0) / std::hypot(std::log(2.0), std::numbers::pi)));
  }
  SUBCASE("sampling period scales continuous poles") {
    const auto r1 = assess(estimate({-0.95}), 1.0);
    const auto r2 = assess(estimate({-0.95}), 0.1);
    CHECK(r2.continuous[0]->real() == Approx(10.0 * r1.continuous[0]->real()));
  }
}

TEST_CASE("mode names") {
  CHECK(to_string(ModeKind::ConjugatePair) == "conjugate-pair");
  CHECK(to_string(ModeKind::RealPair) == "real-pair");
  CHECK(to_string(ModeKind::UnpairedReal) == "unpaired-real");
}
