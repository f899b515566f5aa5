#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seqdisc/error.hpp"
#include "seqdisc/infotheory.hpp"

using namespace seqdisc;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected seqdisc::Error");
  return ErrorCode::NumericalDegeneracy;
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.11) - oracle::kEntropyAt011) < 1e-15);
  CHECK(code_of([] { binary_entropy(1.1); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { binary_entropy(-1e-9); }) == ErrorCode::OutOfRange);
}

TEST_CASE("guessing information") {
  const auto p = make_problem(0.4, 0.5);
  CHECK(std::abs(mi_guessing(p, 1.0, 0.16) - oracle::kGuessingBoundary04) < 1e-12);
  CHECK(mi_guessing(p, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  const auto orth = make_problem(0.0, 0.3);
  CHECK(std::abs(mi_guessing(orth, 0.0, 0.0) - oracle::h2(0.3)) < 1e-15);
  CHECK(code_of([&] { mi_guessing(p, 0.1, 0.1); }) == ErrorCode::ConstraintViolation);
}

TEST_CASE("single observer USD information") {
  const auto p = make_problem(0.25, 1.0 / 3);
  const auto r = mi_usd_ab(p, 0.25);
  CHECK(std::abs(r.mi - oracle::kUsdAbThird) < 1e-12);
  CHECK(std::abs(r.mi - r.p_success * oracle::h2(r.confidence1)) < 1e-14);

  const auto eq = optimize_mi_usd_ab(make_problem(0.3, 0.5));
  CHECK(std::abs(eq.optimizer_arg - 0.3) < 1e-12);
  CHECK(std::abs(eq.mi - 0.7) < 1e-12);

  // Bounded scalar search at 1e-12 tolerance, evaluated independently.
  const auto third = optimize_mi_usd_ab(make_problem(0.5, 1.0 / 3));
  CHECK(std::abs(third.optimizer_arg - oracle::kUsdAbArgmaxThird05) < 1e-7);
  double peak_s = 0, peak = 0;
  for (int i = 0; i < 401; ++i) {
    const double s = 0.001 + 0.998 * i / 400.0;
    const double offset = std::abs(optimize_mi_usd_ab(make_problem(s, 1.0 / 3)).optimizer_arg - s);
    if (offset > peak) peak = offset, peak_s = s;
  }
  CHECK(peak_s > 0.4);
  CHECK(peak_s < 0.6);
  CHECK(optimize_mi_usd_ab(make_problem(0.3, 0.5)).mi == doctest::Approx(0.7));
}

TEST_CASE("observer information is symmetric and vanishes when always inconclusive") {
  const auto p = make_problem(0.25, 0.5);
  CHECK(mi_usd_observer(p, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK(mi_usd_observer(p, 0.5, 0.5) == mi_usd_observer(p, 0.5, 0.5));
  CHECK(mi_usd_observer(p, 1.0, 1.0) == 0.0);
}

TEST_CASE("B:C information") {
  for (double s : {0.05, 0.1, 0.3, 0.6}) {
    const auto p = make_problem(s, 0.5);
    const auto best = optimize_mi_usd_bc(p);
    CHECK(std::abs(best.optimizer_arg - std::sqrt(s)) < 1e-9);
    CHECK(std::abs(best.mi - std::pow(1 - std::sqrt(s), 2)) < 1e-9);
    CHECK(mi_usd_bc_symmetric(p, 1.0).mi == 0.0);
    const auto boundary = make_strategy(p, std::sqrt(s), 1.0, 1.0);
    CHECK(mi_usd_bc(p, boundary).mi == 0.0);
  }
}

TEST_CASE("unequal-prior optima are stationary, concave and close to the closed-q1 guess") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> us(0.02, 0.95);
  std::uniform_real_distribution<double> ue(0.1, 0.9);
  for (int i = 0; i < 40; ++i) {
    const auto p = make_problem(us(gen), ue(gen));
    const double s = p.s();

    const auto ab = optimize_mi_usd_ab(p);
    CHECK(std::abs(mi_usd_ab_derivative(p, ab.optimizer_arg)) < 1e-8);
    const auto scan_ab = oracle::scan_max([&](double q) { return mi_usd_ab(p, q).mi; }, s * s, 1.0);
    CHECK(ab.mi >= scan_ab.second - 1e-12);

    const auto bc = optimize_mi_usd_bc(p);
    if (bc.optimizer_arg > s + 1e-9 && bc.optimizer_arg < 1 - 1e-9) {
      CHECK(std::abs(mi_usd_bc_symmetric_derivative(p, bc.optimizer_arg)) < 1e-8);
    }
    const auto scan_bc = oracle::scan_max([&](double q) { return mi_usd_bc_symmetric(p, q).mi; }, s, 1.0);
    CHECK(bc.mi >= scan_bc.second - 1e-12);
    CHECK(bc.mi >= mi_usd_bc_symmetric(p, std::sqrt(s)).mi - 1e-12);

    const auto ff = optimize_mi_ff_ab(p);
    if (ff.optimizer_arg > 1e-9 && ff.optimizer_arg < 1 - 1e-9) {
      CHECK(std::abs(mi_ff_ab_derivative(p, ff.optimizer_arg)) < 1e-8);
    }
    const auto scan_ff = oracle::scan_max([&](double c) { return mi_ff_ab(p, FlipFlopStrategy(c)).mi; }, 0.0, 1.0);
    CHECK(ff.mi >= scan_ff.second - 1e-12);

    // Concavity of the A:B and flip-flop channels on their search intervals.
    for (int k = 1; k < 100; ++k) {
      const double h = 1e-3;
      const double q = s * s + (1 - s * s) * k / 100.0;
      if (q - h > s * s && q + h < 1) {
        const double d2 = mi_usd_ab(p, q + h).mi - 2 * mi_usd_ab(p, q).mi + mi_usd_ab(p, q - h).mi;
        CHECK(d2 <= 1e-12);
      }
      const double c = k / 100.0;
      const double e2 = mi_ff_ab(p, FlipFlopStrategy(c + h)).mi - 2 * mi_ff_ab(p, FlipFlopStrategy(c)).mi +
                        mi_ff_ab(p, FlipFlopStrategy(c - h)).mi;
      CHECK(e2 <= 1e-12);
    }
  }
}

TEST_CASE("closed-q1 approximations stay close on the plotted prior families") {
  struct Envelope {
    double eta1, ab, bc;
  };
  // Largest gap over the 401-point figure grid from an independent bounded
  // search; the B:C gap at eta1 = 1/4 slightly exceeds 5e-3.
  const Envelope families[] = {{1.0 / 3, oracle::kUsdAbGapThird, oracle::kUsdBcGapThird},
                               {0.25, oracle::kUsdAbGapQuarter, oracle::kUsdBcGapQuarter}};
  for (const auto& f : families) {
    double ab_gap = 0, bc_gap = 0;
    for (int i = 0; i < 401; ++i) {
      const double s = 0.001 + 0.998 * i / 400.0;
      const auto p = make_problem(s, f.eta1);
      ab_gap = std::max(ab_gap, optimize_mi_usd_ab(p).mi - mi_usd_ab(p, s).mi);
      bc_gap = std::max(bc_gap, optimize_mi_usd_bc(p).mi - mi_usd_bc_symmetric(p, std::sqrt(s)).mi);
      CHECK(std::abs(mi_usd_bc_symmetric(p, std::sqrt(s)).mi -
                     std::pow(1 - std::sqrt(s), 2) * oracle::h2(f.eta1)) < 1e-12);
    }
    CHECK(std::abs(ab_gap - f.ab) < 1e-8);
    CHECK(std::abs(bc_gap - f.bc) < 1e-8);
    CHECK(ab_gap < 5e-3);
  }
  CHECK(oracle::kUsdBcGapThird < 5e-3);
}

TEST_CASE("flip-flop information") {
  for (double e : {0.2, 0.5, 0.7}) {
    for (double s : {0.0, 0.3, 0.8}) {
      const auto p = make_problem(s, e);
      CHECK(std::abs(mi_ff_ab(p, FlipFlopStrategy(e)).mi - 2 * e * (1 - e) * (1 - s * s)) < 1e-12);
    }
  }
  // Unimodal: the finite-difference gradient changes sign once on a 1000-point grid.
  for (double e : {0.25, 0.5, 0.8}) {
    const auto p = make_problem(0.35, e);
    int changes = 0;
    double prev = 0;
    for (int i = 0; i < 1000; ++i) {
      const double c0 = i / 1000.0, c1 = (i + 1) / 1000.0;
      const double g = mi_ff_ab(p, FlipFlopStrategy(c1)).mi - mi_ff_ab(p, FlipFlopStrategy(c0)).mi;
      if (i > 0 && (g < 0) != (prev < 0)) ++changes;
      prev = g;
    }
    CHECK(changes == 1);
  }
  for (double s : {0.0, 0.2, 0.5}) {
    const auto r = optimize_mi_ff_ab(make_problem(s, 0.5));
    CHECK(std::abs(r.optimizer_arg - 0.5) < 1e-9);
    CHECK(std::abs(r.mi - 0.5 * (1 - s * s)) < 1e-9);
  }
  CHECK(optimize_mi_ff_ab(make_problem(0.0, 0.25)).mi < 1.0);
  CHECK(mi_ff_ab(make_problem(0.3, 0.4), FlipFlopStrategy(0.0)).mi == 0.0);
  CHECK(mi_ff_ab(make_problem(0.3, 0.4), FlipFlopStrategy(1.0)).mi == 0.0);
}

TEST_CASE("balanced flip-flop B:C information") {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int i = 0; i < 100; ++i) {
    const auto p = make_problem(u(gen), u(gen));
    const double expected = p.eta1() * p.eta2() * std::pow(1 - p.s(), 2) * oracle::h2(p.eta2());
    CHECK(std::abs(mi_ff_bc(p, FlipFlopStrategy(p.eta1()), std::sqrt(p.s())) - expected) < 1e-12);
  }
  const auto eq = make_problem(0.25, 0.5);
  CHECK(std::abs(mi_ff_bc(eq, FlipFlopStrategy(0.5), 0.5) - 0.140625) < 1e-12);
  CHECK(mi_ff_bc(eq, FlipFlopStrategy(0.0), 0.5) == 0.0);
  CHECK(mi_ff_bc(eq, FlipFlopStrategy(1.0), 0.5) == 0.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = make_problem(u(gen), u(gen));
    CHECK(mi_ff_bc(p, FlipFlopStrategy(u(gen)), std::sqrt(p.s())) <= optimize_mi_usd_bc(p).mi + 1e-12);
  }
  CHECK(code_of([] { mi_ff_bc(make_problem(0.5, 0.5), FlipFlopStrategy(0.5), 0.5); }) ==
        ErrorCode::ConstraintViolation);
}

TEST_CASE("Helstrom information") {
  CHECK(helstrom_mi(0.0) == 1.0);
  CHECK(helstrom_mi(1.0) == 0.0);
  CHECK(std::abs(helstrom_mi(0.4) - oracle::kHelstrom04) < 1e-12);
  CHECK(std::abs(helstrom_mi(make_problem(0.4, 0.5)) - oracle::kHelstrom04) < 1e-12);
  CHECK(code_of([] { helstrom_mi(make_problem(0.4, 0.3)); }) == ErrorCode::UnsupportedPriors);
}

TEST_CASE("strategy comparison ordering on a dense overlap grid") {
  for (int i = 0; i < 401; ++i) {
    const double s = 0.001 + 0.998 * i / 400.0;
    const auto p = make_problem(s, 0.5);
    const double hel = helstrom_mi(p);
    const double guess = mi_guessing(p, 1.0, s * s);
    const double usd = optimize_mi_usd_ab(p).mi;
    const double ff = optimize_mi_ff_ab(p).mi;
    CHECK(hel >= guess - 1e-12);
    CHECK(guess >= usd - 1e-12);
    CHECK(usd >= ff - 1e-12);
  }
}

TEST_CASE("information values stay in [0, 1]") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 500; ++i) {
    const auto p = make_problem(u(gen), u(gen));
    const double q1 = p.s() * p.s() + (1 - p.s() * p.s()) * u(gen);
    for (double v : {mi_usd_ab(p, q1).mi, mi_guessing(p, q1, p.s() * p.s() / q1),
                     mi_ff_ab(p, FlipFlopStrategy(u(gen))).mi,
                     mi_usd_bc_symmetric(p, p.s() + (1 - p.s()) * u(gen)).mi}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
