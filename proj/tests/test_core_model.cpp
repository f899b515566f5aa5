#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seqdisc/core_model.hpp"
#include "seqdisc/error.hpp"

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

std::complex<double> inner(const Qubit& a, const Qubit& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

}  // namespace

TEST_CASE("make_problem derives eta2 and validates ranges") {
  const auto p = make_problem(0.1, 0.5);
  CHECK(p.s() == 0.1);
  CHECK(p.eta1() == 0.5);
  CHECK(p.eta2() == 0.5);
  CHECK(make_problem(0.25, 1.0 / 3).eta2() == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(code_of([] { make_problem(1.0, 0.5); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { make_problem(-0.1, 0.5); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { make_problem(0.2, 0.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { make_problem(0.2, 1.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { make_problem(std::nan(""), 0.5); }) == ErrorCode::OutOfRange);
  CHECK_NOTHROW(make_problem(0.0, 0.5));
}

TEST_CASE("swapped problem exchanges priors") {
  const auto p = make_problem(0.3, 0.7).swapped();
  CHECK(p.eta1() == doctest::Approx(0.3));
  CHECK(p.s() == 0.3);
}

TEST_CASE("embed_states edge overlaps") {
  const auto orth = embed_states(0.0);
  const double r = 1 / std::sqrt(2.0);
  CHECK(orth.psi1[0].real() == doctest::Approx(r));
  CHECK(orth.psi1[1].real() == doctest::Approx(r));
  CHECK(orth.psi2[0].real() == doctest::Approx(r));
  CHECK(orth.psi2[1].real() == doctest::Approx(-r));
  CHECK(std::abs(inner(orth.psi1, orth.psi2)) < 1e-15);

  const auto same = embed_states(1.0);
  CHECK(same.psi1[0].real() == 1.0);
  CHECK(std::abs(same.psi1[1]) == 0.0);
  CHECK(same.psi2[0].real() == 1.0);
  CHECK(std::abs(same.psi2[1]) == 0.0);

  CHECK(std::abs(inner(embed_states(0.5).psi1, embed_states(0.5).psi2) - 0.5) < 1e-12);
}

TEST_CASE("embed_states reproduces the overlap on random draws") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(gen);
    const auto pair = embed_states(s);
    CHECK(std::abs(inner(pair.psi1, pair.psi2) - s) < 1e-12);
    CHECK(std::abs(inner(pair.psi1, pair.psi1) - 1.0) < 1e-12);
    CHECK(std::abs(inner(pair.psi2, pair.psi2) - 1.0) < 1e-12);
  }
  CHECK(code_of([] { embed_states(1.5); }) == ErrorCode::OutOfRange);
}

TEST_CASE("make_strategy closes the constraints") {
  const auto p = make_problem(0.25, 0.5);
  const auto sym = make_strategy(p, 0.5, 0.5, 0.5);
  CHECK(sym.q2b() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sym.q2c() == doctest::Approx(0.5).epsilon(1e-15));

  const auto edge = make_strategy(p, 0.5, 1.0, 1.0);
  CHECK(edge.q2b() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(edge.q2c() == doctest::Approx(0.25).epsilon(1e-15));

  CHECK(code_of([&] { make_strategy(p, 0.4, 0.3, 0.5); }) == ErrorCode::ConstraintViolation);
  CHECK(code_of([&] { make_strategy(p, 0.0, 1.0, 1.0); }) == ErrorCode::ConstraintViolation);
  CHECK(code_of([&] { make_strategy(p, 0.5, 1.2, 1.0); }) == ErrorCode::ConstraintViolation);
}

TEST_CASE("product identity q1b q2b q1c q2c = s^2 holds for random strategies") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.01, 0.95);
  for (int i = 0; i < 500; ++i) {
    const auto p = make_problem(u(gen), u(gen));
    const auto f = oracle::random_strategy(p.s(), gen);
    const auto st = make_strategy(p, f.t, f.q1b, f.q1c);
    CHECK(std::abs(st.q1b() * st.q2b() * st.q1c() * st.q2c() - p.s() * p.s()) < 1e-12);
    CHECK(std::abs(st.q1b() * st.q2b() - p.s() * p.s() / (st.t() * st.t())) < 1e-12);
    CHECK(std::abs(st.q1c() * st.q2c() - st.t() * st.t()) < 1e-12);
    CHECK(satisfies_constraints(p, st, kConstraintTol));
  }
}

TEST_CASE("strategy swap mirrors the problem swap") {
  const auto p = make_problem(0.3, 0.35);
  const auto st = make_strategy(p, 0.6, 0.5, 0.7);
  const auto sw = st.swapped();
  CHECK(sw.q1b() == st.q2b());
  CHECK(sw.q2b() == st.q1b());
  CHECK(sw.q1c() == st.q2c());
  CHECK(sw.q2c() == st.q1c());
  CHECK(satisfies_constraints(p.swapped(), sw, kConstraintTol));
}

TEST_CASE("enum strings are stable") {
  CHECK(to_string(Regime::Interior) == "INTERIOR");
  CHECK(to_string(Regime::BoundaryState1) == "BOUNDARY_STATE1");
  CHECK(to_string(Regime::BoundaryState2) == "BOUNDARY_STATE2");
  CHECK(to_string(Regime::LowPrior) == "REGIME_LOW_PRIOR");
  CHECK(to_string(Regime::Middle) == "REGIME_MIDDLE");
  CHECK(to_string(Regime::HighPrior) == "REGIME_HIGH_PRIOR");
  CHECK(to_string(Method::RootSolve) == "root-solve");
  CHECK(to_string(ErrorCode::UnknownFigure) == "UNKNOWN_FIGURE");
}
