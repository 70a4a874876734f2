// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fockdecay/channel.hpp"
#include "fockdecay/error.hpp"
#include "fockdecay/flavour.hpp"
#include "fockdecay/heisenberg.hpp"
#include "oracles.hpp"

using namespace fockdecay;
using std::numbers::pi;

namespace {

SpacePtr two_bosons(int cutoff) {
  return FockSpace::make({ModeSpec{Statistics::Boson, 0.0, 0.0, cutoff},
                          ModeSpec{Statistics::Boson, 0.0, 0.0, cutoff}});
}

TwoFlavourParams params(double theta, double phi = 0.3, double psi = 0.7, double chi = 0.0) {
  TwoFlavourParams p;
  p.mixing = {theta, phi, psi, chi};
  p.masses = {0.4, 2.1};
  p.widths = {0.5, 1.5};
  return p;
}

oracle::TwoFlavour as_oracle(const TwoFlavourParams& p) {
  return {p.mixing.theta, p.mixing.phi, p.masses[0], p.masses[1], p.widths[0], p.widths[1]};
}

// Largest elementwise difference restricted to the rows and columns in `idx`.
double restricted_diff(const CMatrix& a, const CMatrix& b, const std::vector<std::size_t>& idx) {
  double worst = 0.0;
  for (auto i : idx)
    for (auto j : idx) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      worst = std::max(worst, std::abs(a(ii, jj) - b(ii, jj)));
    }
  return worst;
}

}  // namespace

TEST_CASE("mixing matrix is unitary for random angles") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const MixingParams mp{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10),
                          rng.uniform(-10, 10)};
    const CMatrix v = mixing_matrix(mp);
    CHECK(linalg::max_abs(v.adjoint() * v - CMatrix::Identity(2, 2)) <= 1e-14);
  }
}

TEST_CASE("maximal mixing tuple gives symmetric and antisymmetric combinations") {
  const auto space = two_bosons(3);
  const MixingParams mp = MixingParams{pi / 2, 2 * pi, pi, 1.5 * pi}.canonical();
  const auto c = propagation_operators(space, mp);
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  CHECK(linalg::max_abs(c[0].matrix - (a1 + a2) / std::sqrt(2.0)) <= 1e-15);
  CHECK(linalg::max_abs(c[1].matrix - (a1 - a2) / std::sqrt(2.0)) <= 1e-15);
  CHECK(mp.phi == 0.0);
  CHECK(mp.chi == doctest::Approx(1.5 * pi));
}

TEST_CASE("theta zero leaves flavours unmixed up to phases") {
  const auto space = two_bosons(2);
  const auto c = propagation_operators(space, MixingParams{0.0, 0.3, 0.7, 0.2});
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  const Complex ph1 = c[0].matrix(0, space->index_of(std::vector{1, 0}));
  const Complex ph2 = c[1].matrix(0, space->index_of(std::vector{0, 1}));
  CHECK(std::abs(ph1) == doctest::Approx(1.0));
  CHECK(std::abs(ph2) == doctest::Approx(1.0));
  CHECK(linalg::max_abs(c[0].matrix - ph1 * a1) <= 1e-15);
  CHECK(linalg::max_abs(c[1].matrix - ph2 * a2) <= 1e-15);
}

TEST_CASE("propagation operators satisfy CCR below the cutoff") {
  const int cutoff = 4;
  const auto space = two_bosons(cutoff);
  const auto c = propagation_operators(space, MixingParams{1.1, 0.4, -0.9, 2.0});
  std::vector<std::size_t> safe;
  for (std::size_t i = 0; i < space->dimension(); ++i)
    if (space->total_occupation(i) < cutoff) safe.push_back(i);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const CMatrix comm = linalg::commutator(c[j].matrix, c[k].matrix.adjoint());
      const CMatrix expect = (j == k ? 1.0 : 0.0) * CMatrix::Identity(comm.rows(), comm.cols());
      CHECK(restricted_diff(comm, expect, safe) <= 1e-12);
    }
}

TEST_CASE("mixed model certificate and validation") {
  const auto space = two_bosons(3);
  const auto model = build_mixed_model(space, params(0.8));
  CHECK(model.certificate_defect() <= 1e-10);
  CHECK(model.exact_subspace().size() == 10);  // total occupation <= 3

  auto bad = params(0.8);
  bad.widths[1] = -1.0;
  CHECK_THROWS_AS(build_mixed_model(space, bad), Error);

  const auto uneven = FockSpace::make({ModeSpec{Statistics::Boson, 0.0, 0.0, 3},
                                       ModeSpec{Statistics::Boson, 0.0, 0.0, 2}});
  try {
    build_mixed_model(uneven, params(0.8));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "MIXING_UNEQUAL_CUTOFFS");
  }
  const auto one = FockSpace::make({ModeSpec{}});
  CHECK_THROWS_AS(build_mixed_model(one, params(0.8)), Error);
}

TEST_CASE("flavour observables") {
  const auto space = two_bosons(3);
  const auto obs = build_flavour_observables(space, 0.9);
  const auto s21 = space->index_of(std::vector{2, 1});
  CHECK(obs.strangeness.matrix(s21, s21).real() == doctest::Approx(1.0));
  CHECK(obs.number.matrix(s21, s21).real() == doctest::Approx(3.0));
  CHECK(linalg::hermiticity_defect(obs.q_plus.matrix) <= 1e-15);
  CHECK(linalg::hermiticity_defect(obs.q_minus.matrix) <= 1e-15);
  CHECK(linalg::max_abs(linalg::commutator(obs.number.matrix, obs.strangeness.matrix)) == 0.0);
  CHECK_THROWS_AS(build_flavour_observables(FockSpace::make({ModeSpec{}}), 0.0), Error);
}

TEST_CASE("ladder evolution matches the hand-expanded two-flavour form") {
  const auto space = two_bosons(3);
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  for (double theta : {0.0, pi / 4, pi / 2, 2.0}) {
    const auto p = params(theta);
    const auto model = build_mixed_model(space, p);
    for (double t : {0.0, 0.3, 1.7}) {
      const auto ladder = evolve_ladder(model, t);
      const auto coef = oracle::ladder_coefficients(as_oracle(p), t);
      CHECK(linalg::max_abs(ladder[0].annihilator.matrix - (coef(0, 0) * a1 + coef(0, 1) * a2)) <= 1e-13);
      CHECK(linalg::max_abs(ladder[1].annihilator.matrix - (coef(1, 0) * a1 + coef(1, 1) * a2)) <= 1e-13);
    }
  }
}

TEST_CASE("number and strangeness closed forms agree with the Kraus series") {
  const auto space = two_bosons(3);
  for (double theta : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi, 2.3}) {
    const auto p = params(theta);
    const auto model = build_mixed_model(space, p);
    const auto obs = build_flavour_observables(space, model.mixing()->phi);
    for (double t : {0.0, 0.4, 1.3, 3.0}) {
      const HeisenbergMap map(model, t);
      const auto& rep = map.reporting_subspace();
      const auto n_series = evolve_observable(map, obs.number);
      const auto s_series = evolve_observable(map, obs.strangeness);
      auto pc = p;
      pc.mixing = model.mixing().value();
      CHECK(restricted_diff(n_series.matrix, number_evolution_closed_form(space, pc, t).matrix, rep) <= 1e-10);
      CHECK(restricted_diff(s_series.matrix, strangeness_evolution_closed_form(space, pc, t).matrix, rep) <= 1e-10);
      CHECK(restricted_diff(n_series.matrix, evolved_number(model, t).matrix, rep) <= 1e-10);
      CHECK(restricted_diff(s_series.matrix, evolved_strangeness(model, t).matrix, rep) <= 1e-10);
    }
  }
}

TEST_CASE("extreme-angle operator forms") {
  const auto space = two_bosons(3);
  const double t = 0.9;
  {
    const auto p = params(0.0);
    const auto model = build_mixed_model(space, p);
    const auto obs = build_flavour_observables(space, model.mixing()->phi);
    const double e1 = std::exp(-p.widths[0] * t), e2 = std::exp(-p.widths[1] * t);
    const CMatrix n_expect = 0.5 * e1 * (obs.number.matrix + obs.strangeness.matrix) +
                             0.5 * e2 * (obs.number.matrix - obs.strangeness.matrix);
    const CMatrix s_expect = 0.5 * e1 * (obs.strangeness.matrix + obs.number.matrix) +
                             0.5 * e2 * (obs.strangeness.matrix - obs.number.matrix);
    CHECK(linalg::max_abs(evolved_number(model, t).matrix - n_expect) <= 1e-10);
    CHECK(linalg::max_abs(evolved_strangeness(model, t).matrix - s_expect) <= 1e-10);
  }
  {
    TwoFlavourParams p = params(pi / 2);
    p.mixing = {pi / 2, 2 * pi, pi, 1.5 * pi};
    const auto model = build_mixed_model(space, p);
    const auto obs = build_flavour_observables(space, model.mixing()->phi);
    const double e1 = std::exp(-p.widths[0] * t), e2 = std::exp(-p.widths[1] * t);
    const double eg = std::exp(-p.mean_width() * t), dm = p.mass_difference();
    const CMatrix n_expect = 0.5 * (e1 + e2) * obs.number.matrix + 0.5 * (e1 - e2) * obs.q_plus.matrix;
    const CMatrix s_expect = eg * std::cos(dm * t) * obs.strangeness.matrix +
                             eg * std::sin(dm * t) * obs.q_minus.matrix;
    CHECK(linalg::max_abs(evolved_number(model, t).matrix - n_expect) <= 1e-10);
    CHECK(linalg::max_abs(evolved_strangeness(model, t).matrix - s_expect) <= 1e-10);
  }
}

TEST_CASE("global phase does not change evolved N and S") {
  const auto space = two_bosons(3);
  const auto ref = build_mixed_model(space, params(1.0, 0.3, 0.7, 0.0));
  for (double chi : {pi / 3, 1.5 * pi}) {
    const auto model = build_mixed_model(space, params(1.0, 0.3, 0.7, chi));
    CHECK(linalg::max_abs(evolved_number(model, 1.1).matrix - evolved_number(ref, 1.1).matrix) <= 1e-12);
    CHECK(linalg::max_abs(evolved_strangeness(model, 1.1).matrix -
                          evolved_strangeness(ref, 1.1).matrix) <= 1e-12);
  }
}

TEST_CASE("mean closed forms") {
  const auto p = params(0.7);
  for (double t : {0.0, 0.5, 2.0}) {
    CHECK(mean_number_closed_form(p, 2, 1, t) == doctest::Approx(oracle::mean_number(as_oracle(p), 2, 1, t)).epsilon(1e-14));
    CHECK(mean_strangeness_closed_form(p, 2, 1, t) ==
          doctest::Approx(oracle::mean_strangeness(as_oracle(p), 2, 1, t)).epsilon(1e-14));
  }
  CHECK(mean_number_closed_form(p, 2, 1, 0.0) == doctest::Approx(3.0));
  CHECK(mean_strangeness_closed_form(p, 2, 1, 0.0) == doctest::Approx(1.0));
}
