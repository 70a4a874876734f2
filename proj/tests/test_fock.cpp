// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "fockdecay/channel.hpp"
#include "fockdecay/error.hpp"
#include "fockdecay/fock.hpp"
#include "oracles.hpp"

using namespace fockdecay;

namespace {

SpacePtr bosons(std::vector<int> cutoffs) {
  std::vector<ModeSpec> modes;
  for (int c : cutoffs) modes.push_back(ModeSpec{Statistics::Boson, 0.0, 1.0, c});
  return FockSpace::make(modes);
}

std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("basis ordering and index round trip") {
  const auto space = bosons({2, 3});
  CHECK(space->dimension() == 12);
  CHECK(space->index_of(std::vector{0, 0}) == 0);
  CHECK(space->index_of(std::vector{0, 1}) == 1);
  CHECK(space->index_of(std::vector{1, 0}) == 4);
  for (std::size_t i = 0; i < space->dimension(); ++i) {
    CHECK(space->index_of(space->occupation_of(i)) == i);
  }
  CHECK(space->max_total_occupation() == 5);
  CHECK(space->total_occupation(space->index_of(std::vector{2, 3})) == 5);
}

TEST_CASE("mode validation") {
  CHECK(code_of([] { FockSpace({ModeSpec{Statistics::Boson, 0.0, -1.0, 2}}); }) == "MODE_WIDTH_NEGATIVE");
  CHECK(code_of([] { FockSpace({ModeSpec{Statistics::Boson, NAN, 1.0, 2}}); }) == "MODE_MASS_INVALID");
  CHECK(code_of([] { FockSpace({ModeSpec{Statistics::Boson, 0.0, 1.0, -1}}); }) == "MODE_CUTOFF_NEGATIVE");
  const FockSpace f({ModeSpec{Statistics::Fermion, 0.0, 1.0, 5}});
  CHECK(f.mode(0).cutoff == 1);
  CHECK(f.dimension() == 2);
}

TEST_CASE("single boson ladder matrix") {
  const auto space = bosons({2});
  const CMatrix a = build_annihilator(space, 0).matrix;
  CHECK(a(0, 1) == Complex(1.0));
  CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(a.col(0).norm() == 0.0);
  CHECK(linalg::max_abs(build_creator(space, 0).matrix - a.adjoint()) == 0.0);
  CHECK_THROWS_AS(build_annihilator(space, 1), Error);
}

TEST_CASE("number operators") {
  const auto space = bosons({3});
  const CMatrix n = build_number(space, 0).matrix;
  for (int k = 0; k <= 3; ++k) CHECK(n(k, k).real() == k);
  const CMatrix a = build_annihilator(space, 0).matrix;
  CHECK(linalg::max_abs(n - a.adjoint() * a) <= 1e-15);

  const auto two = bosons({3, 2});
  const CMatrix total = build_total_number(two).matrix;
  for (std::size_t i = 0; i < two->dimension(); ++i) {
    const auto occ = two->occupation_of(i);
    CHECK(total(i, i).real() == occ[0] + occ[1]);
  }
}

TEST_CASE("fermion anticommutation") {
  const auto space = FockSpace::make({ModeSpec{Statistics::Fermion, 0.0, 1.0, 1},
                                      ModeSpec{Statistics::Fermion, 0.0, 1.0, 1}});
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  const CMatrix id = CMatrix::Identity(4, 4);
  CHECK(linalg::max_abs(linalg::anticommutator(a1, a2.adjoint())) == 0.0);
  CHECK(linalg::max_abs(linalg::anticommutator(a1, a2)) == 0.0);
  CHECK(linalg::max_abs(linalg::anticommutator(a1, a1.adjoint()) - id) == 0.0);
  CHECK(linalg::max_abs(linalg::anticommutator(a2, a2.adjoint()) - id) == 0.0);
  CHECK(linalg::max_abs(a1 * a1) == 0.0);
}

TEST_CASE("number states") {
  const auto space = bosons({4});
  const auto vac = number_state(space, std::vector{0});
  CHECK(vac.matrix()(0, 0) == Complex(1.0));
  CHECK(vac.matrix().trace().real() == 1.0);
  const auto two = number_state(space, std::vector{2});
  CHECK(two.matrix()(2, 2) == Complex(1.0));
  CHECK(linalg::max_abs(two.matrix()) == 1.0);
  CHECK(two.max_support_occupation() == 2);

  const auto fig = bosons({3, 3});
  const auto s = number_state(fig, std::vector{2, 1});
  CHECK(s.matrix()(fig->index_of(std::vector{2, 1}), fig->index_of(std::vector{2, 1})) == Complex(1.0));

  CHECK(code_of([&] { number_state(space, std::vector{5}); }) == "OCCUPATION_EXCEEDS_CUTOFF");
  CHECK(code_of([&] { number_state(space, std::vector{1, 1}); }) == "OCCUPATION_LENGTH");
}

TEST_CASE("density operator validation") {
  const auto space = bosons({1});
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  CHECK(code_of([&] { DensityOperator(space, m); }) == "DENSITY_TRACE");
  m(1, 1) = 0.5;
  m(0, 1) = 0.1;
  CHECK(code_of([&] { DensityOperator(space, m); }) == "DENSITY_NOT_HERMITIAN");
  m(1, 0) = 0.1;
  CHECK_NOTHROW(DensityOperator(space, m));
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK(code_of([&] { DensityOperator(space, m); }) == "DENSITY_NOT_POSITIVE");
}

TEST_CASE("mixtures") {
  const auto space = bosons({3});
  const auto mix = number_mixture(space, {{0.25, {1}}, {0.75, {3}}});
  CHECK(mix.matrix()(1, 1).real() == 0.25);
  CHECK(mix.matrix()(3, 3).real() == 0.75);
  CHECK(code_of([&] { number_mixture(space, {{-0.1, {1}}, {1.1, {3}}}); }) == "MIXTURE_WEIGHT_NEGATIVE");
  CHECK(code_of([&] { number_mixture(space, {{0.5, {1}}}); }) == "MIXTURE_WEIGHT_SUM");
}

TEST_CASE("coherent and Poisson states") {
  const auto space = bosons({12});
  const auto vac = coherent_state(space, 0, 0.0);
  CHECK(vac.state.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(vac.tail_weight == 0.0);

  const auto coh = coherent_state(space, 0, Complex(1.0, 0.0));
  CHECK(coh.tail_weight < 1e-9);
  const auto dist = occupation_distribution(coh.state);
  for (int k = 0; k <= 12; ++k) {
    CHECK(dist.at({k}) == doctest::Approx(oracle::poisson_pmf(1.0, k)).epsilon(1e-8));
  }
  CHECK(expectation(coh.state, build_number(space, 0)) == doctest::Approx(1.0).epsilon(1e-8));

  const auto phased = coherent_state(space, 0, std::polar(1.0, 0.7));
  CHECK(std::arg(phased.state.matrix()(1, 0)) == doctest::Approx(0.7));

  const auto pois = poisson_mixture(space, 0, 1.0);
  for (int k = 0; k <= 12; ++k) {
    CHECK(pois.state.matrix()(k, k).real() == doctest::Approx(oracle::poisson_pmf(1.0, k)).epsilon(1e-8));
  }
  CHECK(linalg::max_abs(pois.state.matrix() - pois.state.matrix().diagonal().asDiagonal().toDenseMatrix()) == 0.0);
  CHECK(poisson_mixture(space, 0, 0.0).state.matrix()(0, 0).real() == 1.0);

  CHECK(code_of([&] { coherent_state(space, 0, 3.0); }) == "TRUNCATION_TAIL");
  const auto ferm = FockSpace::make({ModeSpec{Statistics::Fermion, 0.0, 1.0, 1}});
  CHECK(code_of([&] { coherent_state(ferm, 0, 0.5); }) == "MODE_NOT_BOSONIC");
}
