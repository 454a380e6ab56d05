#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "realizability.hpp"
#include "tf_realization.hpp"

using namespace qrealize;

namespace {

const RealMatrix kI2 = RealMatrix::Identity(2, 2);

StateSpace hand_case() { return StateSpace::from_matrices(-kI2, RealMatrix::Zero(2, 2), std::sqrt(2.0) * kI2); }

void check_tf_preserved(const StateSpace& in, const StateSpace& out) {
  for (int k = 0; k < 20; ++k) {
    const double w = std::pow(10.0, -2.0 + 4.0 * k / 19.0);
    const ComplexMatrix gi = tf_eval(in, Complex(0.0, w));
    const ComplexMatrix go = tf_eval(out, Complex(0.0, w));
    CHECK((go - gi).norm() <= 1e-7 * (1.0 + gi.norm()));
  }
}

}  // namespace

TEST_SUITE("tf_realization") {
  TEST_CASE("build_h examples") {
    const HamiltonianMatrix h = build_h(hand_case());
    RealMatrix want(4, 4);
    want << -kI2, RealMatrix::Zero(2, 2), -2 * theta(2), kI2;
    CHECK((h.h - want).norm() < 1e-15);

    oracle::Rng rng(1);
    const RealMatrix a = oracle::uniform(rng, 2, 2);
    const HamiltonianMatrix h0 =
        build_h(StateSpace::from_matrices(a, RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2)));
    CHECK(h0.h == block_diag({a, -a.transpose()}));

    const Eigen::VectorXcd ev = oracle::sorted_eigenvalues(h.h);
    CHECK(std::abs(ev(0) + 1.0) < 1e-12);
    CHECK(std::abs(ev(1) + 1.0) < 1e-12);
    CHECK(std::abs(ev(2) - 1.0) < 1e-12);
    CHECK(std::abs(ev(3) - 1.0) < 1e-12);
  }

  TEST_CASE("H blocks are skew and the spectrum is symmetric") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const StateSpace ss = oracle::random_system(rng, 2 + 2 * (trial % 3), 2);
      const HamiltonianMatrix h = build_h(ss);
      CHECK((h.r_tilde + h.r_tilde.transpose()).norm() == 0.0);
      CHECK((h.q_tilde + h.q_tilde.transpose()).norm() == 0.0);
      const Eigen::VectorXcd ev = oracle::sorted_eigenvalues(h.h);
      CHECK(oracle::spectrum_distance(ev, -ev) <= 1e-8 * std::max(1.0, h.h.norm()));
    }
  }

  TEST_CASE("ric examples") {
    const RicSolution x = ric(build_h(hand_case()));
    CHECK((x.x - theta(2)).norm() <= 1e-10);

    const RicSolution z = ric(build_h(StateSpace::from_matrices(-kI2, RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2))));
    CHECK(z.x.norm() == 0.0);

    CHECK_ERROR_CODE(ric(build_h(StateSpace::from_matrices(theta(2), RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2)))),
                     ErrorCode::ImaginaryAxisEigenvalue);
  }

  TEST_CASE("ric solves the skew ARE on random systems") {
    oracle::Rng rng(37);
    int solved = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateSpace ss = oracle::random_system(rng, 2 + 2 * (trial % 3), 2);
      RicSolution x;
      try {
        x = ric(build_h(ss));
      } catch (const Error&) {
        continue;
      }
      ++solved;
      const HamiltonianMatrix h = build_h(ss);
      const double scale = std::max(1.0, x.x.squaredNorm() * h.r_tilde.norm() + 2 * ss.a.norm() * x.x.norm() + h.q_tilde.norm());
      CHECK(skew_are_residual(ss, x.x).norm() <= 1e-8 * scale);
      CHECK((x.x + x.x.transpose()).norm() <= 1e-10 * x.x.norm());
    }
    // Random systems often fall outside dom(Ric).
    CHECK(solved >= 30);
  }

  TEST_CASE("skew_factor examples") {
    RealMatrix t = skew_factor(theta(2));
    CHECK((t.transpose() * theta(2) * t - theta(2)).norm() < 1e-12);
    t = skew_factor(4 * theta(2));
    CHECK((t.transpose() * theta(2) * t - 4 * theta(2)).norm() < 1e-12);
    const RealMatrix x = block_diag({theta(2), 9 * theta(2)});
    t = skew_factor(x);
    CHECK((t.transpose() * theta(4) * t - x).norm() <= 1e-10);
    CHECK(std::abs(t.determinant()) == doctest::Approx(9.0).epsilon(1e-10));
  }

  TEST_CASE("skew_factor errors") {
    CHECK_ERROR_CODE(skew_factor(block_diag({theta(2), RealMatrix::Zero(2, 2)})), ErrorCode::SingularX);
    CHECK_ERROR_CODE(skew_factor(RealMatrix::Identity(2, 2)), ErrorCode::NotSkewSymmetric);
  }

  TEST_CASE("skew_factor on random nonsingular skew matrices") {
    oracle::Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
      const Index n = 2 + 2 * (trial % 5);
      const RealMatrix g = oracle::uniform(rng, n, n);
      const RealMatrix x = g.transpose() * theta(n) * g;
      const RealMatrix t = skew_factor(x);
      CHECK((t.transpose() * theta(n) * t - x).norm() <= 1e-8 * x.norm());
    }
  }

  TEST_CASE("realize_tf examples") {
    // Hand case: S̃ = 0, so the system is already realizable in its coordinates.
    const StateSpace hc = hand_case();
    const TfRealization h = realize_tf(hc);
    CHECK((h.solution.x - theta(2)).norm() <= 1e-10);
    CHECK(h.realization.n_v2() == 0);

    const StateSpace cav = StateSpace::from_matrices(-0.1 * kI2, -std::sqrt(0.1) * kI2, std::sqrt(0.1) * kI2);
    const TfRealization c = realize_tf(cav);
    CHECK(c.realization.n_v2() == 0);
    CHECK((c.realization.ss.a - cav.a).norm() < 1e-14);
    CHECK(check_realizable(c.realization).realizable);
    check_tf_preserved(cav, c.realization.ss);

    // Ã = −I, B̃ = I/2 with a C̃ chosen so that ric succeeds.
    RealMatrix ct(2, 2);
    ct << 1.5, 0.5, -0.3, 1.5;
    const StateSpace gen = StateSpace::from_matrices(-kI2, 0.5 * kI2, ct);
    const TfRealization g = realize_tf(gen);
    CHECK(g.realization.n_v2() == 0);
    CHECK(check_realizable(g.realization).realizable);
    CHECK((tf_eval(g.realization.ss, Complex(0, 1)) - tf_eval(gen, Complex(0, 1))).norm() < 1e-10);
  }

  TEST_CASE("realize_tf reports the cause when extra noise is unavoidable") {
    const StateSpace ss = StateSpace::from_matrices(-kI2, kI2, RealMatrix::Zero(2, 2));
    try {
      realize_tf(ss);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotRealizableWithoutExtraNoise);
      REQUIRE(e.cause().has_value());
      CHECK(*e.cause() == ErrorCode::SingularX);
    }
  }

  TEST_CASE("realize_tf preserves the transfer function on random systems") {
    oracle::Rng rng(43);
    int realized = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateSpace ss = oracle::random_system(rng, 2 + 2 * (trial % 3), 2);
      TfRealization r;
      try {
        r = realize_tf(ss);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotRealizableWithoutExtraNoise);
        continue;
      }
      ++realized;
      CHECK(r.realization.n_v2() == 0);
      CHECK(check_realizable(r.realization).realizable);
      CHECK(noise_requirement(r.realization.ss).n_v2 == 0);
      const RealMatrix& t = r.solution.t;
      CHECK((t.transpose() * theta(ss.n) * t - r.solution.x).norm() <= 1e-8 * r.solution.x.norm());
      check_tf_preserved(ss, r.realization.ss);
    }
    CHECK(realized >= 25);
  }

  TEST_CASE("tf_eval examples") {
    const StateSpace ss = StateSpace::from_matrices(-kI2, kI2, kI2);
    CHECK((tf_eval(ss, 0.0) - kI2.cast<Complex>()).norm() < 1e-15);
    CHECK((tf_eval(ss, 1.0) - 0.5 * kI2.cast<Complex>()).norm() < 1e-15);
    CHECK((tf_eval(ss, Complex(0, 1)) - (1.0 / Complex(1, 1)) * kI2.cast<Complex>()).norm() < 1e-15);
    CHECK_ERROR_CODE(tf_eval(ss, -1.0), ErrorCode::SingularResolvent);
  }
}
