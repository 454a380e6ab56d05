#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "realizability.hpp"

using namespace qrealize;

namespace {

const RealMatrix kI2 = RealMatrix::Identity(2, 2);
const double kS = std::sqrt(0.1);

StateSpace two_port_cavity() { return StateSpace::from_matrices(-0.1 * kI2, -kS * kI2, kS * kI2); }
StateSpace one_port_cavity() { return StateSpace::from_matrices(-0.05 * kI2, -kS * kI2, kS * kI2); }

void check_round_trip(const StateSpace& ss) {
  const MinimalRealization m = realize_minimal(ss);
  const QuantumRealization& q = m.realization;
  const RealizationDims dims{ss.n, ss.n_u, ss.n_y, q.n_v2()};
  const QuantumRealization r = reconstruct(m.witness, dims);
  auto close = [](const RealMatrix& got, const RealMatrix& want) {
    return (got - want).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, want.cwiseAbs().maxCoeff());
  };
  CHECK(close(r.ss.a, ss.a));
  CHECK(close(r.ss.bu, ss.bu));
  CHECK(close(r.ss.c, ss.c));
  CHECK(close(r.bv1, q.bv1));
  CHECK(r.bv2.cols() == q.bv2.cols());
  if (q.n_v2() > 0) CHECK(close(r.bv2, q.bv2));
}

}  // namespace

TEST_SUITE("realizability") {
  TEST_CASE("s_tilde examples") {
    CHECK(s_tilde(StateSpace::from_matrices(theta(2), RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2))).norm() == 0.0);
    CHECK(s_tilde(two_port_cavity()).norm() < 1e-15);
    CHECK((s_tilde(one_port_cavity()) + 0.1 * theta(2)).norm() < 1e-15);
  }

  TEST_CASE("s_tilde is skew before antisymmetrization") {
    oracle::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const StateSpace ss = oracle::random_system(rng, 2 + 2 * (trial % 4), 2);
      const RealMatrix th = theta(ss.n);
      const RealMatrix raw = th * ss.bu * theta(ss.n_u) * ss.bu.transpose() * th - th * ss.a -
                             ss.a.transpose() * th - ss.c.transpose() * theta(ss.n_y) * ss.c;
      CHECK((raw + raw.transpose()).norm() <= 1e-12 * std::max(1.0, raw.norm()));
      const RealMatrix s = s_tilde(ss);
      CHECK(s == -s.transpose());
    }
  }

  TEST_CASE("noise_requirement examples") {
    NoiseCount nc = noise_requirement(two_port_cavity());
    CHECK(nc.n_v1 == 2);
    CHECK(nc.n_v2 == 0);
    nc = noise_requirement(one_port_cavity());
    CHECK(nc.n_v1 == 2);
    CHECK(nc.n_v2 == 2);
    nc = noise_requirement(StateSpace::from_matrices(theta(4), RealMatrix::Zero(4, 2), RealMatrix::Zero(2, 4)));
    CHECK(nc.n_v1 == 2);
    CHECK(nc.n_v2 == 0);
  }

  TEST_CASE("noise count is invariant under swapping input pairs") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const StateSpace ss = oracle::random_system(rng, 4, 4);
      RealMatrix p = RealMatrix::Zero(4, 4);
      p.block(0, 2, 2, 2) = kI2;
      p.block(2, 0, 2, 2) = kI2;
      const StateSpace swapped = StateSpace::from_matrices(ss.a, ss.bu * p, p * ss.c);
      CHECK((s_tilde(swapped) - s_tilde(ss)).norm() < 1e-12);
      CHECK(noise_requirement(swapped).n_v2 == noise_requirement(ss).n_v2);
    }
  }

  TEST_CASE("realize_minimal on the two-port cavity needs no extra noise") {
    const MinimalRealization m = realize_minimal(two_port_cavity());
    CHECK((m.realization.bv1 + kS * kI2).norm() < 1e-15);
    CHECK(m.realization.bv2.rows() == 2);
    CHECK(m.realization.bv2.cols() == 0);
    CHECK(m.witness.r.norm() == 0.0);
    CHECK(check_realizable(m.realization).realizable);
  }

  TEST_CASE("realize_minimal on the one-port cavity adds one pair") {
    const MinimalRealization m = realize_minimal(one_port_cavity());
    CHECK(m.realization.n_v2() == 2);
    CHECK(check_realizable(m.realization).realizable);
    // Ξ₂ = Λ_b1†Λ_b1 has rank n_v2/2 = 1.
    const ComplexMatrix xi2 = m.witness.lambda_b1.adjoint() * m.witness.lambda_b1;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(xi2).eigenvalues();
    CHECK(ev.minCoeff() >= -1e-14);
    CHECK(std::abs(ev(0)) < 1e-12);
    CHECK(ev(1) > 1e-3);
    const ComplexMatrix l = psd_factor(xi2, 1);
    CHECK((l.adjoint() * l - xi2).norm() < 1e-12);
  }

  TEST_CASE("realize_minimal properties on random systems") {
    oracle::Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = 2 + 2 * (trial % 4);
      const StateSpace ss = oracle::random_system(rng, n, 2);
      const MinimalRealization m = realize_minimal(ss);
      const RealMatrix s = s_tilde(ss);
      CHECK(m.realization.n_v2() == oracle::svd_rank(s, Tolerances{}.rank_rel));
      CHECK(check_realizable(m.realization).realizable);
      const RealMatrix im = (m.witness.lambda_b1.adjoint() * m.witness.lambda_b1).imag();
      CHECK((im - 0.25 * s).norm() <= 1e-9 * std::max(1.0, s.norm()));
      const ComplexMatrix xi2 = m.witness.lambda_b1.adjoint() * m.witness.lambda_b1;
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(xi2).eigenvalues();
      CHECK(ev.minCoeff() >= -1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
      check_round_trip(ss);
    }
  }

  TEST_CASE("rank ambiguity is reported, or resolved conservatively on request") {
    // Pairs of (i/4)S̃ at 0.5 and 5e-10: the second sits next to the threshold.
    RealMatrix a = RealMatrix::Zero(4, 4);
    a.diagonal() << -1.0, -1.0, -1e-9, -1e-9;
    const StateSpace ss = StateSpace::from_matrices(a, RealMatrix::Zero(4, 2), RealMatrix::Zero(2, 4));
    CHECK_ERROR_CODE(realize_minimal(ss, Tolerances{}, RankPolicy::Strict), ErrorCode::NumericalRankAmbiguity);
    const MinimalRealization m = realize_minimal(ss, Tolerances{}, RankPolicy::Conservative);
    CHECK(m.realization.n_v2() == 4);
    CHECK(check_realizable(m.realization).realizable);
  }

  TEST_CASE("check_realizable examples") {
    QuantumRealization q;
    q.ss = two_port_cavity();
    q.bv1 = -kS * kI2;
    q.bv2 = RealMatrix(2, 0);
    RealizabilityReport rep = check_realizable(q);
    CHECK(rep.realizable);
    CHECK(rep.residual_dynamics < 1e-15);

    q.bv1 = kS * kI2;
    rep = check_realizable(q);
    CHECK_FALSE(rep.realizable);
    CHECK(rep.residual_feedthrough == doctest::Approx((2 * kS * kI2).norm()));

    q.bv1 = RealMatrix::Zero(2, 3);
    CHECK_ERROR_CODE(check_realizable(q), ErrorCode::DimensionMismatch);
  }

  TEST_CASE("reconstruct examples") {
    RealizationWitness w;
    w.r = RealMatrix::Zero(2, 2);
    w.lambda_b0 = ComplexMatrix::Zero(1, 2);
    w.lambda_b1 = ComplexMatrix(0, 2);
    w.lambda_b2 = ComplexMatrix::Zero(1, 2);
    const QuantumRealization z = reconstruct(w, {2, 2, 2, 0});
    CHECK(z.ss.a.norm() == 0.0);
    CHECK(z.ss.bu.norm() == 0.0);
    CHECK(z.ss.c.norm() == 0.0);

    const MinimalRealization m = realize_minimal(two_port_cavity());
    const QuantumRealization r = reconstruct(m.witness, {2, 2, 2, 0});
    CHECK((r.ss.a + 0.1 * kI2).norm() < 1e-15);

    CHECK_ERROR_CODE(reconstruct(w, {2, 2, 2, 2}), ErrorCode::DimensionMismatch);
    CHECK_ERROR_CODE(reconstruct(w, {3, 2, 2, 0}), ErrorCode::OddDimension);
  }
}
