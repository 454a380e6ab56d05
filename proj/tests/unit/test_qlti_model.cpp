#include "helpers.hpp"
#include "qlti_model.hpp"

using namespace qrealize;

TEST_SUITE("qlti_model") {
  TEST_CASE("theta") {
    RealMatrix j(2, 2);
    j << 0, 1, -1, 0;
    CHECK(theta(2) == j);
    CHECK(theta(4) == block_diag({j, j}));
    CHECK(theta(4) * theta(4) == -RealMatrix::Identity(4, 4));
    CHECK_ERROR_CODE(theta(3), ErrorCode::OddDimension);
    for (Index n = 2; n <= 20; n += 2) {
      CHECK(theta(n).transpose() == -theta(n));
      CHECK(theta(n) * theta(n) == -RealMatrix::Identity(n, n));
    }
  }

  TEST_CASE("perm") {
    CHECK(perm(2) == RealMatrix::Identity(2, 2));
    Eigen::VectorXd v(4);
    v << 1, 2, 3, 4;
    Eigen::VectorXd want(4);
    want << 1, 3, 2, 4;
    CHECK(perm(4) * v == want);
    CHECK(perm(6) * perm(6).transpose() == RealMatrix::Identity(6, 6));
    CHECK_ERROR_CODE(perm(5), ErrorCode::OddDimension);
    for (Index n = 2; n <= 20; n += 2) {
      const RealMatrix p = perm(n);
      CHECK((p.array() == 0.0 || p.array() == 1.0).all());
      CHECK(p.rowwise().sum() == Eigen::VectorXd::Ones(n));
      CHECK(p.colwise().sum() == Eigen::RowVectorXd::Ones(n));
    }
  }

  TEST_CASE("gamma") {
    ComplexMatrix m(2, 2);
    m << 0.5, Complex(0, 0.5), 0.5, Complex(0, -0.5);
    CHECK((qrealize::gamma(2) - m).norm() == 0.0);
    const ComplexMatrix g4 = qrealize::gamma(4);
    // Rows of diag(M, M) shuffled by perm(4): rows (1, 3, 2, 4).
    CHECK(g4(0, 0) == m(0, 0));
    CHECK(g4(1, 2) == m(0, 0));
    CHECK(g4(2, 0) == m(1, 0));
    CHECK(g4(3, 3) == m(1, 1));
    for (Index n = 2; n <= 20; n += 2) {
      CHECK((qrealize::gamma(n) * qrealize::gamma(n).adjoint() - 0.5 * ComplexMatrix::Identity(n, n)).norm() < 1e-15);
    }
    CHECK_ERROR_CODE(qrealize::gamma(1), ErrorCode::OddDimension);
  }

  TEST_CASE("diag_j") {
    CHECK(diag_j(2) == theta(2));
    CHECK(diag_j(4) == theta(4));
    CHECK(diag_j(2).transpose() * diag_j(2) == RealMatrix::Identity(2, 2));
    CHECK_ERROR_CODE(diag_j(7), ErrorCode::OddDimension);
  }

  TEST_CASE("vacuum_ito") {
    const ItoTriple v = vacuum_ito(2);
    ComplexMatrix f(2, 2);
    f << 1, Complex(0, 1), Complex(0, -1), 1;
    CHECK((v.f - f).norm() == 0.0);
    CHECK(v.s == RealMatrix::Identity(2, 2));
    CHECK((v.t - Complex(0, 1) * theta(2).cast<Complex>()).norm() == 0.0);
    CHECK((v.s.cast<Complex>() + v.t - v.f).norm() == 0.0);
    for (Index n = 2; n <= 12; n += 2) {
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(vacuum_ito(n).f).eigenvalues();
      for (Index i = 0; i < n; ++i) {
        CHECK((std::abs(ev(i)) < 1e-12 || std::abs(ev(i) - 2.0) < 1e-12));
      }
    }
    CHECK_ERROR_CODE(vacuum_ito(3), ErrorCode::OddDimension);
  }

  TEST_CASE("validate") {
    const RealMatrix i2 = RealMatrix::Identity(2, 2);
    validate(StateSpace::from_matrices(-0.1 * i2, i2, i2));
    CHECK_ERROR_CODE(validate(StateSpace::from_matrices(RealMatrix::Identity(3, 3), RealMatrix::Zero(3, 2),
                                                        RealMatrix::Zero(2, 3))),
                     ErrorCode::OddDimension);
    StateSpace bad = StateSpace::from_matrices(-i2, i2, i2);
    bad.bu = RealMatrix::Zero(4, 2);
    CHECK_ERROR_CODE(validate(bad), ErrorCode::DimensionMismatch);
    CHECK_ERROR_CODE(validate(StateSpace::from_matrices(-i2, RealMatrix::Zero(2, 2), RealMatrix::Zero(4, 2))),
                     ErrorCode::NonSquareInputOutput);
    RealMatrix nan_a = -i2;
    nan_a(0, 0) = std::nan("");
    CHECK_ERROR_CODE(validate(StateSpace::from_matrices(nan_a, i2, i2)), ErrorCode::InvalidArgument);
  }

  TEST_CASE("witness stacks its blocks") {
    RealizationWitness w;
    w.lambda_b0 = ComplexMatrix::Constant(1, 2, 1.0);
    w.lambda_b1 = ComplexMatrix(0, 2);
    w.lambda_b2 = ComplexMatrix::Constant(1, 2, 2.0);
    const ComplexMatrix l = w.lambda();
    CHECK(l.rows() == 2);
    CHECK(l(1, 1) == Complex(2.0, 0.0));
  }
}
