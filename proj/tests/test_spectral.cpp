#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <random>

#include "dlab/error.hpp"
#include "dlab/spectral.hpp"

using namespace dlab;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& m) {
  LinearOperator op;
  op.dimension = static_cast<std::size_t>(m.rows());
  op.apply = [m](std::span<const double> in, std::span<double> out) {
    Eigen::Map<const Eigen::VectorXd> x(in.data(), static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
    y = m * x;
  };
  return op;
}

Eigen::MatrixXd random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("lanczos and power agree with dense eigensolver") {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto a = random_matrix(60, seed);
    const Eigen::MatrixXd s = a * a.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    const double truth = es.eigenvalues().maxCoeff();
    auto op = dense_op(s);
    op.self_adjoint = op.nonnegative = true;
    for (auto method : {EigenMethod::Lanczos, EigenMethod::PowerIteration}) {
      SpectralOptions o;
      o.method = method;
      o.tol = 1e-10;
      o.max_iter = 200000;
      const auto r = operator_norm_self_adjoint(op, o);
      CHECK(r.value == doctest::Approx(truth).epsilon(1e-8));
      CHECK(r.value <= truth * (1 + 1e-12));
    }
  }
}

TEST_CASE("symmetrization route gives the top singular value") {
  const auto a = random_matrix(40, 11);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  SpectralOptions o;
  o.method = EigenMethod::Lanczos;
  o.tol = 1e-12;
  const auto r = norm_via_symmetrization(dense_op(a), dense_op(a.transpose()), o);
  CHECK(r.value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
}

TEST_CASE("wrong adjoint is a contract error") {
  const auto a = random_matrix(20, 3);
  SpectralOptions o;
  CHECK(adjointness_defect(dense_op(a), dense_op(a.transpose()), 1) < 1e-12);
  CHECK_THROWS_AS(norm_via_symmetrization(dense_op(a), dense_op(a), o), Error);
}

TEST_CASE("iteration budget raises convergence error") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(50, 50);
  s(0, 0) = 1.0;
  s(1, 1) = 0.999999;
  for (int i = 2; i < 50; ++i) s(i, i) = 0.5;
  auto op = dense_op(s);
  op.self_adjoint = op.nonnegative = true;
  SpectralOptions o;
  o.method = EigenMethod::PowerIteration;
  o.tol = 1e-14;
  o.max_iter = 10;
  CHECK_THROWS_AS(operator_norm_self_adjoint(op, o), ConvergenceError);
}

TEST_CASE("zero operator") {
  auto op = dense_op(Eigen::MatrixXd::Zero(10, 10));
  op.self_adjoint = op.nonnegative = true;
  SpectralOptions o;
  o.method = EigenMethod::Lanczos;
  CHECK(operator_norm_self_adjoint(op, o).value == doctest::Approx(0.0));
}
