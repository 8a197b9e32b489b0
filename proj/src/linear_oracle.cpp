#include "dphase/linear_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace dp {

namespace {

// Exact P1 element matrices: stiffness from the constant basis gradients,
// mass area/12 * (1 + delta_kl), boundary mass length/6 * (1 + delta_kl).
void assemble(const Mesh& mesh, Eigen::MatrixXd& K, Eigen::MatrixXd& M, Eigen::MatrixXd& B) {
  const Eigen::Index n = Eigen::Index(mesh.vertex_count());
  K = Eigen::MatrixXd::Zero(n, n);
  M = Eigen::MatrixXd::Zero(n, n);
  B = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& bg = mesh.basis_gradients[t];
    const double area = mesh.areas[t];
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        K(tri[k], tri[l]) += area * (bg[k].x * bg[l].x + bg[k].y * bg[l].y);
        M(tri[k], tri[l]) += area / 12.0 * (k == l ? 2.0 : 1.0);
      }
  }
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const int idx[2] = {e.a, e.b};
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) B(idx[k], idx[l]) += e.length / 6.0 * (k == l ? 2.0 : 1.0);
  }
}

FemFunction sign_fixed(const Eigen::VectorXd& v) {
  double mean = v.sum();
  FemFunction u(std::size_t(v.size()));
  const double s = mean < 0.0 ? -1.0 : 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) u[std::size_t(i)] = s * v(i);
  return u;
}

}  // namespace

LinearEigenOracle robin_linear_oracle(const Mesh& mesh, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("robin_linear_oracle: beta must be > 0");
  Eigen::MatrixXd K, M, B;
  assemble(mesh, K, M, B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K + beta * B, M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("robin_linear_oracle: eigensolver failed");
  LinearEigenOracle out;
  out.lambda = es.eigenvalues()(0);
  out.eigenfunction = sign_fixed(es.eigenvectors().col(0));  // already M-normalized
  return out;
}

LinearEigenOracle steklov_linear_oracle(const Mesh& mesh) {
  if (mesh.boundary_edges.empty())
    throw std::invalid_argument("steklov_linear_oracle: mesh has no boundary");
  Eigen::MatrixXd K, M, B;
  assemble(mesh, K, M, B);
  // B is singular (interior rows vanish), so pose B u = nu (K + M) u with the
  // definite matrix on the right and invert the largest nu.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, K + M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("steklov_linear_oracle: eigensolver failed");
  const Eigen::Index last = es.eigenvalues().size() - 1;
  const double nu = es.eigenvalues()(last);
  if (!(nu > 0.0)) throw std::runtime_error("steklov_linear_oracle: nonpositive leading ratio");
  Eigen::VectorXd v = es.eigenvectors().col(last);
  const double bnorm = std::sqrt(v.dot(B * v));
  v /= bnorm;
  LinearEigenOracle out;
  out.lambda = 1.0 / nu;
  out.eigenfunction = sign_fixed(v);
  return out;
}

}  // namespace dp
