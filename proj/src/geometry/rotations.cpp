#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "geokalman/geometry.hpp"
#include "geokalman/lie.hpp"
#include "geokalman/matrix_groups.hpp"

namespace geokalman {

namespace matrix_groups {

Eigen::MatrixXd skew_part(const Eigen::MatrixXd& a) { return (a - a.transpose()) / 2.0; }

Eigen::MatrixXd so_basis_element(int n, int k) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  if (n == 3) {
    e = lie::hat<double>(Eigen::Vector3d::Unit(k));
  } else {
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++idx) {
        if (idx == k) {
          e(j, i) = 1.0;
          e(i, j) = -1.0;
        }
      }
    }
  }
  return e / std::sqrt(2.0);
}

Eigen::MatrixXd so_exp(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  if (n == 2) return lie::so2_exp(x(1, 0));
  if (n == 3) return lie::so3_exp<double>(lie::vee<double>(x));
  return x.exp();
}

Eigen::MatrixXd so_log(const Eigen::MatrixXd& r) {
  const auto n = r.rows();
  if (n == 2) {
    if (r(0, 0) < 0.0 && std::abs(r(1, 0)) < 1e-12) {
      throw OutOfDomain("SO(2) log: rotation by pi is on the cut locus");
    }
    const double theta = lie::so2_log<double>(r);
    Eigen::Matrix2d x;
    x << 0.0, -theta, theta, 0.0;
    return x;
  }
  if (n == 3) {
    const Eigen::Matrix3d r3 = r;
    const double s = lie::vee<double>(matrix_groups::skew_part(r3)).norm();
    if (s < 1e-12 && r3.trace() < 1.0) {
      throw OutOfDomain("SO(3) log: rotation by pi is on the cut locus");
    }
    return lie::hat<double>(lie::so3_log<double>(r3));
  }
  return skew_part(r.log());
}

Eigen::MatrixXd random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (rr(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

double rotation_residual(const Eigen::MatrixXd& r) {
  const auto n = r.rows();
  const double orth = (r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  return orth + std::abs(r.determinant() - 1.0);
}

}  // namespace matrix_groups

namespace {

using matrix_groups::so_exp;
using matrix_groups::so_log;

class Rotations final : public Manifold {
public:
  explicit Rotations(int n) : n_(n) {}

  std::string name() const override { return "SO(" + std::to_string(n_) + ")"; }
  int dim() const override { return n_ * (n_ - 1) / 2; }
  int point_size() const override { return n_ * n_; }
  int tangent_size() const override { return n_ * n_; }
  ConnectionKind connection() const override { return ConnectionKind::LeviCivita; }
  bool has_group() const override { return true; }

  Point exp(const Point& p, const Tangent& x) const override {
    return flat(mat(p) * so_exp(mat(x)));
  }

  Tangent log(const Point& p, const Point& q) const override {
    return flat(so_log(mat(p).transpose() * mat(q)));
  }

  Tangent parallel_transport(const Point&, const Tangent& d, const Tangent& x) const override {
    const Eigen::MatrixXd half = so_exp(mat(d) / 2.0);
    return flat(half.transpose() * mat(x) * half);
  }

  Basis basis_at(const Point& p) const override {
    Eigen::MatrixXd vecs(n_ * n_, dim());
    for (int k = 0; k < dim(); ++k) vecs.col(k) = flat(matrix_groups::so_basis_element(n_, k));
    return {p, vecs};
  }

  Point compose(const Point& a, const Point& b) const override { return flat(mat(a) * mat(b)); }
  Point inverse(const Point& a) const override { return flat(mat(a).transpose()); }
  Point identity() const override { return flat(Eigen::MatrixXd::Identity(n_, n_)); }

  double point_residual(const Point& p) const override {
    if (p.size() != n_ * n_) return 1.0;
    return matrix_groups::rotation_residual(mat(p));
  }
  double tangent_residual(const Point&, const Tangent& x) const override {
    if (x.size() != n_ * n_) return 1.0;
    const Eigen::MatrixXd m = mat(x);
    return (m + m.transpose()).cwiseAbs().maxCoeff();
  }

  Eigen::VectorXd tangent_to_ambient(const Point& p, const Tangent& x) const override {
    return flat(mat(p) * mat(x));
  }
  Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const override {
    return flat(matrix_groups::skew_part(mat(p).transpose() * mat(v)));
  }

  Point random_point(Rng& rng) const override {
    return flat(matrix_groups::random_rotation(n_, rng));
  }

private:
  Eigen::MatrixXd mat(const Eigen::VectorXd& v) const {
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), n_, n_);
  }
  static Eigen::VectorXd flat(const Eigen::MatrixXd& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
  }

  int n_;
};

}  // namespace

ManifoldHandle rotations(int n) {
  if (n < 2) throw std::invalid_argument("rotations: n must be at least 2");
  return std::make_shared<Rotations>(n);
}

}  // namespace geokalman
