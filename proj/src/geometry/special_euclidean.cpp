#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "geokalman/geometry.hpp"
#include "geokalman/lie.hpp"
#include "geokalman/matrix_groups.hpp"

namespace geokalman {
namespace {

using matrix_groups::so_exp;
using matrix_groups::so_log;

/// (translation, rotation) pair; the tangent (v, A) uses the same layout.
struct Pair {
  Eigen::VectorXd t;
  Eigen::MatrixXd r;
};

class SpecialEuclidean final : public Manifold {
public:
  explicit SpecialEuclidean(int n) : n_(n) {}

  std::string name() const override { return "SE(" + std::to_string(n_) + ")"; }
  int dim() const override { return n_ * (n_ + 1) / 2; }
  int point_size() const override { return n_ + n_ * n_; }
  int tangent_size() const override { return n_ + n_ * n_; }
  ConnectionKind connection() const override {
    return ConnectionKind::CartanSchoutenTorsionFree;
  }
  bool has_group() const override { return true; }

  Point exp(const Point& p, const Tangent& x) const override {
    return flat(mul(split(p), group_exp(split(x))));
  }

  Tangent log(const Point& p, const Point& q) const override {
    const Pair a = split(p);
    const Pair b = split(q);
    return flat(group_log({a.r.transpose() * (b.t - a.t), a.r.transpose() * b.r}));
  }

  Tangent parallel_transport(const Point&, const Tangent& d, const Tangent& x) const override {
    Pair half_y = split(d);
    half_y.t /= 2.0;
    half_y.r /= 2.0;
    const Pair e = group_exp(half_y);
    const Pair xs = split(x);
    // E^{-1} [[A, v], [0, 0]] E in the homogeneous embedding.
    return flat({e.r.transpose() * (xs.r * e.t + xs.t), e.r.transpose() * xs.r * e.r});
  }

  Basis basis_at(const Point& p) const override {
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(tangent_size(), dim());
    vecs.topLeftCorner(n_, n_).setIdentity();
    for (int k = 0; k < dim() - n_; ++k) {
      const Eigen::MatrixXd e = matrix_groups::so_basis_element(n_, k);
      vecs.col(n_ + k).tail(n_ * n_) = Eigen::Map<const Eigen::VectorXd>(e.data(), e.size());
    }
    return {p, vecs};
  }

  Point compose(const Point& a, const Point& b) const override {
    return flat(mul(split(a), split(b)));
  }
  Point inverse(const Point& a) const override {
    const Pair s = split(a);
    return flat({-s.r.transpose() * s.t, s.r.transpose()});
  }
  Point identity() const override {
    return flat({Eigen::VectorXd::Zero(n_), Eigen::MatrixXd::Identity(n_, n_)});
  }

  double point_residual(const Point& p) const override {
    if (p.size() != point_size() || !p.allFinite()) return 1.0;
    return matrix_groups::rotation_residual(split(p).r);
  }
  double tangent_residual(const Point&, const Tangent& x) const override {
    if (x.size() != tangent_size() || !x.allFinite()) return 1.0;
    const Eigen::MatrixXd a = split(x).r;
    return (a + a.transpose()).cwiseAbs().maxCoeff();
  }

  Eigen::VectorXd tangent_to_ambient(const Point& p, const Tangent& x) const override {
    const Pair s = split(p);
    const Pair xs = split(x);
    return flat({s.r * xs.t, s.r * xs.r});
  }
  Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const override {
    const Pair s = split(p);
    const Pair vs = split(v);
    return flat({s.r.transpose() * vs.t, matrix_groups::skew_part(s.r.transpose() * vs.r)});
  }

  Point random_point(Rng& rng) const override {
    std::normal_distribution<double> normal;
    Eigen::VectorXd t(n_);
    for (int i = 0; i < n_; ++i) t[i] = normal(rng);
    return flat({t, matrix_groups::random_rotation(n_, rng)});
  }

private:
  Pair split(const Eigen::VectorXd& v) const {
    return {v.head(n_), Eigen::Map<const Eigen::MatrixXd>(v.data() + n_, n_, n_)};
  }
  Eigen::VectorXd flat(const Pair& s) const {
    Eigen::VectorXd v(point_size());
    v.head(n_) = s.t;
    v.tail(n_ * n_) = Eigen::Map<const Eigen::VectorXd>(s.r.data(), n_ * n_);
    return v;
  }

  static Pair mul(const Pair& a, const Pair& b) { return {a.t + a.r * b.t, a.r * b.r}; }

  Pair group_exp(const Pair& x) const {
    if (n_ == 2) {
      const double theta = x.r(1, 0);
      return {lie::se2_v(theta) * x.t, lie::so2_exp(theta)};
    }
    if (n_ == 3) {
      const Eigen::Vector3d w = lie::vee<double>(x.r);
      return {lie::so3_left_jacobian<double>(w) * x.t, lie::so3_exp<double>(w)};
    }
    const Eigen::MatrixXd h = homogeneous(x, 0.0).exp();
    return {h.topRightCorner(n_, 1), h.topLeftCorner(n_, n_)};
  }

  Pair group_log(const Pair& g) const {
    if (n_ == 2 || n_ == 3) {
      const Eigen::MatrixXd a = so_log(g.r);
      if (n_ == 2) return {lie::se2_v(a(1, 0)).inverse() * g.t, a};
      const Eigen::Vector3d w = lie::vee<double>(Eigen::Matrix3d(a));
      return {lie::so3_left_jacobian_inverse<double>(w) * g.t, a};
    }
    const Eigen::MatrixXd h = homogeneous(g, 1.0);
    const Eigen::MatrixXd l = h.log();
    return {l.topRightCorner(n_, 1), matrix_groups::skew_part(l.topLeftCorner(n_, n_))};
  }

  Eigen::MatrixXd homogeneous(const Pair& s, double corner) const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
    h(n_, n_) = corner;
    h.topLeftCorner(n_, n_) = s.r;
    h.topRightCorner(n_, 1) = s.t;
    return h;
  }

  int n_;
};

}  // namespace

ManifoldHandle special_euclidean(int n) {
  if (n < 2) throw std::invalid_argument("special_euclidean: n must be at least 2");
  return std::make_shared<SpecialEuclidean>(n);
}

}  // namespace geokalman
