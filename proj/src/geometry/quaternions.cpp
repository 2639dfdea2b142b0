#include <cmath>

#include "geokalman/geometry.hpp"
#include "geokalman/lie.hpp"

namespace geokalman {
namespace {

using Quat = Eigen::Vector4d;

Quat pure(const Eigen::Vector3d& v) { return Quat(0.0, v.x(), v.y(), v.z()); }

class UnitQuaternions final : public Manifold {
public:
  std::string name() const override { return "UnitQuaternions"; }
  int dim() const override { return 3; }
  int point_size() const override { return 4; }
  int tangent_size() const override { return 4; }
  ConnectionKind connection() const override { return ConnectionKind::LeviCivita; }
  bool has_group() const override { return true; }

  Point exp(const Point& p, const Tangent& x) const override {
    const Quat q = lie::quat_multiply<double>(p, lie::quat_exp<double>(x.tail<3>()));
    return q / q.norm();
  }

  Tangent log(const Point& p, const Point& q) const override {
    // p* q grouped so that the vector part vanishes exactly when q == p.
    const Eigen::Vector3d vp = p.tail<3>();
    const Eigen::Vector3d vq = q.tail<3>();
    Quat rel;
    rel << p[0] * q[0] + vp.dot(vq), (p[0] * vq - q[0] * vp) - vp.cross(vq);
    if (rel[0] < 0.0 && rel.tail<3>().norm() < 1e-12) {
      throw OutOfDomain("unit quaternion log: q = -p is on the cut locus");
    }
    return pure(lie::quat_log<double>(rel));
  }

  Tangent parallel_transport(const Point&, const Tangent& d, const Tangent& x) const override {
    const Quat half = lie::quat_exp<double>(d.tail<3>() / 2.0);
    Quat out = lie::quat_multiply<double>(
        lie::quat_multiply<double>(lie::quat_conjugate<double>(half), x), half);
    out[0] = 0.0;
    return out;
  }

  Basis basis_at(const Point& p) const override {
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(4, 3);
    vecs.bottomRows<3>().setIdentity();
    return {p, vecs};
  }

  Point compose(const Point& a, const Point& b) const override {
    return lie::quat_multiply<double>(a, b);
  }
  Point inverse(const Point& a) const override { return lie::quat_conjugate<double>(a); }
  Point identity() const override { return Quat(1.0, 0.0, 0.0, 0.0); }

  double point_residual(const Point& p) const override {
    if (p.size() != 4) return 1.0;
    return std::abs(p.norm() - 1.0);
  }
  double tangent_residual(const Point&, const Tangent& x) const override {
    if (x.size() != 4) return 1.0;
    return std::abs(x[0]);
  }

  Eigen::VectorXd tangent_to_ambient(const Point& p, const Tangent& x) const override {
    return lie::quat_multiply<double>(p, x);
  }
  Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const override {
    Quat x = lie::quat_multiply<double>(lie::quat_conjugate<double>(p), v);
    x[0] = 0.0;
    return x;
  }

  Point random_point(Rng& rng) const override {
    std::normal_distribution<double> normal;
    Quat q(normal(rng), normal(rng), normal(rng), normal(rng));
    return q.normalized();
  }
};

}  // namespace

ManifoldHandle unit_quaternions() { return std::make_shared<UnitQuaternions>(); }

}  // namespace geokalman
