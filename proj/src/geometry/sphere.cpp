#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "geokalman/geometry.hpp"
#include "geokalman/lie.hpp"

namespace geokalman {
namespace {

class Sphere final : public Manifold {
public:
  explicit Sphere(int n) : n_(n) {}

  std::string name() const override { return "Sphere(" + std::to_string(n_) + ")"; }
  int dim() const override { return n_; }
  int point_size() const override { return n_ + 1; }
  int tangent_size() const override { return n_ + 1; }
  ConnectionKind connection() const override { return ConnectionKind::LeviCivita; }

  Point exp(const Point& p, const Tangent& x) const override {
    const double theta = x.norm();
    Point q = std::cos(theta) * p + lie::sinc(theta) * x;
    return q / q.norm();
  }

  Tangent log(const Point& p, const Point& q) const override {
    const double c = p.dot(q);
    const Eigen::VectorXd v = q - c * p;
    const double s = v.norm();
    if (s < 1e-12 && c < 0.0) {
      throw OutOfDomain("sphere log: points are antipodal");
    }
    const double theta = std::atan2(s, c);
    return v / lie::sinc(theta);
  }

  Tangent parallel_transport(const Point& p, const Tangent& d, const Tangent& x) const override {
    const double theta = d.norm();
    if (theta == 0.0) return x;
    const Eigen::VectorXd u = d / theta;
    const double ux = u.dot(x);
    return x + ux * ((std::cos(theta) - 1.0) * u - std::sin(theta) * p);
  }

  /// Gram-Schmidt over the n canonical axes least aligned with p, in axis
  /// order. Ties go to the smaller axis index.
  Basis basis_at(const Point& p) const override {
    std::vector<int> axes(n_ + 1);
    std::iota(axes.begin(), axes.end(), 0);
    std::stable_sort(axes.begin(), axes.end(),
                     [&](int a, int b) { return std::abs(p[a]) < std::abs(p[b]); });
    axes.resize(n_);
    std::sort(axes.begin(), axes.end());

    Eigen::MatrixXd vecs(n_ + 1, n_);
    for (int k = 0; k < n_; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n_ + 1, axes[k]);
      e -= p.dot(e) * p;
      for (int j = 0; j < k; ++j) e -= vecs.col(j).dot(e) * vecs.col(j);
      vecs.col(k) = e.normalized();
    }
    return {p, vecs};
  }

  double volume_density(const Point& p, const Point& q) const override {
    const double theta = log(p, q).norm();
    return std::pow(lie::sinc(theta), n_ - 1);
  }

  double point_residual(const Point& p) const override {
    if (p.size() != n_ + 1) return 1.0;
    return std::abs(p.norm() - 1.0);
  }
  double tangent_residual(const Point& p, const Tangent& x) const override {
    if (x.size() != n_ + 1) return 1.0;
    return std::abs(p.dot(x));
  }

  Eigen::VectorXd tangent_to_ambient(const Point&, const Tangent& x) const override { return x; }
  Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const override {
    return v - p.dot(v) * p;
  }

  Point random_point(Rng& rng) const override {
    std::normal_distribution<double> normal;
    Point p(n_ + 1);
    for (int i = 0; i <= n_; ++i) p[i] = normal(rng);
    return p.normalized();
  }

private:
  int n_;
};

}  // namespace

ManifoldHandle sphere(int n) {
  if (n < 1) throw std::invalid_argument("sphere: dimension must be positive");
  return std::make_shared<Sphere>(n);
}

}  // namespace geokalman
