#include "geokalman/geometry.hpp"

namespace geokalman {
namespace {

class Euclidean final : public Manifold {
public:
  explicit Euclidean(int n) : n_(n) {}

  std::string name() const override { return "Euclidean(" + std::to_string(n_) + ")"; }
  int dim() const override { return n_; }
  int point_size() const override { return n_; }
  int tangent_size() const override { return n_; }
  ConnectionKind connection() const override { return ConnectionKind::Flat; }
  bool has_group() const override { return true; }

  Point exp(const Point& p, const Tangent& x) const override { return p + x; }
  Tangent log(const Point& p, const Point& q) const override { return q - p; }
  Tangent parallel_transport(const Point&, const Tangent&, const Tangent& x) const override {
    return x;
  }

  Basis basis_at(const Point& p) const override {
    return {p, Eigen::MatrixXd::Identity(n_, n_)};
  }

  double volume_density(const Point&, const Point&) const override { return 1.0; }

  Point compose(const Point& a, const Point& b) const override { return a + b; }
  Point inverse(const Point& a) const override { return -a; }
  Point identity() const override { return Point::Zero(n_); }

  double point_residual(const Point& p) const override {
    return p.size() == n_ && p.allFinite() ? 0.0 : 1.0;
  }
  double tangent_residual(const Point&, const Tangent& x) const override {
    return x.size() == n_ && x.allFinite() ? 0.0 : 1.0;
  }

  Eigen::VectorXd tangent_to_ambient(const Point&, const Tangent& x) const override { return x; }
  Tangent ambient_to_tangent(const Point&, const Eigen::VectorXd& v) const override { return v; }

  Point random_point(Rng& rng) const override {
    std::normal_distribution<double> normal;
    Point p(n_);
    for (int i = 0; i < n_; ++i) p[i] = normal(rng);
    return p;
  }

private:
  int n_;
};

}  // namespace

ManifoldHandle euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean: dimension must be positive");
  return std::make_shared<Euclidean>(n);
}

}  // namespace geokalman
