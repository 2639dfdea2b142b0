#include <algorithm>

#include "geokalman/geometry.hpp"

namespace geokalman {
namespace {

class Product final : public Manifold {
public:
  Product(ManifoldHandle a, ManifoldHandle b) : a_(std::move(a)), b_(std::move(b)) {}

  std::string name() const override { return a_->name() + " x " + b_->name(); }
  int dim() const override { return a_->dim() + b_->dim(); }
  int point_size() const override { return a_->point_size() + b_->point_size(); }
  int tangent_size() const override { return a_->tangent_size() + b_->tangent_size(); }
  ConnectionKind connection() const override {
    return a_->connection() == b_->connection() ? a_->connection() : ConnectionKind::Induced;
  }
  bool has_group() const override { return a_->has_group() && b_->has_group(); }

  Point exp(const Point& p, const Tangent& x) const override {
    return join_p(a_->exp(pa(p), ta(x)), b_->exp(pb(p), tb(x)));
  }
  Tangent log(const Point& p, const Point& q) const override {
    return join_t(a_->log(pa(p), pa(q)), b_->log(pb(p), pb(q)));
  }
  Point retract(const Point& p, const Tangent& x) const override {
    return join_p(a_->retract(pa(p), ta(x)), b_->retract(pb(p), tb(x)));
  }
  Tangent inverse_retract(const Point& p, const Point& q) const override {
    return join_t(a_->inverse_retract(pa(p), pa(q)), b_->inverse_retract(pb(p), pb(q)));
  }
  Tangent parallel_transport(const Point& p, const Tangent& d, const Tangent& x) const override {
    return join_t(a_->parallel_transport(pa(p), ta(d), ta(x)),
                  b_->parallel_transport(pb(p), tb(d), tb(x)));
  }
  double inner(const Point& p, const Tangent& x, const Tangent& y) const override {
    return a_->inner(pa(p), ta(x), ta(y)) + b_->inner(pb(p), tb(x), tb(y));
  }

  Basis basis_at(const Point& p) const override {
    const Basis ba = a_->basis_at(pa(p));
    const Basis bb = b_->basis_at(pb(p));
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(tangent_size(), dim());
    vecs.topLeftCorner(ba.vectors.rows(), ba.dim()) = ba.vectors;
    vecs.bottomRightCorner(bb.vectors.rows(), bb.dim()) = bb.vectors;
    return {p, vecs};
  }

  double volume_density(const Point& p, const Point& q) const override {
    return a_->volume_density(pa(p), pa(q)) * b_->volume_density(pb(p), pb(q));
  }

  Point compose(const Point& x, const Point& y) const override {
    return join_p(a_->compose(pa(x), pa(y)), b_->compose(pb(x), pb(y)));
  }
  Point inverse(const Point& x) const override {
    return join_p(a_->inverse(pa(x)), b_->inverse(pb(x)));
  }
  Point identity() const override { return join_p(a_->identity(), b_->identity()); }

  double point_residual(const Point& p) const override {
    if (p.size() != point_size()) return 1.0;
    return std::max(a_->point_residual(pa(p)), b_->point_residual(pb(p)));
  }
  double tangent_residual(const Point& p, const Tangent& x) const override {
    if (x.size() != tangent_size()) return 1.0;
    return std::max(a_->tangent_residual(pa(p), ta(x)), b_->tangent_residual(pb(p), tb(x)));
  }

  Eigen::VectorXd embed(const Point& p) const override {
    const Eigen::VectorXd ea = a_->embed(pa(p));
    const Eigen::VectorXd eb = b_->embed(pb(p));
    Eigen::VectorXd e(ea.size() + eb.size());
    e << ea, eb;
    return e;
  }
  Eigen::VectorXd tangent_to_ambient(const Point& p, const Tangent& x) const override {
    const Eigen::VectorXd va = a_->tangent_to_ambient(pa(p), ta(x));
    const Eigen::VectorXd vb = b_->tangent_to_ambient(pb(p), tb(x));
    Eigen::VectorXd v(va.size() + vb.size());
    v << va, vb;
    return v;
  }
  Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const override {
    const auto na = a_->embed(pa(p)).size();
    return join_t(a_->ambient_to_tangent(pa(p), v.head(na)),
                  b_->ambient_to_tangent(pb(p), v.tail(v.size() - na)));
  }

  Point random_point(Rng& rng) const override {
    const Point x = a_->random_point(rng);
    return join_p(x, b_->random_point(rng));
  }

private:
  Eigen::VectorXd pa(const Point& p) const { return p.head(a_->point_size()); }
  Eigen::VectorXd pb(const Point& p) const { return p.tail(b_->point_size()); }
  Eigen::VectorXd ta(const Tangent& x) const { return x.head(a_->tangent_size()); }
  Eigen::VectorXd tb(const Tangent& x) const { return x.tail(b_->tangent_size()); }

  static Eigen::VectorXd join(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd v(a.size() + b.size());
    v << a, b;
    return v;
  }
  static Point join_p(const Point& a, const Point& b) { return join(a, b); }
  static Tangent join_t(const Tangent& a, const Tangent& b) { return join(a, b); }

  ManifoldHandle a_;
  ManifoldHandle b_;
};

}  // namespace

ManifoldHandle product(ManifoldHandle a, ManifoldHandle b) {
  return std::make_shared<Product>(std::move(a), std::move(b));
}

}  // namespace geokalman
