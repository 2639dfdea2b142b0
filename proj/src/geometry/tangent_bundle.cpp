#include <algorithm>

#include "geokalman/geometry.hpp"

namespace geokalman {
namespace {

/// TM with points [p; X] and tangents [xi_p; xi_X]. The exponential map is
/// the first-order retraction
///   (p, X), (xi_p, xi_X) -> (exp_p xi_p, PT_{p -> p'}(X + xi_X)),
/// and log is its exact inverse. Transport moves both blocks with the base
/// connection along xi_p.
class TangentBundle final : public Manifold {
public:
  explicit TangentBundle(ManifoldHandle base) : m_(std::move(base)) {}

  std::string name() const override { return "T" + m_->name(); }
  int dim() const override { return 2 * m_->dim(); }
  int point_size() const override { return m_->point_size() + m_->tangent_size(); }
  int tangent_size() const override { return 2 * m_->tangent_size(); }
  ConnectionKind connection() const override { return ConnectionKind::Induced; }

  Point exp(const Point& p, const Tangent& x) const override {
    const Point base = pp(p);
    const Tangent xi_p = head(x);
    const Point moved = m_->exp(base, xi_p);
    return join(moved, m_->parallel_transport(base, xi_p, pv(p) + tail(x)));
  }

  Tangent log(const Point& p, const Point& q) const override {
    const Point base = pp(p);
    const Point target = pp(q);
    const Tangent xi_p = m_->log(base, target);
    const Tangent back = m_->log(target, base);
    return join(xi_p, m_->parallel_transport(target, back, pv(q)) - pv(p));
  }

  Tangent parallel_transport(const Point& p, const Tangent& d, const Tangent& x) const override {
    const Point base = pp(p);
    const Tangent dir = head(d);
    return join(m_->parallel_transport(base, dir, head(x)),
                m_->parallel_transport(base, dir, tail(x)));
  }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const override {
    const Point base = pp(p);
    return m_->inner(base, head(x), head(y)) + m_->inner(base, tail(x), tail(y));
  }

  Basis basis_at(const Point& p) const override {
    const Basis b = m_->basis_at(pp(p));
    const auto rows = b.vectors.rows();
    const int d = b.dim();
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(2 * rows, 2 * d);
    vecs.topLeftCorner(rows, d) = b.vectors;
    vecs.bottomRightCorner(rows, d) = b.vectors;
    return {p, vecs};
  }

  double point_residual(const Point& p) const override {
    if (p.size() != point_size()) return 1.0;
    return std::max(m_->point_residual(pp(p)), m_->tangent_residual(pp(p), pv(p)));
  }
  double tangent_residual(const Point& p, const Tangent& x) const override {
    if (x.size() != tangent_size()) return 1.0;
    return std::max(m_->tangent_residual(pp(p), head(x)), m_->tangent_residual(pp(p), tail(x)));
  }

  Point random_point(Rng& rng) const override {
    const Point base = m_->random_point(rng);
    return join(base, random_tangent(*m_, base, rng));
  }

private:
  Point pp(const Point& p) const { return p.head(m_->point_size()); }
  Tangent pv(const Point& p) const { return p.tail(m_->tangent_size()); }
  Tangent head(const Tangent& x) const { return x.head(m_->tangent_size()); }
  Tangent tail(const Tangent& x) const { return x.tail(m_->tangent_size()); }

  static Eigen::VectorXd join(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd v(a.size() + b.size());
    v << a, b;
    return v;
  }

  ManifoldHandle m_;
};

}  // namespace

ManifoldHandle tangent_bundle(ManifoldHandle base) {
  return std::make_shared<TangentBundle>(std::move(base));
}

}  // namespace geokalman
