#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "geokalman/errors.hpp"

namespace geokalman {

/// Points and tangent vectors are flat arrays in the manifold's ambient
/// representation (see Manifold::point_size / tangent_size). The base point of
/// a tangent vector is always passed alongside it.
using Point = Eigen::VectorXd;
using Tangent = Eigen::VectorXd;

using Rng = std::mt19937_64;

enum class ConnectionKind {
  LeviCivita,
  CartanSchoutenTorsionFree,
  Flat,
  /// Connection induced from factor manifolds (products, tangent bundles).
  Induced,
};

/// Ordered orthonormal basis of the tangent space at `base`. Column i of
/// `vectors` is the i-th basis tangent in ambient tangent coordinates.
struct Basis {
  Point base;
  Eigen::MatrixXd vectors;

  int dim() const { return static_cast<int>(vectors.cols()); }
};

/// A manifold with an affine connection. Every built-in handle supplies
/// exp/log/transport in closed form; group structure and the embedding used
/// for Christoffel symbols are optional and throw UnsupportedOperation when
/// absent.
///
/// The inner product of every built-in manifold is the Euclidean dot product
/// of the ambient tangent coordinates, so coefficients in an orthonormal basis
/// are plain projections.
class Manifold {
public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int point_size() const = 0;
  virtual int tangent_size() const = 0;
  virtual ConnectionKind connection() const = 0;
  virtual bool has_group() const { return false; }

  virtual Point exp(const Point& p, const Tangent& x) const = 0;
  virtual Tangent log(const Point& p, const Point& q) const = 0;
  virtual Point retract(const Point& p, const Tangent& x) const { return exp(p, x); }
  virtual Tangent inverse_retract(const Point& p, const Point& q) const { return log(p, q); }

  /// Parallel transport of x along the geodesic t -> exp(p, t d), t in [0, 1].
  virtual Tangent parallel_transport(const Point& p, const Tangent& d, const Tangent& x) const = 0;

  virtual double inner(const Point& p, const Tangent& x, const Tangent& y) const;
  virtual Basis basis_at(const Point& p) const = 0;

  /// Distortion of exp_p at log_p q. The default evaluates the Jacobian
  /// determinant by central differences.
  virtual double volume_density(const Point& p, const Point& q) const;

  virtual Point compose(const Point& a, const Point& b) const;
  virtual Point inverse(const Point& a) const;
  virtual Point identity() const;

  /// Violation of the membership constraint (0 for an exact point).
  virtual double point_residual(const Point& p) const = 0;
  /// Violation of the tangency constraint at p.
  virtual double tangent_residual(const Point& p, const Tangent& x) const = 0;

  /// Inclusion into a Euclidean space whose induced metric is the manifold's
  /// metric. Used to build Levi-Civita Christoffel symbols in charts.
  virtual Eigen::VectorXd embed(const Point& p) const;
  virtual Eigen::VectorXd tangent_to_ambient(const Point& p, const Tangent& x) const;
  virtual Tangent ambient_to_tangent(const Point& p, const Eigen::VectorXd& v) const;

  virtual Point random_point(Rng& rng) const = 0;
};

using ManifoldHandle = std::shared_ptr<const Manifold>;

// Built-in manifolds.
ManifoldHandle euclidean(int n);
ManifoldHandle sphere(int n);
/// SO(n): points are n x n rotation matrices stored column-major, tangents are
/// skew-symmetric Lie algebra elements (left translation).
ManifoldHandle rotations(int n);
/// U(1, H): points (w, x, y, z), tangents pure quaternions (0, x, y, z).
ManifoldHandle unit_quaternions();
/// SE(n): points [t; vec(R)], tangents [v; vec(A)] with A skew.
ManifoldHandle special_euclidean(int n);
ManifoldHandle product(ManifoldHandle a, ManifoldHandle b);
/// Tangent bundle TM with points [p; X] and a first-order retraction built
/// from the base manifold's exp, log and parallel transport.
ManifoldHandle tangent_bundle(ManifoldHandle base);

// Expression-style free functions mirroring the virtual interface.
inline Point exp(const Manifold& m, const Point& p, const Tangent& x) { return m.exp(p, x); }
inline Tangent log(const Manifold& m, const Point& p, const Point& q) { return m.log(p, q); }
inline Point retract(const Manifold& m, const Point& p, const Tangent& x) { return m.retract(p, x); }
inline Tangent inverse_retract(const Manifold& m, const Point& p, const Point& q) {
  return m.inverse_retract(p, q);
}
inline Tangent parallel_transport(const Manifold& m, const Point& p, const Tangent& d,
                                  const Tangent& x) {
  return m.parallel_transport(p, d, x);
}
inline Basis basis_at(const Manifold& m, const Point& p) { return m.basis_at(p); }
inline Point group_compose(const Manifold& g, const Point& a, const Point& b) {
  return g.compose(a, b);
}
inline Point group_inverse(const Manifold& g, const Point& a) { return g.inverse(a); }
inline Point group_identity(const Manifold& g) { return g.identity(); }

inline Eigen::VectorXd to_coeffs(const Basis& b, const Tangent& x) {
  return b.vectors.transpose() * x;
}
inline Tangent from_coeffs(const Basis& b, const Eigen::VectorXd& c) { return b.vectors * c; }

/// Geodesic distance ||log_p q||.
double distance(const Manifold& m, const Point& p, const Point& q);

/// Tangent at p with standard-normal coefficients in basis_at(p), scaled.
Tangent random_tangent(const Manifold& m, const Point& p, Rng& rng, double scale = 1.0);

/// Jacobian determinant of exp_p at log_p q in orthonormal bases, by central
/// differences with the given step.
double volume_density_fd(const Manifold& m, const Point& p, const Point& q, double step = 1e-4);

// ---------------------------------------------------------------------------
// Charts and Christoffel symbols

/// Normal coordinates centred at `origin`: c -> exp_origin(B c).
class NormalChart {
public:
  NormalChart(ManifoldHandle manifold, Point origin);

  const Manifold& manifold() const { return *manifold_; }
  const Point& origin() const { return origin_; }
  int dim() const { return static_cast<int>(basis_.vectors.cols()); }

  Point to_point(const Eigen::VectorXd& c) const;
  Eigen::VectorXd from_point(const Point& q) const;

  /// Embedded image of the chart inverse, c -> embed(to_point(c)).
  Eigen::VectorXd embedding(const Eigen::VectorXd& c) const;
  /// Coordinate frame d(embedding)/dc, one column per coordinate.
  Eigen::MatrixXd frame(const Eigen::VectorXd& c) const;

  Eigen::VectorXd tangent_to_coords(const Point& q, const Tangent& x) const;
  Tangent coords_to_tangent(const Eigen::VectorXd& c, const Eigen::VectorXd& xi) const;

private:
  ManifoldHandle manifold_;
  Point origin_;
  Basis basis_;
};

/// Christoffel map (chart point, u, v) -> Gamma(p_c, u, v), bilinear in (u, v).
class ChristoffelField {
public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                           const Eigen::VectorXd&)>;

  explicit ChristoffelField(Fn gamma) : gamma_(std::move(gamma)) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& pc, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) const {
    return gamma_(pc, u, v);
  }

  /// Matrix G with G * v = Gamma(pc, u, v).
  Eigen::MatrixXd contract(const Eigen::VectorXd& pc, const Eigen::VectorXd& u) const;

  static ChristoffelField zero();

private:
  Fn gamma_;
};

/// Levi-Civita symbols of the metric induced by Manifold::embed in the given
/// chart, from sixth-order finite differences of the embedding.
ChristoffelField embedded_levi_civita(const NormalChart& chart);

/// Vector parallel transport by integrating the geodesic and transport
/// equations in a chart with classical RK4.
Tangent parallel_transport_ode(const NormalChart& chart, const ChristoffelField& gamma,
                               const Point& p, const Tangent& d, const Tangent& x,
                               int steps = 100);

/// Transport of a symmetric rank-2 contravariant tensor. `a` holds the tensor
/// in basis_at(p); the result is expressed in basis_at(exp_p d).
Eigen::MatrixXd transport_tensor_ode(const NormalChart& chart, const ChristoffelField& gamma,
                                     const Point& p, const Tangent& d, const Eigen::MatrixXd& a,
                                     int steps = 100);

}  // namespace geokalman
