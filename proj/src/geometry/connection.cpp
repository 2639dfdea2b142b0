#include <array>
#include <cmath>

#include "geokalman/geometry.hpp"

namespace geokalman {
namespace {

// Sixth-order central stencils at offsets -3..3.
constexpr std::array<double, 7> kFirst = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0,
                                          3.0 / 4,   -3.0 / 20, 1.0 / 60};
constexpr std::array<double, 7> kSecond = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18,
                                           3.0 / 2,  -3.0 / 20, 1.0 / 90};
constexpr double kStencilStep = 1e-2;

template <typename F>
Eigen::VectorXd directional(const F& f, const Eigen::VectorXd& c, const Eigen::VectorXd& dir,
                            const std::array<double, 7>& weights, int order) {
  Eigen::VectorXd acc;
  for (int k = 0; k < 7; ++k) {
    if (weights[k] == 0.0) continue;
    const Eigen::VectorXd val = f(c + (k - 3) * kStencilStep * dir);
    if (acc.size() == 0) acc = Eigen::VectorXd::Zero(val.size());
    acc += weights[k] * val;
  }
  return acc / std::pow(kStencilStep, order);
}

}  // namespace

NormalChart::NormalChart(ManifoldHandle manifold, Point origin)
    : manifold_(std::move(manifold)), origin_(std::move(origin)),
      basis_(manifold_->basis_at(origin_)) {}

Point NormalChart::to_point(const Eigen::VectorXd& c) const {
  return manifold_->exp(origin_, from_coeffs(basis_, c));
}

Eigen::VectorXd NormalChart::from_point(const Point& q) const {
  return to_coeffs(basis_, manifold_->log(origin_, q));
}

Eigen::VectorXd NormalChart::embedding(const Eigen::VectorXd& c) const {
  return manifold_->embed(to_point(c));
}

Eigen::MatrixXd NormalChart::frame(const Eigen::VectorXd& c) const {
  const auto f = [this](const Eigen::VectorXd& x) { return embedding(x); };
  const int d = dim();
  Eigen::MatrixXd out;
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd col = directional(f, c, Eigen::VectorXd::Unit(d, j), kFirst, 1);
    if (j == 0) out.resize(col.size(), d);
    out.col(j) = col;
  }
  return out;
}

Eigen::VectorXd NormalChart::tangent_to_coords(const Point& q, const Tangent& x) const {
  const Eigen::VectorXd v = manifold_->tangent_to_ambient(q, x);
  return frame(from_point(q)).colPivHouseholderQr().solve(v);
}

Tangent NormalChart::coords_to_tangent(const Eigen::VectorXd& c, const Eigen::VectorXd& xi) const {
  return manifold_->ambient_to_tangent(to_point(c), frame(c) * xi);
}

Eigen::MatrixXd ChristoffelField::contract(const Eigen::VectorXd& pc,
                                           const Eigen::VectorXd& u) const {
  const auto d = pc.size();
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index l = 0; l < d; ++l) g.col(l) = gamma_(pc, u, Eigen::VectorXd::Unit(d, l));
  return g;
}

ChristoffelField ChristoffelField::zero() {
  return ChristoffelField([](const Eigen::VectorXd&, const Eigen::VectorXd& u,
                             const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(u.size()); });
}

ChristoffelField embedded_levi_civita(const NormalChart& chart) {
  const auto kind = chart.manifold().connection();
  if (kind != ConnectionKind::LeviCivita && kind != ConnectionKind::Flat) {
    throw UnsupportedOperation(chart.manifold().name() +
                               ": connection is not the Levi-Civita connection of its embedding");
  }
  return ChristoffelField([chart](const Eigen::VectorXd& pc, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const auto f = [&chart](const Eigen::VectorXd& x) { return chart.embedding(x); };
    // Second derivative along w, rescaled so the stencil always spans the same
    // distance in the chart.
    const auto second = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
      const double n = w.norm();
      if (n == 0.0) return Eigen::VectorXd::Zero(f(pc).size());
      return n * n * directional(f, pc, w / n, kSecond, 2);
    };
    const Eigen::VectorXd mixed = (second(u + v) - second(u - v)) / 4.0;
    const Eigen::MatrixXd fr = chart.frame(pc);
    return fr.colPivHouseholderQr().solve(mixed);
  });
}

Tangent parallel_transport_ode(const NormalChart& chart, const ChristoffelField& gamma,
                               const Point& p, const Tangent& d, const Tangent& x, int steps) {
  if (steps < 1) throw std::invalid_argument("parallel_transport_ode: steps must be >= 1");
  const int n = chart.dim();
  Eigen::VectorXd y(3 * n);
  y << chart.from_point(p), chart.tangent_to_coords(p, d), chart.tangent_to_coords(p, x);

  const auto rhs = [&](const Eigen::VectorXd& s) {
    const Eigen::VectorXd pos = s.segment(0, n);
    const Eigen::VectorXd vel = s.segment(n, n);
    Eigen::VectorXd out(3 * n);
    out << vel, -gamma(pos, vel, vel), -gamma(pos, vel, s.segment(2 * n, n));
    return out;
  };

  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = rhs(y);
    const Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return chart.coords_to_tangent(y.segment(0, n), y.segment(2 * n, n));
}

Eigen::MatrixXd transport_tensor_ode(const NormalChart& chart, const ChristoffelField& gamma,
                                     const Point& p, const Tangent& d, const Eigen::MatrixXd& a,
                                     int steps) {
  if (steps < 1) throw std::invalid_argument("transport_tensor_ode: steps must be >= 1");
  const Manifold& m = chart.manifold();
  const int n = chart.dim();

  // Basis coefficients -> chart coordinates at a point.
  const auto basis_to_chart = [&](const Point& q) {
    const Basis b = m.basis_at(q);
    Eigen::MatrixXd j(n, n);
    for (int k = 0; k < n; ++k) j.col(k) = chart.tangent_to_coords(q, b.vectors.col(k));
    return j;
  };

  const Eigen::MatrixXd j0 = basis_to_chart(p);
  Eigen::VectorXd pos = chart.from_point(p);
  Eigen::VectorXd vel = chart.tangent_to_coords(p, d);
  Eigen::MatrixXd ten = j0 * a * j0.transpose();

  struct Deriv {
    Eigen::VectorXd pos, vel;
    Eigen::MatrixXd ten;
  };
  const auto rhs = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                       const Eigen::MatrixXd& t) {
    const Eigen::MatrixXd g = gamma.contract(x, v);
    return Deriv{v, -gamma(x, v, v), -g * t - t * g.transpose()};
  };

  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const Deriv k1 = rhs(pos, vel, ten);
    const Deriv k2 = rhs(pos + 0.5 * h * k1.pos, vel + 0.5 * h * k1.vel, ten + 0.5 * h * k1.ten);
    const Deriv k3 = rhs(pos + 0.5 * h * k2.pos, vel + 0.5 * h * k2.vel, ten + 0.5 * h * k2.ten);
    const Deriv k4 = rhs(pos + h * k3.pos, vel + h * k3.vel, ten + h * k3.ten);
    pos += h / 6.0 * (k1.pos + 2.0 * k2.pos + 2.0 * k3.pos + k4.pos);
    vel += h / 6.0 * (k1.vel + 2.0 * k2.vel + 2.0 * k3.vel + k4.vel);
    ten += h / 6.0 * (k1.ten + 2.0 * k2.ten + 2.0 * k3.ten + k4.ten);
  }

  const Eigen::MatrixXd j1 = basis_to_chart(chart.to_point(pos));
  const Eigen::MatrixXd j1_inv = j1.inverse();
  const Eigen::MatrixXd out = j1_inv * ten * j1_inv.transpose();
  return (out + out.transpose()) / 2.0;
}

}  // namespace geokalman
