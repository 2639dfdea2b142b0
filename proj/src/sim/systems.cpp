#include <cmath>
#include <stdexcept>

#include "geokalman/sim.hpp"

namespace geokalman::sim {

std::string to_string(SystemName name) {
  return name == SystemName::Car2d ? "car2d" : "sphere";
}

SystemName parse_system_name(const std::string& text) {
  if (text == "car2d") return SystemName::Car2d;
  if (text == "sphere") return SystemName::Sphere;
  throw std::invalid_argument("unknown experiment '" + text + "' (expected one of: car2d, sphere)");
}

Control default_control(double t) { return Control::Constant(1, std::sin(t / 2.0)); }

DiscreteSystem car2d_system(double dt) {
  DiscreteSystem sys;
  sys.state_space = special_euclidean(2);
  sys.obs_space = euclidean(2);
  sys.process_noise_dim = 3;
  sys.obs_noise_dim = 2;
  sys.dt = dt;
  sys.control = default_control;
  sys.dynamics = [dt](const Point& p, const Control& q, const Eigen::VectorXd& w, double) {
    const Eigen::Vector2d t = p.head<2>();
    const Eigen::Matrix2d r = Eigen::Map<const Eigen::Matrix2d>(p.data() + 2);
    const Eigen::Matrix2d turn = Eigen::Rotation2Dd(dt * (q[0] + w[0])).toRotationMatrix();
    const Eigen::Matrix2d r_next = r * turn;
    const Eigen::Vector2d t_next =
        t + dt * r * Eigen::Vector2d(kForwardSpeed, 0.0) + std::sqrt(dt) * w.segment<2>(1);
    Point out(6);
    out << t_next, Eigen::Map<const Eigen::Vector4d>(r_next.data());
    return out;
  };
  sys.measurement = [](const Point& p, const Control&, const Eigen::VectorXd& v, double) {
    return Point(p.head<2>() + v);
  };
  return sys;
}

DiscreteSystem sphere_system(double dt) {
  DiscreteSystem sys;
  const ManifoldHandle s2 = sphere(2);
  const ManifoldHandle bundle = tangent_bundle(s2);
  sys.state_space = bundle;
  sys.obs_space = s2;
  sys.process_noise_dim = 4;
  sys.obs_noise_dim = 2;
  sys.dt = dt;
  sys.control = default_control;
  sys.dynamics = [dt, s2, bundle](const Point& state, const Control& q, const Eigen::VectorXd& w,
                                  double) {
    const Eigen::Vector3d p = state.head<3>();
    const Eigen::Vector3d x = state.tail<3>();
    const Basis b = s2->basis_at(p);
    const Eigen::Vector3d drive(0.0, q[0] * kForwardSpeed + w[0], w[1]);
    Tangent xi(6);
    xi << dt * kForwardSpeed * x + std::sqrt(dt) * from_coeffs(b, w.segment<2>(2)),
        dt * p.cross(drive);
    return bundle->exp(state, xi);
  };
  sys.measurement = [s2](const Point& state, const Control&, const Eigen::VectorXd& v, double) {
    const Point p = state.head<3>();
    return s2->exp(p, from_coeffs(s2->basis_at(p), v));
  };
  return sys;
}

DiscreteSystem make_system(SystemName name, double dt) {
  return name == SystemName::Car2d ? car2d_system(dt) : sphere_system(dt);
}

Point initial_state(SystemName name) {
  if (name == SystemName::Car2d) return special_euclidean(2)->identity();
  Point p(6);
  p << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  return p;
}

}  // namespace geokalman::sim
