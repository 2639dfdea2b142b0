#pragma once

// Closed-form kernels for the matrix and quaternion groups. Everything here is
// templated on the scalar type and works on fixed-size Eigen types; the
// runtime manifold handles in geometry.hpp are thin wrappers around these.

#include <cmath>

#include <Eigen/Dense>

namespace geokalman::lie {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// sin(x)/x, accurate near zero.
template <typename Scalar>
Scalar sinc(Scalar x) {
  using std::abs;
  using std::sin;
  if (abs(x) < Scalar(1e-4)) {
    const Scalar x2 = x * x;
    return Scalar(1) - x2 / Scalar(6) + x2 * x2 / Scalar(120);
  }
  return sin(x) / x;
}

/// (1 - cos x)/x^2
template <typename Scalar>
Scalar one_minus_cos_over_sq(Scalar x) {
  using std::abs;
  using std::sin;
  if (abs(x) < Scalar(1e-4)) {
    const Scalar x2 = x * x;
    return Scalar(0.5) - x2 / Scalar(24) + x2 * x2 / Scalar(720);
  }
  // 2 sin^2(x/2) avoids the cancellation in 1 - cos x.
  const Scalar s = sin(x / Scalar(2));
  return Scalar(2) * s * s / (x * x);
}

/// (x - sin x)/x^3
template <typename Scalar>
Scalar x_minus_sin_over_cube(Scalar x) {
  using std::abs;
  using std::sin;
  if (abs(x) < Scalar(1e-3)) {
    const Scalar x2 = x * x;
    return Scalar(1) / Scalar(6) - x2 / Scalar(120) + x2 * x2 / Scalar(5040);
  }
  return (x - sin(x)) / (x * x * x);
}

// ---------------------------------------------------------------------------
// so(3) / SO(3)

template <typename Scalar>
Matrix3<Scalar> hat(const Vector3<Scalar>& w) {
  Matrix3<Scalar> m;
  m << Scalar(0), -w.z(), w.y(),
       w.z(), Scalar(0), -w.x(),
      -w.y(), w.x(), Scalar(0);
  return m;
}

template <typename Scalar>
Vector3<Scalar> vee(const Matrix3<Scalar>& m) {
  return Vector3<Scalar>(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) / Scalar(2);
}

template <typename Scalar>
Matrix3<Scalar> so3_exp(const Vector3<Scalar>& w) {
  const Scalar theta = w.norm();
  const Matrix3<Scalar> k = hat(w);
  return Matrix3<Scalar>::Identity() + sinc(theta) * k + one_minus_cos_over_sq(theta) * k * k;
}

/// Rotation angle of r in [0, pi], computed with atan2 so it stays accurate
/// near both 0 and pi.
template <typename Scalar>
Scalar so3_angle(const Matrix3<Scalar>& r) {
  using std::atan2;
  const Scalar c = (r.trace() - Scalar(1)) / Scalar(2);
  const Scalar s = vee<Scalar>((r - r.transpose()) / Scalar(2)).norm();
  return atan2(s, c);
}

/// Principal logarithm. At exactly pi the axis sign is ambiguous; callers that
/// care check so3_angle first.
template <typename Scalar>
Vector3<Scalar> so3_log(const Matrix3<Scalar>& r) {
  using std::cos;
  using std::sqrt;
  const Scalar theta = so3_angle(r);
  const Vector3<Scalar> axis_sin = vee<Scalar>((r - r.transpose()) / Scalar(2));  // sin(theta) * axis
  if (theta < Scalar(3.0)) {
    return axis_sin / sinc(theta);
  }
  // Near pi sin(theta) is tiny; read the axis from the symmetric part.
  const Matrix3<Scalar> sym = (r + r.transpose()) / Scalar(2);
  const Matrix3<Scalar> aat =
      (sym - cos(theta) * Matrix3<Scalar>::Identity()) / (Scalar(1) - cos(theta));
  Eigen::Index k;
  aat.diagonal().maxCoeff(&k);
  Vector3<Scalar> axis = aat.col(k) / sqrt(aat(k, k));
  if (axis.dot(axis_sin) < Scalar(0)) axis = -axis;
  return theta * axis.normalized();
}

/// Left Jacobian V of SO(3), used for the translational part of SE(3).
template <typename Scalar>
Matrix3<Scalar> so3_left_jacobian(const Vector3<Scalar>& w) {
  const Scalar theta = w.norm();
  const Matrix3<Scalar> k = hat(w);
  return Matrix3<Scalar>::Identity() + one_minus_cos_over_sq(theta) * k +
         x_minus_sin_over_cube(theta) * k * k;
}

template <typename Scalar>
Matrix3<Scalar> so3_left_jacobian_inverse(const Vector3<Scalar>& w) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar theta = w.norm();
  const Matrix3<Scalar> k = hat(w);
  Scalar coeff;
  if (theta < Scalar(1e-3)) {
    const Scalar t2 = theta * theta;
    coeff = Scalar(1) / Scalar(12) + t2 / Scalar(720) + t2 * t2 / Scalar(30240);
  } else {
    coeff = (Scalar(1) - theta * sin(theta) / (Scalar(2) * (Scalar(1) - cos(theta)))) /
            (theta * theta);
  }
  return Matrix3<Scalar>::Identity() - k / Scalar(2) + coeff * k * k;
}

// ---------------------------------------------------------------------------
// SO(2) / SE(2)

template <typename Scalar>
Matrix2<Scalar> so2_exp(Scalar theta) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> r;
  r << cos(theta), -sin(theta), sin(theta), cos(theta);
  return r;
}

template <typename Scalar>
Scalar so2_log(const Matrix2<Scalar>& r) {
  using std::atan2;
  return atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
}

/// Translational coupling matrix of the SE(2) exponential.
template <typename Scalar>
Matrix2<Scalar> se2_v(Scalar theta) {
  const Scalar a = sinc(theta);
  const Scalar b = theta * one_minus_cos_over_sq(theta);
  Matrix2<Scalar> v;
  v << a, -b, b, a;
  return v;
}

// ---------------------------------------------------------------------------
// Unit quaternions, stored (w, x, y, z).

template <typename Scalar>
Vector4<Scalar> quat_multiply(const Vector4<Scalar>& a, const Vector4<Scalar>& b) {
  return Vector4<Scalar>(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                         a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                         a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                         a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

template <typename Scalar>
Vector4<Scalar> quat_conjugate(const Vector4<Scalar>& q) {
  return Vector4<Scalar>(q[0], -q[1], -q[2], -q[3]);
}

/// Exponential of a pure quaternion (0, v).
template <typename Scalar>
Vector4<Scalar> quat_exp(const Vector3<Scalar>& v) {
  using std::cos;
  const Scalar n = v.norm();
  Vector4<Scalar> q;
  q[0] = cos(n);
  q.template tail<3>() = sinc(n) * v;
  return q;
}

/// Imaginary part of the logarithm of a unit quaternion; the angle lies in [0, pi].
template <typename Scalar>
Vector3<Scalar> quat_log(const Vector4<Scalar>& q) {
  using std::atan2;
  const Vector3<Scalar> v = q.template tail<3>();
  const Scalar s = v.norm();
  const Scalar angle = atan2(s, q[0]);
  return v / sinc(angle);
}

/// Rotation matrix acting on 3-vectors as x -> q x q*.
template <typename Scalar>
Matrix3<Scalar> quat_to_rotation(const Vector4<Scalar>& q) {
  const Scalar w = q[0], x = q[1], y = q[2], z = q[3];
  Matrix3<Scalar> r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace geokalman::lie
