// motion.hpp: constant-velocity Kalman filter over the 7-component box
// state [u, v, s, r, du, dv, ds] (center, area, aspect ratio and their
// rates; the aspect ratio carries no rate).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "occsort/geometry.hpp"

namespace occsort {

using StateVector = Eigen::Matrix<double, 7, 1>;
using StateMatrix = Eigen::Matrix<double, 7, 7>;
using Measurement = Eigen::Vector4d;  // (u, v, s, r)

/// Filter covariances. All entries must be > 0.
struct NoiseConfig {
  Measurement measurement_var = Measurement(1.0, 1.0, 10.0, 10.0);
  StateVector process_var = (StateVector() << 1.0, 1.0, 1.0, 1.0, 0.01, 0.01, 0.01).finished();
  // Multiplier on the process baseline for the initially unobserved
  // velocity components; the first correction then sets the velocity.
  double initial_velocity_var = 1000.0;
  // Floor applied to the area during prediction so long occlusions cannot
  // drive the state out of the box domain.
  double min_area = 1.0;
};

/// Kalman mean and covariance for one track.
struct MotionState {
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();
};

/// (u, v, s, r) measurement for a box: center, area, width/height ratio.
inline Measurement state_from_box(const BoundingBox& bb) {
  const double w = bb.width();
  const double h = bb.height();
  if (w <= 0.0 || h <= 0.0) {
    throw std::invalid_argument("state_from_box: box has nonpositive extent");
  }
  return {bb.center_x(), bb.center_y(), w * h, w / h};
}

inline BoundingBox box_from_measurement(double u, double v, double s, double r) {
  if (s <= 0.0 || r <= 0.0) {
    throw std::domain_error("box_from_measurement: nonpositive area or aspect ratio");
  }
  const double w = std::sqrt(s * r);
  const double h = s / w;
  return {u - 0.5 * w, v - 0.5 * h, u + 0.5 * w, v + 0.5 * h};
}

inline BoundingBox box_from_state(const MotionState& m) {
  return box_from_measurement(m.mean(0), m.mean(1), m.mean(2), m.mean(3));
}

namespace detail {

inline const StateMatrix& transition_matrix() {
  static const StateMatrix f = [] {
    StateMatrix m = StateMatrix::Identity();
    m(0, 4) = 1.0;
    m(1, 5) = 1.0;
    m(2, 6) = 1.0;
    return m;
  }();
  return f;
}

inline const Eigen::Matrix<double, 4, 7>& observation_matrix() {
  static const Eigen::Matrix<double, 4, 7> h = [] {
    Eigen::Matrix<double, 4, 7> m = Eigen::Matrix<double, 4, 7>::Zero();
    m.block<4, 4>(0, 0).setIdentity();
    return m;
  }();
  return h;
}

inline void symmetrize(StateMatrix& p) { p = (0.5 * (p + p.transpose())).eval(); }

}  // namespace detail

/// Fresh track state: position block from the box, velocities zero,
/// diagonal covariance with inflated variance on the velocity components.
inline MotionState init_track_state(const BoundingBox& bb, const NoiseConfig& noise = {}) {
  MotionState m;
  m.mean.head<4>() = state_from_box(bb);
  m.mean.tail<3>().setZero();
  StateVector diag;
  diag.head<4>() = noise.measurement_var;
  diag.tail<3>() = noise.initial_velocity_var * noise.process_var.tail<3>();
  m.covariance = diag.asDiagonal();
  return m;
}

/// Constant-velocity prediction. The area is floored at noise.min_area and
/// the aspect ratio is carried through unchanged.
inline MotionState predict(const MotionState& m, const NoiseConfig& noise = {}) {
  const StateMatrix& f = detail::transition_matrix();
  MotionState out;
  out.mean = f * m.mean;
  if (out.mean(2) < noise.min_area) out.mean(2) = noise.min_area;
  out.covariance = f * m.covariance * f.transpose() + StateMatrix(noise.process_var.asDiagonal());
  detail::symmetrize(out.covariance);
  return out;
}

/// Measurement update observing (u, v, s, r). Joseph-form covariance update
/// keeps the posterior PSD under long predict/correct chains.
inline MotionState correct(const MotionState& m, const Measurement& z, const NoiseConfig& noise = {}) {
  if (!z.allFinite()) {
    throw std::invalid_argument("correct: non-finite measurement");
  }
  const auto& h = detail::observation_matrix();
  const Eigen::Matrix4d r = noise.measurement_var.asDiagonal();
  const Eigen::Matrix4d s = h * m.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 7, 4> gain = m.covariance * h.transpose() * s.inverse();

  MotionState out;
  out.mean = m.mean + gain * (z - h * m.mean);
  const StateMatrix ikh = StateMatrix::Identity() - gain * h;
  out.covariance = ikh * m.covariance * ikh.transpose() + gain * r * gain.transpose();
  detail::symmetrize(out.covariance);
  return out;
}

/// Occluded-frame update: the area rate is halved so the unobserved box does
/// not keep shrinking at the pre-occlusion rate. Composes with predict();
/// nothing else in the state is touched.
inline MotionState occluded_update(MotionState m) {
  m.mean(6) *= 0.5;
  return m;
}

}  // namespace occsort
