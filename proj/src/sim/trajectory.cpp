#include "dqgp/sim/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp::sim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kTableIntervals = 2048;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlX{0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlW{0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct CurveDerivs {
  Vec3 p, d1, d2;  // horizontal curve and its θ-derivatives (z excluded)
};

CurveDerivs curve(Shape shape, double a, double th) {
  const double s = std::sin(th), c = std::cos(th);
  if (shape == Shape::Lemniscate) {
    const double s2 = std::sin(2 * th), c2 = std::cos(2 * th);
    return {Vec3(a * s, a * s * c, 0.0), Vec3(a * c, a * c2, 0.0), Vec3(-a * s, -2.0 * a * s2, 0.0)};
  }
  return {Vec3(a * c, a * s, 0.0), Vec3(-a * s, a * c, 0.0), Vec3(-a * c, -a * s, 0.0)};
}

double speed_of(Shape shape, double a, double th) { return curve(shape, a, th).d1.norm(); }

double gl_integral(Shape shape, double a, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGlX.size(); ++i) {
    sum += kGlW[i] * (speed_of(shape, a, mid - half * kGlX[i]) + speed_of(shape, a, mid + half * kGlX[i]));
  }
  return sum * half;
}

}  // namespace

const char* to_string(Shape s) {
  switch (s) {
    case Shape::Lemniscate: return "lemniscate";
    case Shape::Circle: return "circle";
    case Shape::Spiral: return "spiral";
  }
  return "?";
}

Shape shape_from_string(const std::string& s) {
  if (s == "lemniscate") return Shape::Lemniscate;
  if (s == "circle") return Shape::Circle;
  if (s == "spiral") return Shape::Spiral;
  throw InvalidInput("unknown trajectory shape '" + s + "'");
}

const char* to_string(SpeedProfile p) { return p == SpeedProfile::Constant ? "constant" : "linearly_decreasing"; }

SpeedProfile speed_profile_from_string(const std::string& s) {
  if (s == "constant") return SpeedProfile::Constant;
  if (s == "linearly_decreasing") return SpeedProfile::LinearlyDecreasing;
  throw InvalidInput("unknown speed profile '" + s + "'");
}

void ReferenceTrajectory::validate() const {
  if (!(duration > 0.0)) throw InvalidInput("trajectory duration must be positive");
  if (!(amplitude > 0.0)) throw InvalidInput("trajectory amplitude must be positive");
  if (!(v0 > 0.0)) throw InvalidInput("trajectory speed must be positive");
  if (speed_profile == SpeedProfile::LinearlyDecreasing && !(v0 >= v1 && v1 > 0.0)) {
    throw InvalidInput("decreasing speed profile needs v0 >= v1 > 0");
  }
  if (shape == Shape::Spiral && !(climb_rate > 0.0)) throw InvalidInput("spiral climb rate must be positive");
  if (!std::isfinite(base_height)) throw InvalidInput("base height must be finite");
}

double ReferenceTrajectory::path_speed(double t) const {
  if (speed_profile == SpeedProfile::Constant) return v0;
  return v0 + (v1 - v0) * t / duration;
}

double ReferenceTrajectory::path_accel() const {
  return speed_profile == SpeedProfile::Constant ? 0.0 : (v1 - v0) / duration;
}

double ReferenceTrajectory::arc_length(double t) const {
  if (speed_profile == SpeedProfile::Constant) return v0 * t;
  return v0 * t + 0.5 * (v1 - v0) * t * t / duration;
}

Reference::Reference(ReferenceTrajectory traj) : traj_(traj) {
  traj_.validate();
  if (traj_.shape == Shape::Lemniscate) {
    table_.resize(kTableIntervals + 1);
    table_[0] = 0.0;
    const double h = kTwoPi / kTableIntervals;
    for (int i = 0; i < kTableIntervals; ++i) {
      table_[static_cast<std::size_t>(i) + 1] = table_[static_cast<std::size_t>(i)] + gl_integral(traj_.shape, traj_.amplitude, i * h, (i + 1) * h);
    }
    period_arc_ = table_.back();
  } else {
    period_arc_ = kTwoPi * traj_.amplitude;
  }
}

double Reference::arc_of_theta(double theta) const {
  if (traj_.shape != Shape::Lemniscate) return traj_.amplitude * theta;
  const double turns = std::floor(theta / kTwoPi);
  const double rem = theta - turns * kTwoPi;
  const double h = kTwoPi / kTableIntervals;
  const int i = std::min(kTableIntervals - 1, static_cast<int>(rem / h));
  return turns * period_arc_ + table_[static_cast<std::size_t>(i)] + gl_integral(traj_.shape, traj_.amplitude, i * h, rem);
}

double Reference::theta_of_arc(double s) const {
  if (traj_.shape != Shape::Lemniscate) return s / traj_.amplitude;
  const double turns = std::floor(s / period_arc_);
  const double rem = s - turns * period_arc_;
  // Linear interpolation in the table as the Newton starting point.
  const auto it = std::upper_bound(table_.begin(), table_.end(), rem);
  const auto i = static_cast<int>(std::clamp<std::ptrdiff_t>(it - table_.begin() - 1, 0, kTableIntervals - 1));
  const double h = kTwoPi / kTableIntervals;
  const double l0 = table_[static_cast<std::size_t>(i)], l1 = table_[static_cast<std::size_t>(i) + 1];
  double th = turns * kTwoPi + (i + (rem - l0) / (l1 - l0)) * h;
  for (int k = 0; k < 30; ++k) {
    const double step = (arc_of_theta(th) - s) / speed_of(traj_.shape, traj_.amplitude, th);
    th -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(th))) break;
  }
  return th;
}

ReferenceSample Reference::at(double t) const {
  if (!(t >= -1e-9 && t <= traj_.duration + 1e-9)) {
    std::ostringstream os;
    os << "reference time " << t << " s is outside [0, " << traj_.duration << "]";
    throw OutOfRange(os.str());
  }
  const double s = traj_.arc_length(t);
  const double sd = traj_.path_speed(t);
  const double sdd = traj_.path_accel();
  const double th = theta_of_arc(s);
  const CurveDerivs c = curve(traj_.shape, traj_.amplitude, th);
  const double n1 = c.d1.norm();
  const double thd = sd / n1;
  const double thdd = sdd / n1 - sd * thd * c.d1.dot(c.d2) / (n1 * n1 * n1);

  Vec3 pos = c.p;
  Vec3 vel = c.d1 * thd;
  const Vec3 acc = c.d2 * thd * thd + c.d1 * thdd;
  pos.z() = traj_.base_height;
  if (traj_.shape == Shape::Spiral) {
    pos.z() += traj_.climb_rate * t;
    vel.z() = traj_.climb_rate;
  }

  ReferenceSample r;
  r.yaw = std::atan2(vel.y(), vel.x());
  const double h2 = vel.x() * vel.x() + vel.y() * vel.y();
  const double yaw_rate = (vel.x() * acc.y() - vel.y() * acc.x()) / h2;
  r.pose = Pose{UnitQuaternion::from_yaw(r.yaw), pos};
  r.Q_d = dq_from_pose(r.pose);
  r.tw_d = Twist{Vec3(0.0, 0.0, yaw_rate), vel};
  r.accel = acc;
  return r;
}

ReferenceSample reference_at(const Reference& ref, double t) { return ref.at(t); }

}  // namespace dqgp::sim
