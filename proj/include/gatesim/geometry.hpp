#pragma once

#include <cmath>

namespace gatesim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Ground-plane UE to a mounted AP: horizontal offset plus mounting height.
inline double distance(const Vec3& ap, const Vec2& ue) {
  return std::hypot(ap.x - ue.x, ap.y - ue.y, ap.z);
}

}  // namespace gatesim
