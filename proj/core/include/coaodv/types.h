#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace coaodv {

using NodeId = std::uint32_t;

/// Virtual simulation time in integer milliseconds.
using TimeMs = std::int64_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Area {
  double width = 0.0;
  double height = 0.0;

  bool contains(Vec2 p) const { return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height; }
};

/// Raised for violated engine invariants (programming errors), e.g. scheduling into the past.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for invalid user configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coaodv
