#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace parabound {

inline constexpr const char* kVersion = "0.1.0";

/// Spatial point / vector. In 1D the second component is unused and kept at 0.
using Vec = std::array<double, 2>;

inline Vec operator+(Vec a, Vec b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(Vec a, Vec b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, Vec a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1]; }

/// Runtime error carrying the pipeline stage that produced it. The CLI
/// surfaces the stage tag so failures point at the responsible step.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline double sqr(double x) { return x * x; }

}  // namespace parabound
