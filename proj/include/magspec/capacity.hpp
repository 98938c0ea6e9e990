#pragma once

#include <string>

#include "magspec/geometry.hpp"

namespace magspec {

enum class CapacityMethod { analytic, fekete };
std::string to_string(CapacityMethod m);

// Shapes with closed-form capacity.
struct CapacityShape {
  enum class Kind { disk, ellipse, segment };
  Kind kind = Kind::disk;
  double radius = 1.0;  // disk
  double semi_a = 1.0;  // ellipse
  double semi_b = 1.0;
  double length = 1.0;  // segment
};

struct CapacityResult {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::analytic;
  int point_count = 0;
  double error_estimate = 0.0;  // |value(M) - value(2M)| for Fekete runs
  // (prod_{i<j} |z_i - z_j|)^{2/(M(M-1))}; decreasing in M. value = raw_diameter M^{-1/(M-1)},
  // which removes the leading finite-M bias (exact for equispaced points on a circle).
  double raw_diameter = 0.0;
  int sweeps = 0;
  double gradient_norm = 0.0;   // max_i |dE/dt_i| / sum_j |d ln|z_i - z_j| / dt_i| at exit
};

// disk R -> R; ellipse a, c -> (a + c)/2; segment l -> l/4.
CapacityResult capacity_analytic(const CapacityShape& s);
// disk and ellipse descriptors; other kinds throw DomainError.
CapacityResult capacity_analytic(const ShapeDescriptor& d);

struct FeketeOptions {
  int max_sweeps = 20000;
  double gradient_tolerance = 1e-10;  // on gradient_norm
  bool estimate_error = true;        // also run 2M points
};

// Fekete points on the curve by coordinate ascent of sum_{i<j} ln |z_i - z_j| in the curve
// parameter from equispaced initialization. ConvergenceError at the sweep cap.
CapacityResult capacity_fekete(const Curve& c, int points, FeketeOptions opts = {});

// Same for the segment [-l/2, l/2] parameterized by (l/2) cos t, t in [0, pi].
CapacityResult capacity_fekete_segment(double length, int points, FeketeOptions opts = {});

}  // namespace magspec
