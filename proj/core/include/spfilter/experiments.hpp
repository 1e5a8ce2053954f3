#pragma once

#include <vector>

#include "spfilter/basis.hpp"
#include "spfilter/tuner.hpp"

/// Test functions used by the experiment drivers. All take physical
/// coordinates unless stated otherwise.
namespace spf::corpus {

// Line-search tuning set on [-1,1]^d.
double f0(const Point& x);  // (x+0.6)^2 + (y-0.2)^2
double f1(const Point& x);  // -sin((x-0.1) + pi/2) cos(y-0.2)
double f2(const Point& x);  // indicator of x <= 0, y <= 0
double f3(const Point& x);
double f4(const Point& x);
double f5(const Point& x);

std::vector<TuneFunction> tune_functions_2d();
std::vector<TuneFunction> tune_functions_3d();

/// nu sin(2 pi x) sin(2 pi y - 0.85 pi) with nu the indicator of
/// [0, 0.5] x [0.4, 0.85]; defined on [0,1]^2.
double clamped_sinusoid_unit(const Point& x);
/// Same function pulled back to the reference square.
double clamped_sinusoid_unit_reference(const Point& xi);

/// sin(pi(0.2-x)) sin(pi(y+0.2)) [sin(pi(z+0.2))], optionally multiplied by
/// the indicator of [-0.8,0.2] x [-0.2,0.8] [x [-0.2,0.8]].
double projection_sinusoid(const Point& x, bool clamped);

/// 1 - prod_k cos(pi x_k / 2).
double cosine_well(const Point& x);

/// 0.2((1 - sqrt(x^2 + y^2))^2 + z^2).
double torus(const Point& x);

/// Slotted cylinder at (0, 0.5), cone at (0, -0.5), hump at (-0.6, 0),
/// radius 0.3 each; the slot has half-width 0.05 and reaches y = 0.7.
double solid_body(const Point& x);

}  // namespace spf::corpus
