#pragma once

// Reference computations for the tests. Nothing here calls into the library;
// each routine takes a different route to the same quantity.

#include <cstdint>
#include <vector>

namespace oracle {

// Q(m, x) as a Poisson tail, term by term in log space.
double upper_gamma_poisson(int m, double x);

// Q(m, x) = 1 - ∫_0^x t^{m-1} e^{-t} / Γ(m) dt by composite Simpson.
double upper_gamma_quadrature(int m, double x, int panels = 20000);

// Is `target` a convex combination of `points` plus the origin? Requires
// nonnegative data. Solved as a rescaled LP (minimum total weight on the
// nonzero points) so that points many orders of magnitude apart are compared
// without an absolute tolerance.
bool in_hull_with_origin(const std::vector<std::vector<double>>& points,
                         const std::vector<double>& target);

// Extreme points of the convex hull of a nonnegative point set that contains
// the origin.
std::vector<bool> extreme_points(const std::vector<std::vector<double>>& points);

// ‖h‖²·T with ‖h‖² a sum of L unit exponentials and T ~ Beta(1, L-2).
std::vector<double> product_law_interference(int antennas, std::size_t n,
                                             std::uint64_t seed);

// Positive root of μ λ/(λ+r) - e^{-r} + 1 - μ by plain bisection.
double kingman_root_exponential(double lambda, double mu);

// M/G/1 mean wait λ E[S²] / (2(1 - λ E[S])) with the geometric service
// moments summed term by term.
double pk_wait_from_moments(double lambda, double mu);

// -(L-1) log2 δ + (L-1) log2(L(1+Lθ)(1+θ/P)), spelled out.
double feedback_bits(int antennas, double power, double threshold, double delta);

}  // namespace oracle
