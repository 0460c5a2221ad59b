#pragma once

#include "hrf/dynamics.hpp"

namespace hrf {

struct BarycenterResult {
    Vec3 point;
    double h_value;
    // Norm of the S^2 mean of the measure moved so that point sits at the ball origin.
    double residual;
    int iterations;
};

struct BarycenterOptions {
    double tolerance = 1e-10;
    int max_iterations = 200;
};

// h_mu(xi) = -(1/2) integral of log((1 - |xi|^2) / |xi - zeta|^2), with mu normalized to mass 1.
double h_mu(const WeightedMeasure& mu, const Vec3& xi);

// No cluster of radius cluster_radius carries half of the mass or more.
bool is_admissible(const WeightedMeasure& mu, double cluster_radius = 1e-9);

// g_* mu for a Moebius map acting on S^2.
WeightedMeasure move_measure(const WeightedMeasure& mu, const Sl2& g);

// Damped Newton iteration on the moved-mean equation.
BarycenterResult solve_barycenter(const WeightedMeasure& mu, const BarycenterOptions& options = {});

}  // namespace hrf
