#pragma once

#include <optional>

#include "hrf/maps.hpp"
#include "hrf/quadrature.hpp"

namespace hrf {

struct RfEvaluation {
    double value;
    HyperbolicPoint point;
    // Hyperbolic gradient in the orthonormal frame at the point (complex field only).
    std::optional<Vec3> gradient;
    double laplacian;
    double log_scale_offset;
};

struct GrowthConstants {
    double C1;
    double C2;
    double log_C1;
    double log_C2;
};

struct GrowthBounds {
    double lower;
    double value;
    double upper;
};

class GrowthBoundViolation : public Error {
public:
    GrowthBoundViolation(const GrowthBounds& b);
    GrowthBounds bounds;
};

// R_F at [gamma] = integral of log ||gamma^{-1} F(gamma P)|| over unit nodes P.
double r_value(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);
double r_value(const IteratedLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);
double r_value(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule);
double r_value(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule);

// R of the lift eta_A.
double r_closed_form_linear(double A, Field field);

GrowthConstants growth_constants(const HomogeneousLift& F);
GrowthConstants growth_constants(const IteratedLift& F);

// Throws GrowthBoundViolation if the sandwich fails.
GrowthBounds growth_bounds_check(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);
GrowthBounds growth_bounds_check(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule,
                                 const GrowthConstants& constants);

// ([K:R] / 2) (d - 1 + 4 * integral of ||f^gamma(w), w||^2) for the Laplace-Beltrami operator
// t^2 Delta - t d/dt (C) or t^2 Delta (R) of the curvature -1 half-space.
double laplacian_formula(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);
double laplacian_formula(const IteratedLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);

// Factor relating the hyperbolic gradient to the S^2 mean of omega_{f^gamma}, fixed by the
// finite-difference cross-check in the test suite.
inline constexpr double kGradientScale = -0.5;

// Integral of zeta against the S^2 image of omega_{f^gamma} = (f^gamma)^* omega + (f^gamma)_* omega.
Vec3 omega_mean(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule);
Vec3 omega_mean(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule);

// Gradient at the point gamma . j, in the frame carried over from j by gamma.
Vec3 gradient_at(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule);
Vec3 gradient_at(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule);
// Gradient at a ball point, expressed in the ball's coordinate axes.
Vec3 gradient(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);

RfEvaluation evaluate_rf(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule);

// |a_d - z b_d|^2 + t^2 |b_d|^2, the leading coefficient size of F^{gamma_{z,t}} up to t^d.
double leading_coefficient_weight(const HomogeneousLift& F, cplx z, double t);

}  // namespace hrf
