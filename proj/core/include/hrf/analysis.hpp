#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrf/barycenter.hpp"
#include "hrf/dynamics.hpp"
#include "hrf/rfunc.hpp"

namespace hrf {

struct MinimizeOptions {
    // Stop once the hyperbolic gradient norm drops below this.
    double tolerance = 1e-8;
    int max_iterations = 60;
    int random_starts = 4;
    std::uint64_t seed = 7;
    // Random starts are drawn within min(a-priori radius, this) of j.
    double max_start_radius = 4.0;
    // First start (ball coordinates); j if empty.
    std::optional<Vec3> warm_start;
};

struct MinimizeResult {
    HyperbolicPoint minimizer;
    double value;
    double m_K;
    double gradient_norm;
    // Ratio of extreme eigenvalues of the finite-difference Hessian in normal coordinates.
    double hessian_conditioning;
    int restarts;
    int iterations;
    bool converged;
};

MinimizeResult minimize_rf(const HomogeneousLift& F, const QuadratureRule& rule, const MinimizeOptions& options = {});
MinimizeResult minimize_rf(const IteratedLift& F, const QuadratureRule& rule, const MinimizeOptions& options = {});

// log |Res(F^n)| from Res(F o G) = Res(F)^{deg G} Res(G)^{(deg F)^2}.
double log_abs_resultant(const IteratedLift& F);

// Radius 2 (R_F(j) - log C1 + d) / (d - 1) of the ball that contains every minimizer.
double a_priori_radius(double r_at_base, double log_C1, double degree);

// I(xi) = (1/2)(A coth A - 1) with A = d(xi, 0).
double radial_I(const Vec3& xi);
double radial_I_of_distance(double A);

// H{g_F}(xi) + I(xi).
double gamma_limit(const GreenData& green, const Vec3& xi, const QuadratureRule& rule);

struct CapacityReport {
    double pcap_preimage;
    double pcap_sphere;
    double r_of_lift;
};

CapacityReport projective_capacity(const HomogeneousLift& F, const QuadratureRule& rule);

struct Degree1Report {
    Degree1Kind kind;
    cplx lambda;
    // Closed-form value; 0 for Identity and Translation (the latter is an infimum).
    double m_K;
    // R_F minus the resultant term at a point of the minimum locus (far along the ray for Translation).
    double m_K_numeric;
    std::string min_locus;
    std::vector<ProjectivePoint> fixed_points;
    // A point on the minimum locus, when it meets H_K.
    std::optional<HyperbolicPoint> sample_point;
};

Degree1Report degree1_analysis(const RationalMap& f, const QuadratureRule& rule);

// cosh d(f^gamma(j), j) for f(w) = a w + b and gamma = gamma_{z,t}.
double degree1_cosh_distance(cplx a, cplx b, cplx z, double t);

struct AsymptoticsOptions {
    int n_max = 8;
    int quadrature_order = kDefaultQuadratureOrder;
    // Ball points where d^{-n} R_{F^n} and Gamma_F are compared; empty selects the default grid.
    std::vector<Vec3> grid;
    // Depth of the preimage tree for mu_f (capped by the tree point limit).
    int tree_depth = 16;
    std::uint64_t seed = 11;
    double minimize_tolerance = 1e-7;
    // Minimize each iterate and track the distance to Bary(mu_f).
    bool track_minimizers = true;
    int level_samples = 24;
};

struct AsymptoticsReport {
    std::vector<int> n_values;
    std::vector<Vec3> grid;
    // scaled_values[k][i] = d^{-n} R_{F^n} at grid[i] for n = n_values[k].
    std::vector<std::vector<double>> scaled_values;
    std::vector<double> gamma_values;
    std::vector<double> max_grid_error;
    double kappa1;
    double C_F_empirical;
    // "kappa1", "kappa1-1" or "neither" (tolerance 0.005).
    std::string C_F_match;
    std::vector<Vec3> min_locus_trajectory;
    std::vector<double> min_locus_values;
    std::vector<double> dist_to_bary;
    Vec3 bary_mu_f;
    double bary_residual;
    double minimizer_radius_bound;
    bool minimizers_within_bound;
    bool level_bound_holds;
    bool sandwich_holds;
    bool truncated;
    int n_budget;
};

// floor(log(1e5) / log d)
int iteration_budget(int degree);

std::vector<Vec3> default_asymptotics_grid();

AsymptoticsReport asymptotics(const HomogeneousLift& F, const AsymptoticsOptions& options = {});

}  // namespace hrf
