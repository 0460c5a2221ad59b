#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hrf/geometry.hpp"

namespace hrf {

// Nodes and weights integrating against the normalized form omega_K on P^1(K).
//
// The radial variable (u = |X|^2 over C, the angle over R) is split into composite
// Gauss-Legendre panels that are geometrically graded towards both ends, so log-type
// integrands peaked near 0 and infinity are resolved. m is the number of nodes per panel.
// Over C the phase uses a uniform rule with 12m nodes, offset by half a step.
class QuadratureRule {
public:
    QuadratureRule(Field field, int order, std::vector<ProjectivePoint> nodes, std::vector<double> weights);

    Field field() const { return field_; }
    int order() const { return order_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<ProjectivePoint>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    Field field_;
    int order_;
    std::vector<ProjectivePoint> nodes_;
    std::vector<double> weights_;
};

inline constexpr int kDefaultQuadratureOrder = 16;

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Graded composite rule on [0, 1]; returns {nodes, weights}.
std::pair<std::vector<double>, std::vector<double>> graded_unit_rule(int m);

QuadratureRule build_rule(Field field, int m = kDefaultQuadratureOrder);

// A rule adapted to the hyperbolic point [gamma]. With gamma = tau eta_A sigma, rep = tau eta_A and the
// nodes are pulled back through eta_A with Jacobian weights, so sum w_i phi(points_i) still integrates phi
// against omega while the nodes cluster where P -> rep P contracts.
struct AdaptedRule {
    Sl2 rep;
    std::vector<Pair> points;
    std::vector<double> weights;
};

AdaptedRule adapt_rule(const QuadratureRule& rule, const Sl2& gamma);

// Sum of w_i phi(node_i); throws DomainError naming the node if a value is not finite.
double integrate(const QuadratureRule& rule, const std::function<double(const ProjectivePoint&)>& phi);

struct McEstimate {
    double estimate;
    double standard_error;
};

// Uniform sampling of the unit sphere of K^2 through normalized Gaussian vectors.
McEstimate mc_oracle(Field field, const std::function<double(const ProjectivePoint&)>& phi, std::int64_t samples,
                     std::uint64_t seed);

}  // namespace hrf
