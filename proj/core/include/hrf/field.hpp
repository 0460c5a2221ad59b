#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include <Eigen/Core>

namespace hrf {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

// A vector of K^2. Real-field values keep zero imaginary parts.
using Pair = std::array<cplx, 2>;

enum class Field { Real, Complex };

constexpr int field_dim(Field k) { return k == Field::Real ? 1 : 2; }

constexpr std::string_view field_name(Field k) { return k == Field::Real ? "R" : "C"; }

inline double norm(const Pair& p) { return std::hypot(std::abs(p[0]), std::abs(p[1])); }

inline double norm_sq(const Pair& p) { return std::norm(p[0]) + std::norm(p[1]); }

inline bool is_real_scalar(cplx z, double tol = 1e-13) {
    return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z));
}

void require_same_field(Field a, Field b, std::string_view what);

}  // namespace hrf
