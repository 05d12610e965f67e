#pragma once

#include <Eigen/Dense>

namespace lagtori {

// Value and partials up to second order of a horizontal lift r : R^2 -> S^5 in C^3.
struct LiftJet {
    Eigen::Vector3cd r, rx, ry, rxx, rxy, ryy;
};

// Hermitian product <a, b> = sum a_j conj(b_j).
inline std::complex<double> herm(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) { return b.dot(a); }

}  // namespace lagtori
