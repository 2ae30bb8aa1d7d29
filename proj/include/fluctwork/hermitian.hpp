#pragma once

#include <Eigen/Dense>
#include <functional>

namespace fluctwork {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;

struct EigenSystem {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // columns; largest-magnitude component real positive
};

double hermiticity_error(const CMatrix& h);
bool is_hermitian(const CMatrix& h, double tol = kHermitianTolerance);

// Cyclic complex Jacobi rotations. Throws DimensionError for non-square and
// ArgumentError for non-Hermitian input (relative to the largest entry).
EigenSystem jacobi_eigensystem(const CMatrix& h, double tol = kHermitianTolerance);

// ||V diag(values) V^dagger - H||_max
double reconstruction_error(const CMatrix& h, const EigenSystem& es);

CMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f);

// exp(scale * H)
CMatrix hermitian_exp(const CMatrix& h, double scale);
// ln on the support (eigenvalues above support_tol); with a floor, zero
// eigenvalues map to ln(floor) instead of being left out.
CMatrix hermitian_log(const CMatrix& rho, double support_tol = 1e-14, double floor = 0.0);
// rho^power on the support; eigenvalues at or below support_tol map to 0.
CMatrix hermitian_power(const CMatrix& rho, double power, double support_tol = 1e-14);

double min_eigenvalue(const CMatrix& h);

}  // namespace fluctwork
