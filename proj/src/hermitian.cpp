#include "fluctwork/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "fluctwork/errors.hpp"

namespace fluctwork {

namespace {

constexpr int kMaxJacobiSweeps = 100;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

double hermiticity_error(const CMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("matrix is not square");
  return max_abs(h - h.adjoint());
}

bool is_hermitian(const CMatrix& h, double tol) {
  return hermiticity_error(h) <= tol * std::max(1.0, max_abs(h));
}

EigenSystem jacobi_eigensystem(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) throw DimensionError("eigensystem of a non-square matrix");
  if (!is_hermitian(h, tol)) throw ArgumentError("eigensystem of a non-Hermitian matrix");
  const Eigen::Index n = h.rows();
  CMatrix a = 0.5 * (h + h.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = std::max(max_abs(a), 1e-300);

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > 1e-15 * scale * static_cast<double>(n)) {
    if (++sweep > kMaxJacobiSweeps) throw ConvergenceError("Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        // Phase-strip a_pq to a real value, then a real symmetric rotation.
        const std::complex<double> phase = a(p, q) / mag;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const std::complex<double> pc = std::conj(phase);
        // W = [[c, s], [-s conj(phase), c conj(phase)]]; A <- W^dagger A W, V <- V W.
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> akp = a(k, p);
          const std::complex<double> akq = a(k, q);
          a(k, p) = c * akp - s * pc * akq;
          a(k, q) = s * akp + c * pc * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> apk = a(p, k);
          const std::complex<double> aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> vkp = v(k, p);
          const std::complex<double> vkq = v(k, q);
          v(k, p) = c * vkp - s * pc * vkq;
          v(k, q) = s * vkp + c * pc * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
  EigenSystem es;
  es.values.resize(n);
  es.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    es.values(i) = a(src, src).real();
    CVector col = v.col(src);
    Eigen::Index big = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(col(k)) > std::abs(col(big)) * (1.0 + 1e-12)) big = k;
    col *= std::conj(col(big)) / std::abs(col(big));
    col(big) = std::abs(col(big));
    es.vectors.col(i) = col;
  }
  return es;
}

double reconstruction_error(const CMatrix& h, const EigenSystem& es) {
  const CMatrix r = es.vectors * es.values.cast<std::complex<double>>().asDiagonal() * es.vectors.adjoint();
  return max_abs(r - h);
}

CMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f) {
  Eigen::VectorXcd fv(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) fv(i) = f(es.values(i));
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

CMatrix hermitian_exp(const CMatrix& h, double scale) {
  return spectral_function(jacobi_eigensystem(h), [scale](double x) { return std::exp(scale * x); });
}

CMatrix hermitian_log(const CMatrix& rho, double support_tol, double floor) {
  const EigenSystem es = jacobi_eigensystem(rho);
  if (es.values.size() > 0 && es.values.minCoeff() < -1e-10) throw ArgumentError("logarithm of a non-PSD matrix");
  return spectral_function(es, [&](double x) {
    if (x > support_tol) return std::log(x);
    return floor > 0.0 ? std::log(floor) : 0.0;
  });
}

CMatrix hermitian_power(const CMatrix& rho, double power, double support_tol) {
  const EigenSystem es = jacobi_eigensystem(rho);
  return spectral_function(es, [&](double x) { return x > support_tol ? std::pow(x, power) : 0.0; });
}

double min_eigenvalue(const CMatrix& h) {
  const EigenSystem es = jacobi_eigensystem(h);
  return es.values.size() == 0 ? 0.0 : es.values(es.values.size() - 1);
}

}  // namespace fluctwork
