#pragma once
// Independent reference computations: plain loops over the definitions, no library calls
// beyond the data accessors.

#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "fluctwork/work_kernel.hpp"

namespace oracle {

inline double z(const std::vector<double>& e, double beta) {
  double s = 0.0;
  for (double x : e) s += std::exp(-beta * x);
  return s;
}

inline double free_energy(const std::vector<double>& e, const std::vector<double>& p, double beta) {
  double f = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    f += p[i] * e[i];
    if (p[i] > 0) f += p[i] * std::log(p[i]) / beta;
  }
  return f;
}

// Dense copy P[s][s'][k] from the kernel accessor.
using Dense = std::vector<std::vector<std::vector<double>>>;
inline Dense dense(const fluctwork::WorkKernel& k) {
  Dense p(k.initial().size(), std::vector<std::vector<double>>(k.final().size(), std::vector<double>(k.grid().size())));
  for (std::size_t s = 0; s < p.size(); ++s)
    for (std::size_t t = 0; t < p[s].size(); ++t)
      for (std::size_t w = 0; w < p[s][t].size(); ++w) p[s][t][w] = k.at(s, t, w);
  return p;
}

inline std::vector<double> gibbs_sums(const fluctwork::WorkKernel& k, double beta) {
  const Dense p = dense(k);
  std::vector<double> out(k.final().size(), 0.0);
  for (std::size_t s = 0; s < p.size(); ++s)
    for (std::size_t t = 0; t < p[s].size(); ++t)
      for (std::size_t w = 0; w < p[s][t].size(); ++w)
        out[t] += p[s][t][w] * std::exp(beta * (k.final().energy(t) - k.initial().energy(s) + k.grid()[w]));
  return out;
}

inline std::vector<double> final_marginal(const fluctwork::WorkKernel& k, const std::vector<double>& p0) {
  const Dense p = dense(k);
  std::vector<double> out(k.final().size(), 0.0);
  for (std::size_t s = 0; s < p.size(); ++s)
    for (std::size_t t = 0; t < p[s].size(); ++t)
      for (double x : p[s][t]) out[t] += p0[s] * x;
  return out;
}

// <g(s, s', w)> under the joint distribution p0(s) P(s', w | s).
template <class G>
double expect(const fluctwork::WorkKernel& k, const std::vector<double>& p0, G g) {
  const Dense p = dense(k);
  double acc = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s)
    for (std::size_t t = 0; t < p[s].size(); ++t)
      for (std::size_t w = 0; w < p[s][t].size(); ++w)
        if (p[s][t][w] > 0) acc += p0[s] * p[s][t][w] * g(s, t, k.grid()[w]);
  return acc;
}

// <e^{beta v}> with v = f_s' - f_s + w.
inline double second_law(const fluctwork::WorkKernel& k, const std::vector<double>& p0, double beta) {
  const auto q = final_marginal(k, p0);
  return expect(k, p0, [&](std::size_t s, std::size_t t, double w) {
    const double fs = k.initial().energy(s) + std::log(p0[s]) / beta;
    const double ft = k.final().energy(t) + std::log(q[t]) / beta;
    return std::exp(beta * (ft - fs + w));
  });
}

}  // namespace oracle
