#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "fluctwork/thermo_core.hpp"

namespace fluctwork {

// Values within this distance are treated as the same work value.
inline constexpr double kWorkMergeTolerance = 1e-12;

// Strictly increasing list of work values (positive = work yielded to the weight).
class WorkGrid {
 public:
  // Sorts the input and merges values closer than kWorkMergeTolerance, emitting a warning per merge.
  explicit WorkGrid(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t merged_count() const noexcept { return merged_; }

  std::optional<std::size_t> find(double w, double tol = kWorkMergeTolerance) const;
  // Grid of -w; index k maps to size() - 1 - k.
  WorkGrid negated() const;

  friend bool operator==(const WorkGrid& a, const WorkGrid& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  std::size_t merged_ = 0;
};

struct KernelKey {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  std::size_t w = 0;  // index into the grid

  friend auto operator<=>(const KernelKey&, const KernelKey&) = default;
};

struct KernelEntry {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  std::size_t w = 0;
  double p = 0.0;
};

// Conditional distribution P(s', w | s) stored sparsely and iterated in
// lexicographic (s, s', w) order.
//
// Each entry is held as base * exp(tilt). Forward kernels have tilt 0; the
// backward map adds an exponent, so applying it twice cancels the tilt
// exactly and reproduces the original entries bit for bit.
class WorkKernel {
 public:
  WorkKernel(EnergySpectrum initial, EnergySpectrum final, WorkGrid grid);

  const EnergySpectrum& initial() const noexcept { return initial_; }
  const EnergySpectrum& final() const noexcept { return final_; }
  const WorkGrid& grid() const noexcept { return grid_; }

  // p must be finite and >= 0; p == 0 removes the entry.
  void set(std::size_t s, std::size_t s_prime, std::size_t w, double p);
  void add(std::size_t s, std::size_t s_prime, std::size_t w, double p);
  double at(std::size_t s, std::size_t s_prime, std::size_t w) const;

  std::size_t nonzeros() const noexcept { return entries_.size(); }
  std::vector<KernelEntry> entries() const;

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [key, stored] : entries_) f(key.s, key.s_prime, key.w, stored.value());
  }

  std::vector<double> row_sums() const;
  double max_row_deviation() const;

  // Entrywise equality of values (not of the internal representation).
  friend bool operator==(const WorkKernel& a, const WorkKernel& b);

 private:
  struct Stored {
    double base = 0.0;
    double tilt = 0.0;
    double value() const;
  };

  void check_key(std::size_t s, std::size_t s_prime, std::size_t w) const;

  friend WorkKernel backward_kernel(const WorkKernel&, const ThermalContext&);

  EnergySpectrum initial_;
  EnergySpectrum final_;
  WorkGrid grid_;
  std::map<KernelKey, Stored> entries_;
};

}  // namespace fluctwork
