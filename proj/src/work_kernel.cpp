#include "fluctwork/work_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluctwork/diagnostics.hpp"
#include "fluctwork/errors.hpp"

namespace fluctwork {

WorkGrid::WorkGrid(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("work grid must be nonempty");
  for (double w : values) {
    if (!std::isfinite(w)) throw ArgumentError("work grid values must be finite");
  }
  std::sort(values.begin(), values.end());
  values_.reserve(values.size());
  for (double w : values) {
    if (!values_.empty() && w - values_.back() <= kWorkMergeTolerance) {
      if (w != values_.back()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "work values " << values_.back() << " and " << w << " merged";
        warn(msg.str());
      }
      ++merged_;
      continue;
    }
    values_.push_back(w);
  }
}

std::optional<std::size_t> WorkGrid::find(double w, double tol) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), w - tol);
  if (it != values_.end() && std::abs(*it - w) <= tol) {
    return static_cast<std::size_t>(it - values_.begin());
  }
  return std::nullopt;
}

WorkGrid WorkGrid::negated() const {
  std::vector<double> neg(values_.rbegin(), values_.rend());
  for (double& w : neg) w = -w;
  return WorkGrid(std::move(neg));
}

double WorkKernel::Stored::value() const { return tilt == 0.0 ? base : base * std::exp(tilt); }

WorkKernel::WorkKernel(EnergySpectrum initial, EnergySpectrum final, WorkGrid grid)
    : initial_(std::move(initial)), final_(std::move(final)), grid_(std::move(grid)) {}

void WorkKernel::check_key(std::size_t s, std::size_t s_prime, std::size_t w) const {
  if (s >= initial_.size() || s_prime >= final_.size() || w >= grid_.size()) {
    throw DimensionError("kernel index (" + std::to_string(s) + ", " + std::to_string(s_prime) + ", " +
                         std::to_string(w) + ") out of range");
  }
}

void WorkKernel::set(std::size_t s, std::size_t s_prime, std::size_t w, double p) {
  check_key(s, s_prime, w);
  if (!std::isfinite(p) || p < 0.0) throw ArgumentError("kernel entries must be finite and >= 0");
  const KernelKey key{s, s_prime, w};
  if (p == 0.0) {
    entries_.erase(key);
  } else {
    entries_[key] = Stored{p, 0.0};
  }
}

void WorkKernel::add(std::size_t s, std::size_t s_prime, std::size_t w, double p) {
  set(s, s_prime, w, at(s, s_prime, w) + p);
}

double WorkKernel::at(std::size_t s, std::size_t s_prime, std::size_t w) const {
  check_key(s, s_prime, w);
  auto it = entries_.find(KernelKey{s, s_prime, w});
  return it == entries_.end() ? 0.0 : it->second.value();
}

std::vector<KernelEntry> WorkKernel::entries() const {
  std::vector<KernelEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, stored] : entries_) out.push_back({key.s, key.s_prime, key.w, stored.value()});
  return out;
}

std::vector<double> WorkKernel::row_sums() const {
  std::vector<double> sums(initial_.size(), 0.0);
  for (const auto& [key, stored] : entries_) sums[key.s] += stored.value();
  return sums;
}

double WorkKernel::max_row_deviation() const {
  double dev = 0.0;
  for (double r : row_sums()) dev = std::max(dev, std::abs(r - 1.0));
  return dev;
}

bool operator==(const WorkKernel& a, const WorkKernel& b) {
  if (!(a.initial_ == b.initial_) || !(a.final_ == b.final_) || !(a.grid_ == b.grid_)) return false;
  if (a.entries_.size() != b.entries_.size()) return false;
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  for (; ia != a.entries_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.value() != ib->second.value()) return false;
  }
  return true;
}

}  // namespace fluctwork
