#include "fluctwork/finite_bath.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "fluctwork/errors.hpp"
#include "fluctwork/random.hpp"

namespace fluctwork {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kNoSegment = ~std::uint64_t{0};
constexpr int kMaxLatticeExponent = 60;
constexpr int kMaxDenomBits = 40;

std::int64_t to_lattice(double x, double delta, const char* what) {
  const double q = x / delta;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) {
    throw CommensurabilityError(std::string(what) + " value " + std::to_string(x) +
                                " is not an integer multiple of the bath spacing " + std::to_string(delta));
  }
  return static_cast<std::int64_t>(r);
}

struct Lattice {
  std::vector<std::int64_t> initial;
  std::vector<std::int64_t> final;
  std::vector<std::int64_t> work;
};

Lattice lattice_of(const EnergySpectrum& initial, const EnergySpectrum& final, const WorkGrid& grid,
                   double delta) {
  Lattice lat;
  for (double e : initial.energies()) lat.initial.push_back(to_lattice(e, delta, "initial energy"));
  for (double e : final.energies()) lat.final.push_back(to_lattice(e, delta, "final energy"));
  for (double w : grid.values()) lat.work.push_back(to_lattice(w, delta, "work"));
  return lat;
}

void require_canonical(const ThermalContext& ctx, double delta) {
  if (!(delta > 0.0) || std::abs(ctx.beta() * delta - std::log(2.0)) > 1e-12) {
    throw PreconditionError("finite-bath realization needs beta * delta = ln 2");
  }
}

// Column sums of n * 2^(e'_s' + w - e_s) compared with 2^D, in exact integer arithmetic.
bool dyadic_gibbs_exact(const std::vector<std::uint64_t>& numerators, const Lattice& lat, int denom_bits) {
  const std::size_t d = lat.initial.size();
  const std::size_t dp = lat.final.size();
  const std::size_t g = lat.work.size();
  std::int64_t cmin = 0;
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k) {
        if (numerators[(s * dp + sp) * g + k] == 0) continue;
        const std::int64_t c = lat.final[sp] + lat.work[k] - lat.initial[s];
        if (std::abs(c) > kMaxLatticeExponent) {
          throw CapacityError("energy offsets exceed the supported range of 2^60");
        }
        cmin = std::min(cmin, c);
      }
  const u128 target = u128{1} << (denom_bits - cmin);
  for (std::size_t sp = 0; sp < dp; ++sp) {
    u128 sum = 0;
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t k = 0; k < g; ++k) {
        const std::uint64_t n = numerators[(s * dp + sp) * g + k];
        if (n == 0) continue;
        const std::int64_t c = lat.final[sp] + lat.work[k] - lat.initial[s];
        sum += u128{n} << (c - cmin);
      }
    if (sum != target) return false;
  }
  return true;
}

struct RowEntry {
  std::size_t s_prime;
  std::size_t k;
  std::uint64_t n;
  std::int64_t shift;  // j' - j = e_s - e'_s' - w
};

}  // namespace

std::uint64_t BathModel::degeneracy(int j) const {
  if (j < -half_range || j > half_range) throw ArgumentError("bath level outside the window");
  return std::uint64_t{1} << (half_range + j);
}

BathModel BathModel::canonical(const ThermalContext& ctx, int half_range) {
  return BathModel{std::log(2.0) / ctx.beta(), half_range};
}

std::uint64_t PermutationRealization::numerator(std::size_t s, std::size_t s_prime, std::size_t k) const {
  const std::size_t dp = final_levels.size();
  const std::size_t g = work_levels.size();
  return numerators.at((s * dp + s_prime) * g + k);
}

Microstate PermutationRealization::apply(const Microstate& m) const {
  auto it = std::upper_bound(segments.begin(), segments.end(), m, [](const Microstate& x, const BathSegment& seg) {
    return std::tie(x.level, x.bath_level, x.index) < std::tie(seg.s, seg.j, seg.k_begin);
  });
  if (it == segments.begin()) throw ArgumentError("microstate outside the truncated space");
  --it;
  if (it->s != m.level || it->j != m.bath_level || m.index >= it->k_begin + it->count) {
    throw ArgumentError("microstate outside the truncated space");
  }
  return Microstate{it->s_prime, it->j_prime, it->k_target + (m.index - it->k_begin)};
}

PermutationRealization realize_finite_bath(const WorkKernel& kernel, const BathModel& bath,
                                           const ThermalContext& ctx, int denom_bits, Exec exec) {
  require_canonical(ctx, bath.delta);
  if (bath.half_range < 1 || bath.half_range > kMaxBathHalfRange) {
    throw ArgumentError("bath half range must be in [1, " + std::to_string(kMaxBathHalfRange) + "]");
  }
  if (denom_bits < 0 || denom_bits > kMaxDenomBits) throw ArgumentError("denominator bits must be in [0, 40]");
  const std::size_t d = kernel.initial().size();
  const std::size_t dp = kernel.final().size();
  if (d != dp) throw DimensionError("a permutation realization needs equal initial and final dimension");
  if (d > 64) throw DimensionError("finite-bath realization supports at most 64 levels");
  if (kernel.max_row_deviation() > 1e-9) throw PreconditionError("kernel rows must sum to 1");

  const Lattice lat = lattice_of(kernel.initial(), kernel.final(), kernel.grid(), bath.delta);
  const std::size_t g = lat.work.size();
  const int M = bath.half_range;
  const int levels = 2 * M + 1;
  const std::uint64_t scale = std::uint64_t{1} << denom_bits;

  // Dyadic rounding, row by row, with the largest-remainder rule fixing the row total.
  std::vector<std::uint64_t> numerators(d * dp * g, 0);
  for (std::size_t s = 0; s < d; ++s) {
    struct Rem {
      std::size_t index;
      double remainder;
    };
    std::vector<Rem> rems;
    std::uint64_t assigned = 0;
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k) {
        const double p = kernel.at(s, sp, k);
        if (p <= 0.0) continue;
        const double raw = std::ldexp(p, denom_bits);
        const double fl = std::floor(raw);
        const std::size_t i = (s * dp + sp) * g + k;
        numerators[i] = static_cast<std::uint64_t>(fl);
        assigned += numerators[i];
        rems.push_back({i, raw - fl});
      }
    std::stable_sort(rems.begin(), rems.end(), [](const Rem& a, const Rem& b) { return a.remainder > b.remainder; });
    std::uint64_t deficit = scale > assigned ? scale - assigned : 0;
    for (std::size_t r = 0; deficit > 0 && r < rems.size(); ++r, --deficit) ++numerators[rems[r].index];
    if (deficit > 0 || assigned > scale) throw PreconditionError("dyadic rounding failed to normalize a row");
  }
  if (!dyadic_gibbs_exact(numerators, lat, denom_bits)) {
    throw PreconditionError("dyadic rounding at " + std::to_string(denom_bits) +
                            " bits is not exactly Gibbs-stochastic; no exact realization exists at this resolution");
  }

  std::vector<std::vector<RowEntry>> rows(d);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k) {
        const std::uint64_t n = numerators[(s * dp + sp) * g + k];
        if (n > 0) rows[s].push_back({sp, k, n, lat.initial[s] - lat.final[sp] - lat.work[k]});
      }

  auto in_window = [M](std::int64_t j) { return j >= -M && j <= M; };
  auto splittable = [M, denom_bits](std::int64_t j) { return M + j >= denom_bits; };

  PermutationRealization out{
      .bath = bath,
      .denom_bits = denom_bits,
      .initial_levels = lat.initial,
      .final_levels = lat.final,
      .work_levels = lat.work,
      .numerators = numerators,
      .segments = {},
      .total_microstates = 0,
      .boundary_microstates = 0,
      .boundary_fraction = 0.0,
      .dyadic = WorkKernel(kernel.initial(), kernel.final(), kernel.grid()),
      .induced = WorkKernel(kernel.initial(), kernel.final(), kernel.grid()),
  };
  for (std::size_t s = 0; s < d; ++s)
    for (const auto& e : rows[s]) out.dyadic.set(s, e.s_prime, e.k, std::ldexp(static_cast<double>(e.n), -denom_bits));

  // Source pass: split every splittable level by the dyadic fractions. Segments
  // whose target leaves the window, and unsplittable levels, become leftovers.
  struct Interval {
    std::size_t level;
    int j;
    std::uint64_t begin;
    std::uint64_t count;
  };
  std::vector<BathSegment> mapped;
  std::vector<Interval> source_leftover;
  // segment_of[(s * levels + j + M) * row_size + entry] -> index into `mapped`
  std::vector<std::vector<std::uint64_t>> segment_of(d);
  for (std::size_t s = 0; s < d; ++s) {
    segment_of[s].assign(static_cast<std::size_t>(levels) * rows[s].size(), kNoSegment);
    for (int j = -M; j <= M; ++j) {
      const std::uint64_t omega = bath.degeneracy(j);
      out.total_microstates += omega;
      if (!splittable(j)) {
        source_leftover.push_back({s, j, 0, omega});
        continue;
      }
      const std::uint64_t unit = omega >> denom_bits;
      std::uint64_t k = 0;
      for (std::size_t e = 0; e < rows[s].size(); ++e) {
        const auto& entry = rows[s][e];
        const std::uint64_t count = entry.n * unit;
        const std::int64_t jp = j + entry.shift;
        if (in_window(jp)) {
          segment_of[s][static_cast<std::size_t>(j + M) * rows[s].size() + e] = mapped.size();
          mapped.push_back(BathSegment{s, j, k, count, entry.s_prime, static_cast<int>(jp), 0, false});
        } else {
          source_leftover.push_back({s, j, k, count});
        }
        k += count;
      }
    }
  }

  // Target pass: each target block (s', j') stacks its incoming segments in
  // (s, s', w) order. Blocks are independent.
  const std::int64_t blocks = static_cast<std::int64_t>(dp) * levels;
  std::vector<std::uint64_t> filled(static_cast<std::size_t>(blocks), 0);
  bool overflow = false;
#pragma omp parallel for schedule(static) reduction(|| : overflow) if (exec == Exec::parallel)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t sp = static_cast<std::size_t>(b / levels);
    const int jp = static_cast<int>(b % levels) - M;
    std::uint64_t offset = 0;
    for (std::size_t s = 0; s < d; ++s) {
      for (std::size_t e = 0; e < rows[s].size(); ++e) {
        const auto& entry = rows[s][e];
        if (entry.s_prime != sp) continue;
        const std::int64_t j = jp - entry.shift;
        if (!in_window(j) || !splittable(j)) continue;
        BathSegment& seg = mapped[segment_of[s][static_cast<std::size_t>(j + M) * rows[s].size() + e]];
        seg.k_target = offset;
        offset += seg.count;
      }
    }
    filled[static_cast<std::size_t>(b)] = offset;
    if (offset > bath.degeneracy(jp)) overflow = true;
  }
  if (overflow) throw std::logic_error("target level overfilled despite exact counting identity");

  // Pair leftover sources with unfilled target slots in lexicographic order.
  std::deque<Interval> sources(source_leftover.begin(), source_leftover.end());
  std::deque<Interval> targets;
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t sp = static_cast<std::size_t>(b / levels);
    const int jp = static_cast<int>(b % levels) - M;
    const std::uint64_t omega = bath.degeneracy(jp);
    if (filled[static_cast<std::size_t>(b)] < omega) {
      targets.push_back({sp, jp, filled[static_cast<std::size_t>(b)], omega - filled[static_cast<std::size_t>(b)]});
    }
  }
  std::vector<BathSegment> boundary;
  while (!sources.empty() && !targets.empty()) {
    Interval& src = sources.front();
    Interval& dst = targets.front();
    const std::uint64_t n = std::min(src.count, dst.count);
    boundary.push_back(BathSegment{src.level, src.j, src.begin, n, dst.level, dst.j, dst.begin, true});
    out.boundary_microstates += n;
    src.begin += n;
    src.count -= n;
    dst.begin += n;
    dst.count -= n;
    if (src.count == 0) sources.pop_front();
    if (dst.count == 0) targets.pop_front();
  }
  if (!sources.empty() || !targets.empty()) throw std::logic_error("leftover source and target counts differ");

  out.segments = std::move(mapped);
  out.segments.insert(out.segments.end(), boundary.begin(), boundary.end());
  std::sort(out.segments.begin(), out.segments.end(), [](const BathSegment& a, const BathSegment& b) {
    return std::tie(a.s, a.j, a.k_begin) < std::tie(b.s, b.j, b.k_begin);
  });
  out.boundary_fraction =
      static_cast<double>(out.boundary_microstates) / static_cast<double>(out.total_microstates);

  // Induced kernel: count where the map sends the lowest interior bath level of
  // each s. Work is read off from the energy change, not from the construction.
  auto work_index = [&](std::int64_t w) -> std::optional<std::size_t> {
    auto it = std::find(lat.work.begin(), lat.work.end(), w);
    if (it == lat.work.end()) return std::nullopt;
    return static_cast<std::size_t>(it - lat.work.begin());
  };
  for (std::size_t s = 0; s < d; ++s) {
    std::optional<int> interior;
    for (int j = -M; j <= M && !interior; ++j) {
      if (!splittable(j)) continue;
      bool inside = true;
      for (const auto& e : rows[s]) inside = inside && in_window(j + e.shift);
      if (inside) interior = j;
    }
    if (!interior) {
      throw CapacityError("bath window too small: no interior bath level can be split for level " +
                          kernel.initial().label(s) + " (need 2^(M+j) >= 2^D with all images inside the window)");
    }
    const double omega = static_cast<double>(bath.degeneracy(*interior));
    for (const auto& seg : out.segments) {
      if (seg.s != s || seg.j != *interior) continue;
      const std::int64_t w = (seg.j + lat.initial[s]) - (seg.j_prime + lat.final[seg.s_prime]);
      const auto k = work_index(w);
      if (!k || seg.boundary) throw std::logic_error("interior segment does not conserve energy");
      out.induced.add(s, seg.s_prime, *k, static_cast<double>(seg.count) / omega);
    }
  }
  return out;
}

RealizationCheck verify_realization(const PermutationRealization& r, const WorkKernel& input, Exec exec) {
  RealizationCheck check;
  const std::size_t d = r.initial_levels.size();
  const std::size_t dp = r.final_levels.size();
  const std::size_t g = r.work_levels.size();
  const int M = r.bath.half_range;
  const int levels = 2 * M + 1;
  const int D = r.denom_bits;
  auto in_window = [M](std::int64_t j) { return j >= -M && j <= M; };
  auto splittable = [M, D](std::int64_t j) { return M + j >= D; };

  // Source side: segments are sorted, so each level must be tiled from 0 to Omega in order.
  bool sources_tiled = true;
  {
    std::size_t i = 0;
    for (std::size_t s = 0; s < d && sources_tiled; ++s)
      for (int j = -M; j <= M && sources_tiled; ++j) {
        std::uint64_t k = 0;
        while (i < r.segments.size() && r.segments[i].s == s && r.segments[i].j == j) {
          if (r.segments[i].k_begin != k || r.segments[i].count == 0) sources_tiled = false;
          k += r.segments[i].count;
          ++i;
        }
        if (k != r.bath.degeneracy(j)) sources_tiled = false;
      }
    if (i != r.segments.size()) sources_tiled = false;
  }

  // Target side: bucket by block, then check each block is tiled exactly.
  const std::int64_t blocks = static_cast<std::int64_t>(dp) * levels;
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> incoming(static_cast<std::size_t>(blocks));
  bool targets_in_range = true;
  for (const auto& seg : r.segments) {
    if (seg.s_prime >= dp || !in_window(seg.j_prime)) {
      targets_in_range = false;
      continue;
    }
    incoming[seg.s_prime * static_cast<std::size_t>(levels) + static_cast<std::size_t>(seg.j_prime + M)].push_back(
        {seg.k_target, seg.count});
  }
  bool targets_tiled = targets_in_range;
#pragma omp parallel for schedule(static) reduction(&& : targets_tiled) if (exec == Exec::parallel)
  for (std::int64_t b = 0; b < blocks; ++b) {
    auto& list = incoming[static_cast<std::size_t>(b)];
    std::sort(list.begin(), list.end());
    std::uint64_t k = 0;
    for (const auto& [begin, count] : list) {
      if (begin != k) targets_tiled = false;
      k += count;
    }
    if (k != r.bath.degeneracy(static_cast<int>(b % levels) - M)) targets_tiled = false;
  }
  check.bijective = sources_tiled && targets_tiled;

  auto numerator = [&](std::size_t s, std::size_t sp, std::size_t k) { return r.numerators[(s * dp + sp) * g + k]; };
  auto work_index = [&](std::int64_t w) -> std::optional<std::size_t> {
    auto it = std::find(r.work_levels.begin(), r.work_levels.end(), w);
    if (it == r.work_levels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - r.work_levels.begin());
  };

  check.energy_conserved = true;
  for (const auto& seg : r.segments) {
    if (seg.boundary) continue;
    const std::int64_t w = (seg.j + r.initial_levels[seg.s]) - (seg.j_prime + r.final_levels[seg.s_prime]);
    const auto k = work_index(w);
    if (!k || numerator(seg.s, seg.s_prime, *k) == 0) check.energy_conserved = false;
  }

  // Counting identity on interior targets: all preimage levels inside the window and splittable.
  check.counting_identity = true;
  for (std::size_t sp = 0; sp < dp; ++sp) {
    for (int jp = -M; jp <= M; ++jp) {
      bool interior = true;
      u128 incoming_count = 0;
      for (std::size_t s = 0; s < d && interior; ++s)
        for (std::size_t k = 0; k < g; ++k) {
          const std::uint64_t n = numerator(s, sp, k);
          if (n == 0) continue;
          const std::int64_t j = jp + r.final_levels[sp] + r.work_levels[k] - r.initial_levels[s];
          if (!in_window(j) || !splittable(j)) {
            interior = false;
            break;
          }
          incoming_count += u128{n} * u128{r.bath.degeneracy(static_cast<int>(j)) >> D};
        }
      if (!interior) continue;
      ++check.interior_targets;
      if (incoming_count != u128{r.bath.degeneracy(jp)}) check.counting_identity = false;
    }
  }
  if (check.interior_targets == 0) check.counting_identity = false;

  // Every interior source level must split exactly by the dyadic numerators.
  check.induced_matches_dyadic = true;
  std::vector<std::uint64_t> counts(dp * g);
  std::size_t i = 0;
  for (std::size_t s = 0; s < d; ++s) {
    for (int j = -M; j <= M; ++j) {
      std::fill(counts.begin(), counts.end(), 0);
      bool interior = splittable(j);
      const std::size_t first = i;
      while (i < r.segments.size() && r.segments[i].s == s && r.segments[i].j == j) {
        const auto& seg = r.segments[i];
        if (seg.boundary) {
          interior = false;
        } else {
          const std::int64_t w = (seg.j + r.initial_levels[s]) - (seg.j_prime + r.final_levels[seg.s_prime]);
          if (auto k = work_index(w)) counts[seg.s_prime * g + *k] += seg.count;
        }
        ++i;
      }
      if (!interior || i == first) continue;
      ++check.interior_sources;
      const std::uint64_t unit = r.bath.degeneracy(j) >> D;
      for (std::size_t sp = 0; sp < dp; ++sp)
        for (std::size_t k = 0; k < g; ++k) {
          if (counts[sp * g + k] != numerator(s, sp, k) * unit) check.induced_matches_dyadic = false;
        }
    }
  }
  if (check.interior_sources == 0) check.induced_matches_dyadic = false;

  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k) {
        check.max_error_vs_input =
            std::max(check.max_error_vs_input, std::abs(r.induced.at(s, sp, k) - input.at(s, sp, k)));
      }
  return check;
}

WorkKernel random_dyadic_kernel(const EnergySpectrum& initial, const EnergySpectrum& final, const WorkGrid& grid,
                                const ThermalContext& ctx, int denom_bits, std::uint64_t seed) {
  const double delta = std::log(2.0) / ctx.beta();
  if (initial.size() != final.size()) throw DimensionError("dyadic kernels here need equal dimensions");
  if (denom_bits < 2 || denom_bits > kMaxDenomBits) throw ArgumentError("denominator bits must be in [2, 40]");
  const Lattice lat = lattice_of(initial, final, grid, delta);
  const std::size_t d = lat.initial.size();
  const std::size_t g = lat.work.size();
  const std::int64_t scale = std::int64_t{1} << denom_bits;
  auto find_work = [&](std::int64_t w) -> std::optional<std::size_t> {
    auto it = std::find(lat.work.begin(), lat.work.end(), w);
    if (it == lat.work.end()) return std::nullopt;
    return static_cast<std::size_t>(it - lat.work.begin());
  };
  std::vector<std::int64_t> n(d * d * g, 0);
  auto at = [&](std::size_t s, std::size_t sp, std::size_t k) -> std::int64_t& { return n[(s * d + sp) * g + k]; };

  Rng rng(seed);
  // Base: a dyadic mixture of level permutations, each with the work that
  // makes the Gibbs factor exactly 1.
  const int perms = 1 + static_cast<int>(rng.below(3));
  std::int64_t remaining = scale;
  for (int p = 0; p < perms; ++p) {
    const std::int64_t weight =
        p + 1 == perms ? remaining : 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(remaining)));
    std::vector<std::size_t> sigma(d);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (std::size_t i = d; i > 1; --i) std::swap(sigma[i - 1], sigma[rng.below(i)]);
    if (p == 0) std::iota(sigma.begin(), sigma.end(), 0);  // identity is always available
    std::vector<std::size_t> ks(d);
    bool ok = true;
    for (std::size_t s = 0; s < d && ok; ++s) {
      const auto k = find_work(lat.initial[s] - lat.final[sigma[s]]);
      ok = k.has_value();
      if (ok) ks[s] = *k;
    }
    if (!ok) {
      if (p == 0) throw PreconditionError("grid must contain every E_s - E'_s difference");
      continue;
    }
    for (std::size_t s = 0; s < d; ++s) at(s, sigma[s], ks[s]) += weight;
    remaining -= weight;
    if (remaining == 0) break;
  }
  if (remaining > 0) {
    for (std::size_t s = 0; s < d; ++s) at(s, s, *find_work(lat.initial[s] - lat.final[s])) += remaining;
  }

  // Exact moves that keep both row sums and weighted column sums unchanged.
  const int moves = static_cast<int>(8 * d * g);
  for (int m = 0; m < moves; ++m) {
    if (rng.below(2) == 0 || d < 2) {
      // (+x, -3x, +2x) at work levels (w+1, w, w-1) of one (s, s').
      const std::size_t s = rng.below(d);
      const std::size_t sp = rng.below(d);
      const std::size_t k = rng.below(g);
      const auto up = find_work(lat.work[k] + 1);
      const auto down = find_work(lat.work[k] - 1);
      if (!up || !down) continue;
      if (rng.below(2) == 0) {
        const std::int64_t cap = at(s, sp, k) / 3;
        if (cap < 1) continue;
        const std::int64_t x = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cap)));
        at(s, sp, *up) += x;
        at(s, sp, k) -= 3 * x;
        at(s, sp, *down) += 2 * x;
      } else {
        const std::int64_t cap = std::min(at(s, sp, *up), at(s, sp, *down) / 2);
        if (cap < 1) continue;
        const std::int64_t x = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cap)));
        at(s, sp, *up) -= x;
        at(s, sp, k) += 3 * x;
        at(s, sp, *down) -= 2 * x;
      }
    } else {
      // Two rows a, b exchange mass between columns 1, 2 with matched Gibbs exponents.
      const std::size_t a = rng.below(d);
      const std::size_t b = (a + 1 + rng.below(d - 1)) % d;
      const std::size_t c1 = rng.below(d);
      const std::size_t c2 = (c1 + 1 + rng.below(d - 1)) % d;
      const std::size_t k1 = rng.below(g);
      const std::size_t k2 = rng.below(g);
      const std::int64_t offset = lat.initial[b] - lat.initial[a];
      const auto k4 = find_work(lat.work[k1] + offset);
      const auto k3 = find_work(lat.work[k2] + offset);
      if (!k3 || !k4) continue;
      const std::int64_t cap = std::min(at(a, c1, k1), at(b, c2, *k3));
      if (cap < 1) continue;
      const std::int64_t t = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cap)));
      at(a, c1, k1) -= t;
      at(a, c2, k2) += t;
      at(b, c2, *k3) -= t;
      at(b, c1, *k4) += t;
    }
  }

  std::vector<std::uint64_t> numerators(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 0) throw std::logic_error("dyadic move produced a negative entry");
    numerators[i] = static_cast<std::uint64_t>(n[i]);
  }
  if (!dyadic_gibbs_exact(numerators, lat, denom_bits)) throw std::logic_error("dyadic kernel lost exactness");

  WorkKernel kernel(initial, final, grid);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < d; ++sp)
      for (std::size_t k = 0; k < g; ++k)
        if (at(s, sp, k) > 0) kernel.set(s, sp, k, std::ldexp(static_cast<double>(at(s, sp, k)), -denom_bits));
  return kernel;
}

}  // namespace fluctwork
