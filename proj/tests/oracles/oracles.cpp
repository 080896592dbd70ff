#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Slot {
  std::size_t item;
  std::size_t t;
  double supply;
  std::vector<std::size_t> buyers;
};

std::vector<Slot> slots_of(const MarketInstance& inst) {
  std::vector<Slot> out;
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    for (std::size_t t = 0; t < inst.num_periods(); ++t) {
      Slot s{j, t, inst.items[j].supply_per_period[t], {}};
      for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
        if (inst.valuations.value(i, j) > 0.0) s.buyers.push_back(i);
      }
      if (!s.buyers.empty()) out.push_back(std::move(s));
    }
  }
  return out;
}

double period_value(const MarketInstance& inst, const Allocation& x, std::size_t i, std::size_t t) {
  double v = 0.0;
  for (std::size_t j = 0; j < inst.num_items(); ++j) v += inst.valuations.value(i, j) * x.at(i, j, t);
  return v;
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  if (flo * f(hi) > 0.0) throw std::invalid_argument("bisect: no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                                double h) {
  std::vector<double> g(x.size()), y(x.begin(), x.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double step = h * std::max(1.0, std::fabs(x[k]));
    y[k] = x[k] + step;
    const double up = f(y);
    y[k] = x[k] - step;
    const double down = f(y);
    y[k] = x[k];
    g[k] = (up - down) / (2.0 * step);
  }
  return g;
}

double objective(const MarketInstance& inst, const Allocation& x, Objective kind) {
  const std::size_t T = inst.num_periods();
  double f = 0.0;
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    const auto& b = inst.buyers[i];
    if (kind == Objective::geo_mean) {
      for (std::size_t t = 0; t < T; ++t) {
        const double u = period_value(inst, x, i, t) - b.demand[t];
        if (u <= 0.0) return kNegInf;
        f += b.budget / static_cast<double>(T) * std::log(u);
      }
    } else {
      double u = -b.total_demand();
      for (std::size_t t = 0; t < T; ++t) u += period_value(inst, x, i, t);
      if (u <= 0.0) return kNegInf;
      f += b.budget * std::log(u);
    }
  }
  return f;
}

std::vector<double> sorted_r(const MarketInstance& inst, const Allocation& x, Profile profile) {
  std::vector<double> r;
  const std::size_t T = inst.num_periods();
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    const auto& b = inst.buyers[i];
    auto push = [&](double u) { r.push_back(u > 0.0 ? std::pow(u, b.budget) : kNegInf); };
    if (profile == Profile::time_indexed) {
      for (std::size_t t = 0; t < T; ++t) push(period_value(inst, x, i, t) - b.demand[t]);
    } else {
      double u = -b.total_demand();
      for (std::size_t t = 0; t < T; ++t) u += period_value(inst, x, i, t);
      push(u);
    }
  }
  std::sort(r.begin(), r.end());
  return r;
}

std::size_t free_dims(const MarketInstance& inst) {
  std::size_t d = 0;
  for (const auto& s : slots_of(inst)) d += s.buyers.size() - 1;
  return d;
}

bool grid_supported(const MarketInstance& inst) {
  for (const auto& it : inst.items) {
    double sum = 0.0;
    for (double s : it.supply_per_period) sum += s;
    if (it.supply_total < sum - 1e-12) return false;
  }
  return true;
}

std::size_t for_each_allocation(const MarketInstance& inst, double step, const std::function<void(const Allocation&)>& fn,
                                const std::vector<double>* center, double radius) {
  const auto slots = slots_of(inst);
  // One coordinate per (slot, non-last buyer), as a share of the slot supply.
  struct Coord {
    std::size_t slot;
    std::size_t buyer;
    long lo, hi;
  };
  std::vector<Coord> coords;
  const long levels = std::lround(1.0 / step);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    for (std::size_t k = 0; k + 1 < slots[s].buyers.size(); ++k) {
      Coord c{s, slots[s].buyers[k], 0, levels};
      if (center) {
        const double mid = (*center)[coords.size()];
        c.lo = std::max(0L, std::lround((mid - radius) / step));
        c.hi = std::min(levels, std::lround((mid + radius) / step));
      }
      coords.push_back(c);
    }
  }
  Allocation x(inst.num_buyers(), inst.num_items(), inst.num_periods());
  std::vector<long> used(slots.size(), 0);
  std::size_t visited = 0;

  auto finish = [&]() {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      x.at(slots[s].buyers.back(), slots[s].item, slots[s].t) =
          static_cast<double>(levels - used[s]) / static_cast<double>(levels) * slots[s].supply;
    }
    ++visited;
    fn(x);
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == coords.size()) {
      finish();
      return;
    }
    const auto& c = coords[k];
    const auto& slot = slots[c.slot];
    for (long l = c.lo; l <= c.hi && used[c.slot] + l <= levels; ++l) {
      used[c.slot] += l;
      x.at(c.buyer, slot.item, slot.t) = static_cast<double>(l) / static_cast<double>(levels) * slot.supply;
      rec(k + 1);
      used[c.slot] -= l;
    }
  };
  rec(0);
  return visited;
}

namespace {

// Shares of the non-last buyers, in coordinate order.
std::vector<double> shares_of(const MarketInstance& inst, const Allocation& x) {
  std::vector<double> out;
  for (const auto& s : slots_of(inst)) {
    for (std::size_t k = 0; k + 1 < s.buyers.size(); ++k) out.push_back(x.at(s.buyers[k], s.item, s.t) / s.supply);
  }
  return out;
}

}  // namespace

GridBest grid_objective(const MarketInstance& inst, Objective kind, double step) {
  GridBest best{kNegInf, {}, 0};
  auto visit = [&](const Allocation& x) {
    const double f = objective(inst, x, kind);
    if (f > best.value) {
      best.value = f;
      best.x = x;
    }
  };
  if (free_dims(inst) <= 2) {
    best.points = for_each_allocation(inst, step, visit);
    return best;
  }
  const double coarse = 1e-2;
  best.points = for_each_allocation(inst, coarse, visit);
  const auto center = shares_of(inst, best.x);
  best.points += for_each_allocation(inst, step, visit, &center, 2.0 * coarse);
  return best;
}

std::optional<std::vector<double>> grid_leximin_counterexample(const MarketInstance& inst, Profile profile,
                                                               const std::vector<double>& reference, double step,
                                                               double tol, double tol_prefix) {
  std::optional<std::vector<double>> found;
  for_each_allocation(inst, step, [&](const Allocation& x) {
    if (found) return;
    const auto g = sorted_r(inst, x, profile);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g[k] > reference[k] + tol) {
        found = g;
        return;
      }
      if (g[k] < reference[k] - tol_prefix) return;
    }
  });
  return found;
}

}  // namespace oracle
