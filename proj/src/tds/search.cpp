#include "tds/search.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tds/lmi.hpp"

namespace tds {

namespace {

bool feasible_at(const SystemModel& system, TheoremKind theorem, double alpha,
                 const SdpSettings& sdp) {
  LmiProblem p;
  switch (theorem) {
    case TheoremKind::Thm41:
      p = build_theorem41(system, alpha);
      break;
    case TheoremKind::Thm42:
      p = build_theorem42(system, alpha);
      break;
    case TheoremKind::Cor41:
      p = build_corollary41(system);
      break;
  }
  return check_feasible(p, sdp).verdict == Verdict::Feasible;
}

// Bisects the boundary of a predicate that is true at lo and false at hi.
double bisect(std::function<bool(double)> pred, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

SearchResult max_decay_rate(const SystemModel& system, TheoremKind theorem,
                            double alpha_hi, double tol,
                            const SearchSettings& settings) {
  if (!(tol > 0.0) || !(alpha_hi > settings.alpha_floor))
    throw std::domain_error("max_decay_rate: bad bracket or tolerance");
  if (theorem == TheoremKind::Cor41)
    throw std::domain_error("max_decay_rate: Corollary 4.1 is alpha-free");

  auto feas = [&](double a) { return feasible_at(system, theorem, a, settings.sdp); };

  SearchResult res;
  if (!feas(settings.alpha_floor)) {
    res.status = SearchStatus::NotStable;
    res.diagnostic = "infeasible at alpha floor";
    return res;
  }

  // Monotonicity guard: the feasible alphas must form a prefix of the grid.
  const int k = settings.prescan_points;
  int last_feasible = 0;
  bool seen_infeasible = false;
  for (int i = 1; i <= k; ++i) {
    const double a = settings.alpha_floor +
                     (alpha_hi - settings.alpha_floor) * i / static_cast<double>(k);
    if (feas(a)) {
      if (seen_infeasible) {
        res.status = SearchStatus::Ambiguous;
        res.diagnostic = "non-monotone feasibility pattern over alpha grid";
        return res;
      }
      last_feasible = i;
    } else {
      seen_infeasible = true;
    }
  }

  double lo = settings.alpha_floor +
              (alpha_hi - settings.alpha_floor) * last_feasible / static_cast<double>(k);
  if (last_feasible == k) {
    res.status = SearchStatus::Ok;
    res.value = alpha_hi / 2.0;
    res.lo = res.hi = alpha_hi;
    res.boundary_feasible = true;
    res.diagnostic = "feasible up to alpha_hi; enlarge the bracket for a tight bound";
    return res;
  }
  double hi = settings.alpha_floor +
              (alpha_hi - settings.alpha_floor) * (last_feasible + 1) /
                  static_cast<double>(k);
  const double alpha_star = bisect(feas, lo, hi, tol);

  res.status = SearchStatus::Ok;
  res.value = alpha_star / 2.0;
  res.lo = alpha_star;
  res.hi = alpha_star + tol;
  res.boundary_feasible = feas(alpha_star);
  res.boundary_infeasible_above = !feas(alpha_star + tol);
  return res;
}

SearchResult max_upper_delay(const SystemModel& system, double h2_hi, double tol,
                             const SearchSettings& settings) {
  if (system.kind != SystemModel::Kind::IntervalDelay)
    throw std::domain_error("max_upper_delay: interval-delay system required");
  if (h2_hi < system.h1) throw std::domain_error("max_upper_delay: h2_hi < h1");
  if (!(tol > 0.0)) throw std::domain_error("max_upper_delay: bad tolerance");

  auto feas = [&](double h2) {
    SystemModel s = system;
    s.h2 = h2;
    return feasible_at(s, TheoremKind::Cor41, 0.0, settings.sdp);
  };

  SearchResult res;
  const double floor = system.h1 + tol;
  if (!feas(floor)) {
    res.status = SearchStatus::NotStable;
    res.diagnostic = "infeasible at h2 = h1 + tol";
    return res;
  }
  if (feas(h2_hi)) {
    res.status = SearchStatus::Ok;
    res.value = h2_hi;
    res.lo = res.hi = h2_hi;
    res.boundary_feasible = true;
    res.diagnostic = "feasible up to h2_hi; enlarge the bracket for a tight bound";
    return res;
  }
  const double h2 = bisect(feas, floor, h2_hi, tol);
  res.status = SearchStatus::Ok;
  res.value = h2;
  res.lo = h2;
  res.hi = h2 + tol;
  res.boundary_feasible = feas(h2);
  res.boundary_infeasible_above = !feas(h2 + tol);
  return res;
}

SearchResult feasible_delay_interval(const SystemModel& system, double alpha,
                                     double h_lo, double h_hi, double tol,
                                     const SearchSettings& settings) {
  if (system.kind != SystemModel::Kind::ConstantDelay)
    throw std::domain_error("feasible_delay_interval: constant-delay system required");
  if (!(h_hi > h_lo) || !(h_lo > 0.0) || !(tol > 0.0))
    throw std::domain_error("feasible_delay_interval: bad range or tolerance");

  auto feas = [&](double h) {
    SystemModel s = system;
    s.h = h;
    return feasible_at(s, TheoremKind::Thm41, alpha, settings.sdp);
  };

  SearchResult res;
  const int steps = 100;
  std::vector<int> feasible_idx;
  std::vector<bool> flags(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double h = h_lo + (h_hi - h_lo) * i / steps;
    flags[i] = feas(h);
    if (flags[i]) feasible_idx.push_back(i);
  }
  if (feasible_idx.empty()) {
    res.status = SearchStatus::NotStable;
    res.diagnostic = "no feasible h in scan range";
    return res;
  }
  for (size_t j = 1; j < feasible_idx.size(); ++j) {
    if (feasible_idx[j] != feasible_idx[j - 1] + 1) {
      res.status = SearchStatus::Ambiguous;
      res.diagnostic = "non-contiguous feasible set in scan";
      return res;
    }
  }
  const double step = (h_hi - h_lo) / steps;
  const int first = feasible_idx.front(), last = feasible_idx.back();
  double hmin = h_lo + first * step;
  double hmax = h_lo + last * step;
  if (first > 0) {
    // Lower boundary: infeasible at lo, feasible at hi; keep the feasible end.
    double lo = h_lo + (first - 1) * step, hi = hmin;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (feas(mid) ? hi : lo) = mid;
    }
    hmin = hi;
  }
  if (last < steps)
    hmax = bisect(feas, hmax, hmax + step, tol);

  res.status = SearchStatus::Ok;
  res.lo = hmin;
  res.hi = hmax;
  res.boundary_feasible = feas(hmax);
  res.boundary_infeasible_above = (last == steps) || !feas(hmax + tol);
  return res;
}

}  // namespace tds
