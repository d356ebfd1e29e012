#pragma once

#include <string>

#include "tds/sdp.hpp"
#include "tds/system.hpp"

namespace tds {

enum class TheoremKind { Thm41, Thm42, Cor41 };

enum class SearchStatus { Ok, NotStable, Ambiguous };

struct SearchResult {
  SearchStatus status = SearchStatus::NotStable;
  double value = 0.0;        // sigma, h2_max, or unused for interval mode
  double lo = 0.0, hi = 0.0; // final bisection bracket (or interval endpoints)
  // Post-hoc boundary checks: feasibility held at `value` (scaled back to the
  // bisected parameter) and failed one tolerance above it.
  bool boundary_feasible = false;
  bool boundary_infeasible_above = false;
  std::string diagnostic;
};

struct SearchSettings {
  SdpSettings sdp;
  int prescan_points = 20;
  double alpha_floor = 1e-6;
};

// Largest certified alpha via bisection; returns sigma = alpha/2.
SearchResult max_decay_rate(const SystemModel& system, TheoremKind theorem,
                            double alpha_hi, double tol,
                            const SearchSettings& settings = {});

// Largest h2 for which Corollary 4.1 stays feasible at fixed system.h1.
SearchResult max_upper_delay(const SystemModel& system, double h2_hi, double tol,
                             const SearchSettings& settings = {});

// Feasible constant-delay interval of Theorem 4.1 at fixed alpha: coarse scan
// over [h_lo, h_hi] then bisection on both endpoints.
SearchResult feasible_delay_interval(const SystemModel& system, double alpha,
                                     double h_lo, double h_hi, double tol,
                                     const SearchSettings& settings = {});

}  // namespace tds
