#pragma once

#include <span>
#include <vector>

namespace seqdac {

// Mean distance from each reference point to its nearest approximation
// point. Lower is better. Throws when either set is empty.
double igd(const std::vector<std::vector<double>>& approximation,
           const std::vector<std::vector<double>>& reference);

// Exact volume dominated by `points` with respect to `reference` (all
// objectives minimized). Points not strictly below the reference in every
// coordinate contribute nothing beyond their clipped box. Supports m <= 3.
double hypervolume(const std::vector<std::vector<double>>& points,
                   std::span<const double> reference);

// true when a dominates b (<= everywhere, < somewhere)
bool dominates(std::span<const double> a, std::span<const double> b);

} // namespace seqdac
