#include "seqdac/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqdac {

double igd(const std::vector<std::vector<double>>& approximation,
           const std::vector<std::vector<double>>& reference) {
    if (approximation.empty() || reference.empty())
        throw std::invalid_argument("igd: empty point set");
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approximation) {
            double d2 = 0.0;
            for (size_t j = 0; j < r.size(); ++j) {
                double diff = a[j] - r[j];
                d2 += diff * diff;
            }
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strict = false;
    for (size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

namespace {

// Union of rectangles [p, ref] in 2D via a sweep over f1; expects callers to
// have dropped points outside the reference box.
double hv2d(std::vector<std::pair<double, double>> pts, double ref0, double ref1) {
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double prev_f2 = ref1;
    for (const auto& [f1, f2] : pts) {
        if (f2 >= prev_f2) continue; // dominated in this sweep
        area += (ref0 - f1) * (prev_f2 - f2);
        prev_f2 = f2;
    }
    return area;
}

} // namespace

double hypervolume(const std::vector<std::vector<double>>& points,
                   std::span<const double> reference) {
    size_t m = reference.size();
    if (m < 1 || m > 3)
        throw std::invalid_argument("hypervolume: supports 1 to 3 objectives");

    std::vector<std::vector<double>> inside;
    for (const auto& p : points) {
        if (p.size() != m) throw std::invalid_argument("hypervolume: dim mismatch");
        bool ok = true;
        for (size_t j = 0; j < m; ++j)
            if (p[j] >= reference[j]) ok = false;
        if (ok) inside.push_back(p);
    }
    if (inside.empty()) return 0.0;

    if (m == 1) {
        double best = inside[0][0];
        for (const auto& p : inside) best = std::min(best, p[0]);
        return reference[0] - best;
    }

    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(inside.size());
        for (const auto& p : inside) pts.emplace_back(p[0], p[1]);
        return hv2d(std::move(pts), reference[0], reference[1]);
    }

    // m == 3: slice along f3. Between consecutive f3 levels the dominated
    // cross-section is the 2D union of all points at or below the slab.
    std::sort(inside.begin(), inside.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });
    std::vector<double> levels;
    for (const auto& p : inside) levels.push_back(p[2]);
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    levels.push_back(reference[2]);

    double volume = 0.0;
    std::vector<std::pair<double, double>> active;
    size_t next = 0;
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
        while (next < inside.size() && inside[next][2] <= levels[li]) {
            active.emplace_back(inside[next][0], inside[next][1]);
            ++next;
        }
        double slab = levels[li + 1] - levels[li];
        if (slab > 0.0)
            volume += slab * hv2d(active, reference[0], reference[1]);
    }
    return volume;
}

} // namespace seqdac
