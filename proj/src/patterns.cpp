#include "greedy_colloc/patterns.hpp"

#include "greedy_colloc/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace gcol {
namespace {

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double upper = v[mid];
    return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

    std::size_t components() {
        std::size_t count = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) count += find(i) == i ? 1 : 0;
        return count;
    }

private:
    std::vector<std::size_t> parent_;
};

void check_values(const Vector& values, std::size_t n) {
    if (static_cast<std::size_t>(values.size()) != n) throw ShapeError("one value per point is required");
    if (!values.allFinite()) throw DomainError("pattern values must be finite");
}

double threshold(const Vector& values, const SpotOptions& options) {
    const double mean = values.mean();
    return mean + options.threshold_fraction * (values.maxCoeff() - mean);
}

// Counts clusters of local maxima given a pairwise distance.
template <typename Distance>
int count_maxima(const Vector& values, double radius, double cut, Distance distance) {
    const auto n = static_cast<std::size_t>(values.size());
    std::vector<std::size_t> maxima;
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = values(static_cast<Index>(i));
        if (!(vi > cut)) continue;
        bool is_max = true;
        for (std::size_t j = 0; j < n && is_max; ++j) {
            if (j != i && distance(i, j) <= radius && values(static_cast<Index>(j)) >= vi) is_max = false;
        }
        if (is_max) maxima.push_back(i);
    }
    DisjointSets sets(maxima.size());
    for (std::size_t a = 0; a < maxima.size(); ++a) {
        for (std::size_t b = a + 1; b < maxima.size(); ++b) {
            if (distance(maxima[a], maxima[b]) <= radius) sets.unite(a, b);
        }
    }
    return static_cast<int>(sets.components());
}

}  // namespace

double median_nearest_neighbor_spacing(const PointCloud& cloud) {
    if (cloud.size() < 2) throw DomainError("nearest-neighbour spacing needs at least two points");
    std::vector<double> nearest(cloud.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            const double d = (cloud.points[i] - cloud.points[j]).norm();
            nearest[i] = std::min(nearest[i], d);
            nearest[j] = std::min(nearest[j], d);
        }
    }
    return median(nearest);
}

int count_spots(const PointCloud& cloud, const Vector& values, const SpotOptions& options) {
    check_values(values, cloud.size());
    if (cloud.size() < 2 || values.maxCoeff() == values.minCoeff()) return 0;
    const double radius = options.radius_factor * median_nearest_neighbor_spacing(cloud);
    return count_maxima(values, radius, threshold(values, options), [&](std::size_t i, std::size_t j) {
        return (cloud.points[i] - cloud.points[j]).norm();
    });
}

int count_curve_peaks(const PointCloud& curve, const Vector& values, const SpotOptions& options) {
    check_values(values, curve.size());
    if (curve.size() < 3 || values.maxCoeff() == values.minCoeff()) return 0;
    Point centroid = Point::Zero();
    for (const Point& p : curve.points) centroid += p;
    centroid /= static_cast<double>(curve.size());
    std::vector<double> angle(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Point d = curve.points[i] - centroid;
        angle[i] = std::atan2(d.y(), d.x());
    }
    auto arc = [&](std::size_t i, std::size_t j) {
        const double d = std::abs(angle[i] - angle[j]);
        return std::min(d, 2.0 * std::numbers::pi - d);
    };

    std::vector<double> sorted = angle;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> gaps(sorted.size());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) gaps[i] = sorted[i + 1] - sorted[i];
    gaps.back() = sorted.front() + 2.0 * std::numbers::pi - sorted.back();
    const double radius = options.radius_factor * median(gaps);
    return count_maxima(values, radius, threshold(values, options), arc);
}

bool is_nontrivial_pattern(const Vector& values, double fraction) {
    if (values.size() == 0) return false;
    const double mean = values.mean();
    const double variance = (values.array() - mean).square().mean();
    return variance > fraction * mean * mean;
}

}  // namespace gcol
