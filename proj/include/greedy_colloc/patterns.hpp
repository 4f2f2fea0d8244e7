#pragma once

#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/types.hpp"

namespace gcol {

struct SpotOptions {
    /// Neighbourhood radius in units of the median nearest-neighbour spacing.
    double radius_factor = 3.0;
    /// A maximum counts only above mean + threshold_fraction * (max - mean).
    double threshold_fraction = 0.5;
};

/// Median over points of the distance to the closest other point.
double median_nearest_neighbor_spacing(const PointCloud& cloud);

/// Clusters of local maxima: a point qualifies when it exceeds every neighbour within the
/// radius and the threshold; qualifying points within the radius of each other merge.
/// A constant field has no spots. Throws DomainError on non-finite values.
int count_spots(const PointCloud& cloud, const Vector& values, const SpotOptions& options = {});

/// Peaks of the trace of `values` against the polar angle about the centroid of a closed
/// planar curve, with the same rules measured in angle along the cyclic trace.
int count_curve_peaks(const PointCloud& curve, const Vector& values, const SpotOptions& options = {});

/// Population variance of `values` exceeds `fraction` times the squared mean.
bool is_nontrivial_pattern(const Vector& values, double fraction = 0.01);

}  // namespace gcol
