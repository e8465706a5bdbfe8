#pragma once

#include "irbeacon/image.hpp"

#include <array>

namespace irb {

/// Grayscale central moments up to third order.
///
/// Coordinates are pixel indices; the centroid is expressed in the
/// coordinates of the view the moments were computed on.
struct CentralMoments {
    double m00 = 0;
    double xbar = 0;
    double ybar = 0;
    double mu20 = 0, mu11 = 0, mu02 = 0;
    double mu30 = 0, mu21 = 0, mu12 = 0, mu03 = 0;
    double peak = 0;  // largest pixel intensity

    /// mu_ij for i + j in {0, 2, 3} or (1, 1); first-order central moments are 0.
    double mu(int i, int j) const;
};

/// Throws DegeneratePatch if every pixel is zero.
CentralMoments central_moments(GrayView patch);

/// Single central moment mu_ij of the patch (i + j <= 3).
double central_moment(GrayView patch, int i, int j);

/// The seven Hu invariants.
struct HuFeature {
    std::array<double, 7> c{};

    double operator[](std::size_t i) const { return c[i]; }
};

/// Intensity level the patch is rescaled to before normalization.
///
/// Normalized central moments of a grayscale patch scale with its brightness
/// (eta_ij ~ k^-(i+j)/2), so dim distant beacons and saturated near ones would
/// land far apart. Rescaling every patch to the same peak removes that
/// dependence and keeps the invariants comparable across range.
inline constexpr double kHuPeakLevel = 20.0;

HuFeature hu_features(const CentralMoments& m);
HuFeature hu_features(GrayView patch);

/// Invariants below this fraction of c1^p (p = polynomial degree of c_i in
/// eta) are treated as zero: they only carry rounding noise.
inline constexpr double kHuZeroTolerance = 1e-12;

/// Shape distance  sum_i |1/m_i(a) - 1/m_i(b)|  with m = sgn(c) log10|c|.
/// Terms where either invariant is zero are skipped. Symmetric in a, b.
double hu_distance(const HuFeature& a, const HuFeature& b);
double hu_distance(GrayView patch, GrayView reference);

} // namespace irb
