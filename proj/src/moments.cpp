#include "irbeacon/moments.hpp"

#include "irbeacon/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace irb {

double CentralMoments::mu(int i, int j) const {
    switch (i * 4 + j) {
    case 0: return m00;
    case 1:
    case 4: return 0.0;
    case 2: return mu02;
    case 5: return mu11;
    case 8: return mu20;
    case 3: return mu03;
    case 6: return mu12;
    case 9: return mu21;
    case 12: return mu30;
    default: throw UsageError("central moment order must be <= 3");
    }
}

CentralMoments central_moments(GrayView patch) {
    // Restrict to the tight box of nonzero pixels so that zero padding around
    // a shape never changes the floating-point summation.
    int x0 = patch.width(), y0 = patch.height(), x1 = -1, y1 = -1;
    std::int64_t s00 = 0, s10 = 0, s01 = 0;
    int peak = 0;
    for (int y = 0; y < patch.height(); ++y)
        for (int x = 0; x < patch.width(); ++x) {
            const int v = patch(x, y);
            if (!v) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
            s00 += v;
            peak = std::max(peak, v);
        }
    if (s00 == 0) throw DegeneratePatch();
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const int v = patch(x, y);
            s10 += static_cast<std::int64_t>(x - x0) * v;
            s01 += static_cast<std::int64_t>(y - y0) * v;
        }

    CentralMoments m;
    m.m00 = static_cast<double>(s00);
    m.peak = peak;
    const double cx = static_cast<double>(s10) / m.m00;
    const double cy = static_cast<double>(s01) / m.m00;
    for (int y = y0; y <= y1; ++y) {
        const double dy = (y - y0) - cy;
        for (int x = x0; x <= x1; ++x) {
            const int v = patch(x, y);
            if (!v) continue;
            const double dx = (x - x0) - cx;
            const double w = v;
            const double dx2 = dx * dx, dy2 = dy * dy;
            m.mu20 += dx2 * w;
            m.mu02 += dy2 * w;
            m.mu11 += dx * dy * w;
            m.mu30 += dx2 * dx * w;
            m.mu03 += dy2 * dy * w;
            m.mu21 += dx2 * dy * w;
            m.mu12 += dx * dy2 * w;
        }
    }
    m.xbar = x0 + cx;
    m.ybar = y0 + cy;
    return m;
}

double central_moment(GrayView patch, int i, int j) {
    if (i < 0 || j < 0 || i + j > 3) throw UsageError("central moment order must be <= 3");
    return central_moments(patch).mu(i, j);
}

HuFeature hu_features(const CentralMoments& m) {
    // Brightness rescale by k = kHuPeakLevel / peak, folded into eta.
    const double k = kHuPeakLevel / m.peak;
    const double m00 = m.m00 * k;
    const double n2 = m00 * m00;
    const double n3 = std::pow(m00, 2.5);
    const double n20 = m.mu20 * k / n2, n02 = m.mu02 * k / n2, n11 = m.mu11 * k / n2;
    const double n30 = m.mu30 * k / n3, n03 = m.mu03 * k / n3;
    const double n21 = m.mu21 * k / n3, n12 = m.mu12 * k / n3;

    const double a = n30 + n12, b = n21 + n03;
    const double p = n30 - 3 * n12, q = 3 * n21 - n03;
    HuFeature h;
    h.c[0] = n20 + n02;
    h.c[1] = (n20 - n02) * (n20 - n02) + 4 * n11 * n11;
    h.c[2] = p * p + q * q;
    h.c[3] = a * a + b * b;
    h.c[4] = p * a * (a * a - 3 * b * b) + q * b * (3 * a * a - b * b);
    h.c[5] = (n20 - n02) * (a * a - b * b) + 4 * n11 * a * b;
    h.c[6] = q * a * (a * a - 3 * b * b) - p * b * (3 * a * a - b * b);
    return h;
}

HuFeature hu_features(GrayView patch) { return hu_features(central_moments(patch)); }

namespace {

constexpr std::array<int, 7> kHuDegree{1, 2, 3, 3, 6, 4, 6};

bool vanishes(const HuFeature& h, std::size_t i) {
    return std::abs(h.c[i]) <= kHuZeroTolerance * std::pow(std::abs(h.c[0]), kHuDegree[i]);
}

} // namespace

double hu_distance(const HuFeature& a, const HuFeature& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
        if (a.c[i] == 0.0 || b.c[i] == 0.0 || vanishes(a, i) || vanishes(b, i)) continue;
        const double ma = std::copysign(std::log10(std::abs(a.c[i])), a.c[i]);
        const double mb = std::copysign(std::log10(std::abs(b.c[i])), b.c[i]);
        if (ma == 0.0 || mb == 0.0) continue;
        d += std::abs(1.0 / ma - 1.0 / mb);
    }
    return d;
}

double hu_distance(GrayView patch, GrayView reference) {
    return hu_distance(hu_features(patch), hu_features(reference));
}

} // namespace irb
