#include "modsim/metrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace modsim::metrics {

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_t_test needs at least two values per sample");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double ma = 0, mb = 0;
    for (double v : a) ma += v;
    for (double v : b) mb += v;
    ma /= na;
    mb /= nb;
    double va = 0, vb = 0;
    for (double v : a) va += (v - ma) * (v - ma);
    for (double v : b) vb += (v - mb) * (v - mb);
    va /= na - 1;
    vb /= nb - 1;

    TTestResult r;
    const double se2 = va / na + vb / nb;
    if (se2 <= 0.0) {
        r.df = na + nb - 2;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 /
           (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
    const boost::math::students_t dist(r.df);
    r.p = 2.0 * boost::math::cdf(dist, -std::fabs(r.t));
    return r;
}

MedianTestResult median_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() + b.size() < 4) {
        throw std::invalid_argument("median_test needs at least four values combined");
    }
    std::vector<double> all;
    all.reserve(a.size() + b.size());
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    const std::size_t n = all.size();
    MedianTestResult r;
    r.grand_median = (n % 2 == 1) ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);

    const std::vector<double>* samples[2] = {&a, &b};
    for (int s = 0; s < 2; ++s) {
        for (double v : *samples[s]) {
            if (v > r.grand_median) ++r.table[0][s];
            else ++r.table[1][s];
        }
    }

    const double row0 = static_cast<double>(r.table[0][0] + r.table[0][1]);
    const double row1 = static_cast<double>(r.table[1][0] + r.table[1][1]);
    const double col0 = static_cast<double>(r.table[0][0] + r.table[1][0]);
    const double col1 = static_cast<double>(r.table[0][1] + r.table[1][1]);
    const double total = row0 + row1;
    if (row0 == 0 || row1 == 0 || col0 == 0 || col1 == 0) {
        r.chi_square = 0.0;
        r.p = 1.0;
        return r;
    }
    const double rows[2] = {row0, row1};
    const double cols[2] = {col0, col1};
    double chi = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double expected = rows[i] * cols[j] / total;
            const double d = std::max(std::fabs(r.table[i][j] - expected) - 0.5, 0.0);
            chi += d * d / expected;
        }
    }
    r.chi_square = chi;
    const boost::math::chi_squared dist(1.0);
    r.p = boost::math::cdf(boost::math::complement(dist, chi));
    return r;
}

} // namespace modsim::metrics
