#include <doctest.h>

#include <vector>

#include "modsim/metrics/stats.hpp"

using namespace modsim;
using doctest::Approx;

namespace {

std::vector<double> seq(int lo, int hi, double scale = 1.0) {
    std::vector<double> v;
    for (int i = lo; i <= hi; ++i) v.push_back(scale * i);
    return v;
}

} // namespace

// Expected values below are frozen from scipy.stats.ttest_ind(equal_var=False)
// and scipy.stats.median_test(ties="below", correction=True).

TEST_CASE("welch t test reference vectors") {
    auto r = metrics::welch_t_test({10, 12, 14, 16}, {20, 22, 24, 26});
    CHECK(r.t == Approx(-5.477226).epsilon(1e-4));
    CHECK(r.df == Approx(6.0).epsilon(1e-4));
    CHECK(r.p == Approx(0.00154742).epsilon(1e-4));

    r = metrics::welch_t_test({2.1, 2.5, 2.3, 2.7}, {3.1, 3.5, 3.3});
    CHECK(r.t == Approx(-5.196152).epsilon(1e-4));
    CHECK(r.df == Approx(4.959184).epsilon(1e-4));
    CHECK(r.p == Approx(0.00356206).epsilon(1e-4));

    r = metrics::welch_t_test({12.1, 14.3, 9.8, 11.2, 13.4, 10.9}, {15.2, 13.8, 16.1, 14.9});
    CHECK(r.t == Approx(-3.673100).epsilon(1e-4));
    CHECK(r.df == Approx(7.919934).epsilon(1e-4));
    CHECK(r.p == Approx(0.00639190).epsilon(1e-4));

    r = metrics::welch_t_test(seq(1, 30), seq(1, 20, 1.5));
    CHECK(r.t == Approx(-0.097901).epsilon(1e-4));
    CHECK(r.df == Approx(40.646660).epsilon(1e-4));
    CHECK(r.p == Approx(0.92249186).epsilon(1e-4));

    r = metrics::welch_t_test({0.5, 0.9, 1.7, 2.2, 3.1, 0.4, 1.1},
                              {0.6, 1.0, 1.8, 2.1, 2.9, 0.5, 1.2});
    CHECK(r.t == Approx(-0.057679).epsilon(1e-4));
    CHECK(r.df == Approx(11.831078).epsilon(1e-4));
    CHECK(r.p == Approx(0.95496705).epsilon(1e-4));

    r = metrics::welch_t_test({100, 102, 98, 101}, {99, 103, 97, 100, 101});
    CHECK(r.t == Approx(0.190117).epsilon(1e-4));
    CHECK(r.df == Approx(6.998645).epsilon(1e-4));
    CHECK(r.p == Approx(0.85461405).epsilon(1e-4));
}

TEST_CASE("welch t test on identical samples") {
    std::vector<double> a = {3.0, 5.5, 7.25, 2.0, 9.0};
    auto r = metrics::welch_t_test(a, a);
    CHECK(r.t == Approx(0.0));
    CHECK(r.p >= 0.99);
}

TEST_CASE("welch t test zero-variance conventions") {
    auto r = metrics::welch_t_test({5, 5, 5}, {5, 5});
    CHECK(r.p == Approx(1.0));
    r = metrics::welch_t_test({5, 5, 5}, {6, 6});
    CHECK(r.p == Approx(0.0));
}

TEST_CASE("welch t test symmetry") {
    std::vector<double> a = {1.0, 2.0, 4.0, 8.0};
    std::vector<double> b = {3.0, 3.5, 5.0};
    auto r1 = metrics::welch_t_test(a, b);
    auto r2 = metrics::welch_t_test(b, a);
    CHECK(r1.t == Approx(-r2.t));
    CHECK(r1.df == Approx(r2.df));
    CHECK(r1.p == Approx(r2.p));
}

TEST_CASE("median test reference vectors") {
    auto r = metrics::median_test(seq(1, 100), seq(101, 200));
    CHECK(r.chi_square == Approx(196.02).epsilon(1e-4));
    CHECK(r.p < 1e-8);
    CHECK(r.grand_median == Approx(100.5));
    CHECK(r.table[0][0] == 0);
    CHECK(r.table[0][1] == 100);
    CHECK(r.table[1][0] == 100);
    CHECK(r.table[1][1] == 0);

    r = metrics::median_test({1, 3, 5, 7, 9, 11}, {2, 4, 6, 8, 10, 12});
    CHECK(r.chi_square == Approx(0.0));
    CHECK(r.p == Approx(1.0));
    CHECK(r.grand_median == Approx(6.5));
    CHECK(r.table[0][0] == 3);
    CHECK(r.table[0][1] == 3);
    CHECK(r.table[1][0] == 3);
    CHECK(r.table[1][1] == 3);

    r = metrics::median_test({1, 2, 3}, {4, 5, 6});
    CHECK(r.chi_square == Approx(2.666667).epsilon(1e-4));
    CHECK(r.p == Approx(0.10247043).epsilon(1e-4));
    CHECK(r.grand_median == Approx(3.5));

    r = metrics::median_test({1, 1, 2, 2, 3, 3, 4, 4}, {1, 2, 3, 4, 4, 4, 4, 4});
    CHECK(r.chi_square == Approx(1.015873).epsilon(1e-4));
    CHECK(r.p == Approx(0.31349995).epsilon(1e-4));
    CHECK(r.grand_median == Approx(3.0));
    CHECK(r.table[0][0] == 2);
    CHECK(r.table[0][1] == 5);
    CHECK(r.table[1][0] == 6);
    CHECK(r.table[1][1] == 3);

    r = metrics::median_test(seq(1, 10), seq(6, 15));
    CHECK(r.chi_square == Approx(3.232323).epsilon(1e-4));
    CHECK(r.p == Approx(0.07219820).epsilon(1e-4));
    CHECK(r.grand_median == Approx(8.0));
    CHECK(r.table[0][0] == 2);
    CHECK(r.table[0][1] == 7);
    CHECK(r.table[1][0] == 8);
    CHECK(r.table[1][1] == 3);
}

TEST_CASE("median test degenerate inputs") {
    // Every value equals the grand median: one contingency row is empty.
    auto r = metrics::median_test({5, 5, 5, 5}, {5, 5, 5, 5});
    CHECK(r.chi_square == Approx(0.0));
    CHECK(r.p == Approx(1.0));
    CHECK(r.grand_median == Approx(5.0));

    auto same = metrics::median_test({1, 2, 3, 4}, {1, 2, 3, 4});
    CHECK(same.p >= 0.99);
}

TEST_CASE("median test counts ties as below") {
    auto r = metrics::median_test({1, 2, 3}, {3, 4, 5});
    // grand median 3; the two 3s land in the at-or-below row.
    CHECK(r.grand_median == Approx(3.0));
    CHECK(r.table[0][0] + r.table[1][0] == 3);
    CHECK(r.table[0][1] + r.table[1][1] == 3);
    CHECK(r.table[1][0] == 3); // 1,2,3 all at or below
    CHECK(r.table[0][1] == 2); // 4,5 above
}
