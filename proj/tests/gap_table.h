// Hand-computed gap values shared by unit and acceptance tests.

#ifndef OSEA_TESTS_GAP_TABLE_H_
#define OSEA_TESTS_GAP_TABLE_H_

#include <array>

namespace osea::testing {

struct GapCase {
  double z_bound;
  double z;
  double percent;
};

inline constexpr std::array<GapCase, 20> kGapTable = {{
    {100, 80, 25},
    {80, 100, 20},
    {5, 5, 0},
    {0, 0, 0},
    // z = 0 hits the denominator guard.
    {5, 0, 5e12},
    {-5, 0, 5e12},
    {1e-10, 0, 100},
    {0, 10, 100},
    {-10, -8, 25},
    {-8, -10, 20},
    {3, -1, 400},
    {1, 4, 75},
    {2.5, 2, 25},
    {7, 8, 12.5},
    {1e6, 999000, 0.1001001001001001},
    {0.5, 0.4, 25},
    // |z| below the guard.
    {1e-11, 2e-11, 10},
    {3e-11, -5e-11, 80},
    {123.5, 100, 23.5},
    {-1, 1, 200},
}};

}  // namespace osea::testing

#endif  // OSEA_TESTS_GAP_TABLE_H_
