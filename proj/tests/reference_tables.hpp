#pragma once

// Reference cross-firm summaries for the five accounting variables
// (revenue r, net income i, operating income p, own capital o, market
// capitalization m). E_C, sigma_C and N_C come from the correlation table;
// E_dF and sigma_dF, the printed p-value and direction come from the
// directionality table. Inputs are printed to three significant digits.

#include <array>
#include <string>

namespace reference {

struct Row {
  const char* first;
  const char* second;
  double e_c;
  double sigma_c;
  std::size_t n_c;
  double e_df;
  double sigma_df;
  double p_value;
  int direction;  // +1 first -> second, -1 second -> first, 0 none
};

inline constexpr std::array<Row, 10> kRows{{
    {"i", "m", 0.308, 0.219, 1421, 0.0176, 0.0841, 2.88e-15, +1},
    {"o", "m", 0.337, 0.232, 1434, 0.0141, 0.0786, 8.13e-12, +1},
    {"r", "m", 0.169, 0.218, 1211, 0.00157, 0.0562, 0.329, 0},
    {"p", "m", 0.317, 0.206, 1429, 0.00371, 0.0626, 0.0248, +1},
    {"i", "o", 0.427, 0.216, 1532, 0.0170, 0.0969, 5.00e-12, +1},
    {"i", "p", 0.660, 0.268, 1532, -0.00491, 0.0610, 0.00154, -1},
    {"i", "r", 0.273, 0.293, 1279, 0.00371, 0.0760, 0.0801, 0},
    {"p", "o", 0.302, 0.221, 1439, -0.00300, 0.0765, 0.135, 0},
    {"p", "r", 0.505, 0.278, 1516, 0.000997, 0.0579, 0.502, 0},
    {"o", "r", 0.293, 0.257, 1388, 0.00804, 0.0843, 0.000376, +1},
}};

}  // namespace reference
