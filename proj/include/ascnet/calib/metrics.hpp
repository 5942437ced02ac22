#pragma once

#include <span>
#include <vector>

#include "ascnet/common/matrix.hpp"

namespace ascnet::calib {

// Sample Pearson correlation. Unequal lengths, fewer than two points, or a
// constant argument are errors ("undefined correlation").
double pearson(std::span<const double> x, std::span<const double> y);

// Mean row-wise |Y n P| / |Y u P| over binary matrices; a row where both
// sets are empty counts as 1.
double jaccard(const Matrix& gold, const Matrix& pred);

double macro_average(std::span<const double> scores);
// Three-decimal reporting rule: truncation, with a 1e-9 guard against
// representation error (0.72175 -> 0.721, 0.7 stays 0.7).
double truncate3(double x);

}  // namespace ascnet::calib
