#pragma once
// Rank-based AUC (Mann-Whitney) with average ranks for ties:
//   (sum of positive ranks - n_pos(n_pos+1)/2) / (n_pos * n_neg)
// All intermediate quantities are exact multiples of 0.5, so the result is
// bit-identical to the pairwise win/tie count divided by n_pos * n_neg.

#include <span>
#include <vector>

namespace cflow {

// Throws std::invalid_argument when a class is missing or sizes mismatch.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace cflow
