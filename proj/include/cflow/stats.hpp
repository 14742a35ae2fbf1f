#pragma once
// Small numerical statistics kit: Welch's t-test (two-sided p via the
// regularized incomplete beta function) and Pearson correlation matrices.

#include <cstddef>
#include <span>
#include <vector>

namespace cflow {

struct TTestResult {
    double t = 0.0;
    double df = 0.0;  // Welch-Satterthwaite degrees of freedom
    double p = 1.0;   // two-sided
};

// Unequal-variance t-test. Requires >= 2 values per group; throws when both
// groups are constant (t undefined).
TTestResult welch_ttest(std::span<const double> group_a, std::span<const double> group_b);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// P(|T_df| >= |t|), two-sided survival of Student's t.
double student_t_two_sided_p(double t, double df);

double mean_of(std::span<const double> v);
double population_variance(std::span<const double> v);
double sample_variance(std::span<const double> v);

// Pearson correlation over column-major data: values[c * n_rows + r].
// Zero-variance columns get NaN rows/columns; the diagonal is exactly 1
// for well-defined columns.
std::vector<double> pearson_correlation(const std::vector<double>& values, size_t n_rows,
                                        size_t n_cols);

}  // namespace cflow
