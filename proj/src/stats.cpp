#include "cflow/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cflow {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

namespace {

// Lentz's continued fraction for the incomplete beta (Numerical Recipes
// style). Converges quickly for the t-distribution arguments used here.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult welch_ttest(std::span<const double> group_a, std::span<const double> group_b) {
    if (group_a.size() < 2 || group_b.size() < 2)
        throw std::invalid_argument("t-test needs at least 2 values per group");

    const double na = static_cast<double>(group_a.size());
    const double nb = static_cast<double>(group_b.size());
    const double ma = mean_of(group_a), mb = mean_of(group_b);
    const double va = sample_variance(group_a), vb = sample_variance(group_b);
    const double sa = va / na, sb = vb / nb;
    if (sa + sb <= 0.0) throw std::invalid_argument("t undefined: both groups are constant");

    TTestResult r;
    r.t = (ma - mb) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) /
           (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

std::vector<double> pearson_correlation(const std::vector<double>& values, size_t n_rows,
                                        size_t n_cols) {
    if (n_rows < 2) throw std::invalid_argument("correlation needs at least 2 rows");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> mean(n_cols, 0.0), sd(n_cols, 0.0);
    for (size_t c = 0; c < n_cols; ++c) {
        std::span<const double> col(values.data() + c * n_rows, n_rows);
        mean[c] = mean_of(col);
        sd[c] = std::sqrt(population_variance(col));
    }

    std::vector<double> corr(n_cols * n_cols, nan);
    for (size_t i = 0; i < n_cols; ++i) {
        if (sd[i] == 0.0) continue;
        corr[i * n_cols + i] = 1.0;
        for (size_t j = i + 1; j < n_cols; ++j) {
            if (sd[j] == 0.0) continue;
            double cov = 0.0;
            for (size_t r = 0; r < n_rows; ++r)
                cov += (values[i * n_rows + r] - mean[i]) * (values[j * n_rows + r] - mean[j]);
            cov /= static_cast<double>(n_rows);
            const double rho = cov / (sd[i] * sd[j]);
            corr[i * n_cols + j] = rho;
            corr[j * n_cols + i] = rho;
        }
    }
    return corr;
}

}  // namespace cflow
