#pragma once

#include <span>
#include <vector>

#include "reprank/reputation.hpp"

namespace reprank {

enum class MwMethod {
    automatic, // exact when both samples together hold <= 40 all-distinct values
    exact,     // enumeration of the null distribution; requires no ties
    asymptotic // tie-corrected normal approximation with continuity correction
};

struct MannWhitneyResult {
    double u_statistic; // U of the first sample (midranks for ties)
    double p_value;     // two-sided
    bool exact;         // which path produced p_value
};

/// Two-sample Mann-Whitney U test of the null that a value drawn from one
/// population is equally likely to be less than or greater than a value drawn
/// from the other. Throws DomainError on an empty sample, or when the exact
/// method is requested for tied data.
MannWhitneyResult mann_whitney_u(std::span<const double> sample_a, std::span<const double> sample_b,
                                 MwMethod method = MwMethod::automatic);

enum class TauVariant {
    tau_b, // tie-adjusted
    strict // ties broken by position/item id, then the classic tie-free tau
};

/// Kendall rank correlation between two score sequences over the same index
/// set. O(n log n) via merge-sort exchange counting.
double kendall_tau_scores(std::span<const double> x, std::span<const double> y,
                          TauVariant variant = TauVariant::tau_b);

/// Kendall rank correlation between two rankings. Both must cover exactly the
/// same items; otherwise throws DomainError listing the symmetric difference.
double kendall_tau(const RankingVector& a, const RankingVector& b,
                   TauVariant variant = TauVariant::tau_b);

/// Box-whisker summary: quartiles by linear interpolation between closest
/// ranks, whiskers at the most extreme data point within 1.5 IQR of the box.
struct FiveNumberSummary {
    double min;
    double whisker_low;
    double q1;
    double median;
    double q3;
    double whisker_high;
    double max;
    std::size_t outliers;
};

/// Throws DomainError on empty input.
FiveNumberSummary five_number_summary(std::span<const double> values);

} // namespace reprank
