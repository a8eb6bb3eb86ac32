#pragma once

#include <string>
#include <vector>

#include "reprank/dataset.hpp"
#include "reprank/reputation.hpp"

namespace reprank {

struct ClassStats {
    std::string label;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // population convention (divisor = count)
};

/// Per-class reputation statistics for one attribute, in class order.
struct GroupStats {
    std::string attribute;
    std::vector<ClassStats> classes;

    double min_mean() const;
    double min_stddev() const;
    /// Throws DomainError for labels not in the partition.
    const ClassStats& by_label(const std::string& label) const;
};

/// Mean and population standard deviation of reputations per class.
/// Every user in the reputation vector must carry an assignment and every
/// class must be non-empty; otherwise throws AuditError naming the offender.
GroupStats group_stats(const ReputationVector& reputations, const AttributeTable& attr);

/// Delta between two class means; negative means class_b holds the higher
/// average reputation.
double disparate_reputation(const GroupStats& stats, const std::string& class_a,
                            const std::string& class_b);

struct PairAudit {
    std::string class_a;
    std::string class_b;
    double delta;        // mean(a) - mean(b)
    double u_statistic;
    double p_value;      // two-sided Mann-Whitney
    bool rejected;       // p < alpha
};

struct DrAuditReport {
    std::string attribute;
    double alpha = 0.05;
    double range_lo = 0.0; // -(1 - delta_r * lambda)
    double range_hi = 0.0; //  (1 - delta_r * lambda)
    double observed_lo = 0.0; // tightest delta range actually seen
    double observed_hi = 0.0;
    std::vector<PairAudit> pairs; // upper triangle in class order
};

/// Delta + Mann-Whitney verdict for every unordered class pair. Deltas are
/// checked against the stated [range_lo, range_hi] containment (an escape
/// means the reputations cannot have come from a converged run) and the
/// narrower observed range is recorded alongside.
/// Throws ConfigError when alpha is outside ]0,1[, AuditError when fewer than
/// two classes exist or the containment fails.
DrAuditReport mw_pairwise_audit(const ReputationVector& reputations, const AttributeTable& attr,
                                double alpha, double lambda, double delta_r);

struct HarmonizeResult {
    ReputationVector reputations; // transformed; iteration metadata carried over
    RankingVector ranking;        // weighted ranking recomputed with the new values
    double target_mean = 0.0;     // min of the class means
    double target_stddev = 0.0;   // min of the class stddevs
    bool degenerate = false;      // some class was constant; all spreads collapsed
};

/// Affine per-class transform c_u = mu + (c_u - mu_l) * sigma/sigma_l with
/// mu/sigma the minima over class means/stddevs, after which every class has
/// mean mu and stddev sigma and the per-pair deltas vanish. Rankings are then
/// recomputed as the reputation-weighted average. When sigma is 0 the scale
/// factor is 0 for all classes (flagged degenerate). Transformed values must
/// stay in ]0,1]; anything else raises AuditError rather than clamping.
HarmonizeResult harmonize(const ReputationVector& reputations, const AttributeTable& attr,
                          const RatingsMatrix& matrix);

} // namespace reprank
