#include "reprank/independence.hpp"

#include <algorithm>
#include <cmath>

#include "reprank/stats.hpp"

namespace reprank {

double GroupStats::min_mean() const {
    double m = classes.front().mean;
    for (const ClassStats& c : classes) m = std::min(m, c.mean);
    return m;
}

double GroupStats::min_stddev() const {
    double s = classes.front().stddev;
    for (const ClassStats& c : classes) s = std::min(s, c.stddev);
    return s;
}

const ClassStats& GroupStats::by_label(const std::string& label) const {
    for (const ClassStats& c : classes)
        if (c.label == label) return c;
    throw DomainError("no class '" + label + "' in attribute " + attribute);
}

namespace {

// Reputation samples per class, class order; every user must be assigned.
std::vector<std::vector<double>> samples_by_class(const ReputationVector& reputations,
                                                  const AttributeTable& attr) {
    std::vector<std::vector<double>> samples(attr.classes().size());
    for (UserId u = 1; u <= reputations.values.size(); ++u) {
        auto idx = attr.class_index_of(u);
        if (!idx)
            throw AuditError("user " + std::to_string(u) + " has no " + attr.attribute_name() +
                             " assignment; audits need full coverage");
        samples[*idx].push_back(reputations.values[u - 1]);
    }
    for (std::size_t k = 0; k < samples.size(); ++k)
        if (samples[k].empty())
            throw AuditError("class '" + attr.classes()[k] + "' of attribute " +
                             attr.attribute_name() + " has no members");
    return samples;
}

ClassStats stats_of(const std::string& label, const std::vector<double>& sample) {
    ClassStats s;
    s.label = label;
    s.count = sample.size();
    double sum = 0.0;
    for (double v : sample) sum += v;
    s.mean = sum / static_cast<double>(sample.size());
    double sq = 0.0;
    for (double v : sample) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(sample.size())); // population divisor
    return s;
}

} // namespace

GroupStats group_stats(const ReputationVector& reputations, const AttributeTable& attr) {
    if (reputations.values.empty()) throw DomainError("empty reputation vector");
    auto samples = samples_by_class(reputations, attr);
    GroupStats out;
    out.attribute = attr.attribute_name();
    out.classes.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k)
        out.classes.push_back(stats_of(attr.classes()[k], samples[k]));
    return out;
}

double disparate_reputation(const GroupStats& stats, const std::string& class_a,
                            const std::string& class_b) {
    return stats.by_label(class_a).mean - stats.by_label(class_b).mean;
}

DrAuditReport mw_pairwise_audit(const ReputationVector& reputations, const AttributeTable& attr,
                                double alpha, double lambda, double delta_r) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("alpha must lie in ]0,1[, got " + std::to_string(alpha));
    if (attr.classes().size() < 2)
        throw AuditError("attribute " + attr.attribute_name() +
                         " has fewer than two classes; nothing to audit");

    auto samples = samples_by_class(reputations, attr);
    std::vector<ClassStats> class_stats;
    class_stats.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k)
        class_stats.push_back(stats_of(attr.classes()[k], samples[k]));

    DrAuditReport report;
    report.attribute = attr.attribute_name();
    report.alpha = alpha;
    report.range_hi = 1.0 - delta_r * lambda;
    report.range_lo = -report.range_hi;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            MannWhitneyResult mw = mann_whitney_u(samples[i], samples[j]);
            PairAudit pair;
            pair.class_a = attr.classes()[i];
            pair.class_b = attr.classes()[j];
            pair.delta = class_stats[i].mean - class_stats[j].mean;
            pair.u_statistic = mw.u_statistic;
            pair.p_value = mw.p_value;
            pair.rejected = mw.p_value < alpha;
            if (pair.delta < report.range_lo || pair.delta > report.range_hi)
                throw AuditError("delta(" + pair.class_a + "," + pair.class_b + ") = " +
                                 std::to_string(pair.delta) + " escapes [" +
                                 std::to_string(report.range_lo) + "," +
                                 std::to_string(report.range_hi) + "]");
            report.observed_lo = std::min(report.observed_lo, pair.delta);
            report.observed_hi = std::max(report.observed_hi, pair.delta);
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

HarmonizeResult harmonize(const ReputationVector& reputations, const AttributeTable& attr,
                          const RatingsMatrix& matrix) {
    if (reputations.values.size() != matrix.n_users())
        throw DomainError("reputation vector size does not match the user count");

    auto samples = samples_by_class(reputations, attr);
    std::vector<ClassStats> class_stats;
    for (std::size_t k = 0; k < samples.size(); ++k)
        class_stats.push_back(stats_of(attr.classes()[k], samples[k]));

    double mu = class_stats.front().mean;
    double sigma = class_stats.front().stddev;
    for (const ClassStats& c : class_stats) {
        mu = std::min(mu, c.mean);
        sigma = std::min(sigma, c.stddev);
    }

    HarmonizeResult out;
    out.target_mean = mu;
    out.target_stddev = sigma;
    out.degenerate = sigma == 0.0;

    out.reputations = reputations; // carries the iteration metadata along
    for (UserId u = 1; u <= reputations.values.size(); ++u) {
        std::uint32_t cls = *attr.class_index_of(u); // coverage checked above
        double scale = out.degenerate ? 0.0 : sigma / class_stats[cls].stddev;
        double v = mu + (reputations.values[u - 1] - class_stats[cls].mean) * scale;
        if (!(v > 0.0 && v <= 1.0))
            throw AuditError("harmonized reputation for user " + std::to_string(u) + " is " +
                             std::to_string(v) + ", outside ]0,1]; refusing to clamp");
        out.reputations.values[u - 1] = v;
    }

    out.ranking = weighted_ranking(matrix, out.reputations.values);
    return out;
}

} // namespace reprank
