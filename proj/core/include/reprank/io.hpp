#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reprank/independence.hpp"
#include "reprank/reputation.hpp"
#include "reprank/stats.hpp"

namespace reprank {

/// Shortest text that still round-trips a double exactly (17 significant digits).
std::string format_double(double v);

/// `user_id,reputation` rows, ascending user id, full precision.
void write_reputation_csv(std::ostream& out, const ReputationVector& reputations);
/// Returns values indexed by user (position u-1). Rows must cover 1..n densely.
std::vector<double> read_reputation_csv(std::istream& in);

/// `item_id,score` rows, ascending item id, full precision.
void write_ranking_csv(std::ostream& out, const RankingVector& ranking);
RankingVector read_ranking_csv(std::istream& in);

/// `class_a,class_b,delta,u_stat,p_value,rejected` rows, upper triangle.
void write_audit_csv(std::ostream& out, const DrAuditReport& report);
std::vector<PairAudit> read_audit_pairs_csv(std::istream& in);

/// JSON document mirroring the triangular audit table, deterministic key order.
void write_audit_json(std::ostream& out, const DrAuditReport& report);

/// `group,min,whisker_low,q1,median,q3,whisker_high,max,outliers` rows.
void write_summary_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, FiveNumberSummary>>& groups);

} // namespace reprank
