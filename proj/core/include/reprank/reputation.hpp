#pragma once

#include <span>
#include <utility>
#include <vector>

#include "reprank/dataset.hpp"

namespace reprank {

enum class Variant {
    li,        // ranking = weighted sum / rater count
    normalized // ranking = weighted sum / weight sum
};

struct EngineConfig {
    double lambda = 0.5;             // disagreement penalty, ]0,1]
    double initial_reputation = 1.0; // c^0, ]0,1]
    double tolerance = 1e-8;         // sup-norm step threshold
    int max_iterations = 200;
    Variant variant = Variant::normalized;

    /// Throws ConfigError when any field is out of range.
    void validate() const;
};

/// Per-item aggregate scores; the domain is exactly the set of rated items.
class RankingVector {
public:
    RankingVector() = default;
    /// `scores` must be sorted by ascending item id with unique ids.
    explicit RankingVector(std::vector<std::pair<ItemId, double>> scores);

    const std::vector<std::pair<ItemId, double>>& scores() const noexcept { return scores_; }
    std::size_t size() const noexcept { return scores_.size(); }
    bool contains(ItemId item) const;
    /// Throws DomainError for items outside the domain.
    double score_of(ItemId item) const;

private:
    std::vector<std::pair<ItemId, double>> scores_;
};

/// Per-user reputations plus the metadata of the iteration that produced them.
struct ReputationVector {
    std::vector<double> values;       // index u-1, ordered as the user set
    int iterations_run = 0;
    bool converged = false;
    double final_delta = 0.0;         // last sup-norm step
    std::vector<double> delta_history; // sup-norm step of every iteration
    std::vector<UserId> unrated_users; // flagged: no ratings, value stays at c^0
};

struct RunResult {
    RankingVector ranking;
    ReputationVector reputation;
};

/// Arithmetic-average baseline: r_i = mean of the ratings of item i.
/// Throws DomainError on a matrix with no ratings.
RankingVector aa_ranking(const RatingsMatrix& matrix);

/// Reputation-weighted ranking, sum(R_ui * c_u) / sum(c_u) over the raters of
/// each item. This is the ranking half of the normalized update and is also
/// how rankings are recomputed after harmonization.
RankingVector weighted_ranking(const RatingsMatrix& matrix, std::span<const double> reputations);

/// One iteration of the count-normalized scheme:
///   r_i = sum(R_ui * c_u) / |U_i|,  c_u = 1 - lambda/|I_u| * sum |R_ui - r_i|.
/// Users without ratings keep their previous value.
std::pair<RankingVector, std::vector<double>>
step_li(const RatingsMatrix& matrix, std::span<const double> c_prev, const EngineConfig& config);

/// One iteration of the weight-normalized scheme: same reputation update, but
///   r_i = sum(R_ui * c_u) / sum(c_u) over the raters of i,
/// so an item whose ratings are all maximal ranks at exactly the maximum.
std::pair<RankingVector, std::vector<double>>
step_normalized(const RatingsMatrix& matrix, std::span<const double> c_prev, const EngineConfig& config);

/// Iterate the selected variant from a flat initial reputation until the
/// sup-norm step drops below config.tolerance or max_iterations is reached.
/// Deterministic for fixed inputs; non-convergence is reported, not thrown.
RunResult run(const RatingsMatrix& matrix, const EngineConfig& config);

} // namespace reprank
