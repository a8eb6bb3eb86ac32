#include "reprank/reputation.hpp"

#include <algorithm>
#include <cmath>

#include "reprank/errors.hpp"

namespace reprank {

void EngineConfig::validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ConfigError("lambda must lie in ]0,1], got " + std::to_string(lambda));
    if (!(initial_reputation > 0.0 && initial_reputation <= 1.0))
        throw ConfigError("initial_reputation must lie in ]0,1], got " +
                          std::to_string(initial_reputation));
    if (!(tolerance > 0.0))
        throw ConfigError("tolerance must be positive, got " + std::to_string(tolerance));
    if (max_iterations < 1)
        throw ConfigError("max_iterations must be at least 1, got " +
                          std::to_string(max_iterations));
}

RankingVector::RankingVector(std::vector<std::pair<ItemId, double>> scores)
    : scores_(std::move(scores)) {
    for (std::size_t k = 1; k < scores_.size(); ++k)
        if (scores_[k - 1].first >= scores_[k].first)
            throw DomainError("ranking items must be strictly ascending");
}

bool RankingVector::contains(ItemId item) const {
    auto it = std::lower_bound(scores_.begin(), scores_.end(), item,
                               [](const auto& p, ItemId id) { return p.first < id; });
    return it != scores_.end() && it->first == item;
}

double RankingVector::score_of(ItemId item) const {
    auto it = std::lower_bound(scores_.begin(), scores_.end(), item,
                               [](const auto& p, ItemId id) { return p.first < id; });
    if (it == scores_.end() || it->first != item)
        throw DomainError("item " + std::to_string(item) + " has no ranking (never rated)");
    return it->second;
}

namespace {

// Rankings into a dense buffer indexed by item-1; untouched slots stay 0 and
// are excluded from the output domain. Summations run ascending user id.
void rank_into(const RatingsMatrix& matrix, std::span<const double> c, Variant variant,
               std::vector<double>& rank_buf) {
    for (ItemId i = 1; i <= matrix.n_items(); ++i) {
        auto raters = matrix.ratings_of_item(i);
        if (raters.empty()) continue;
        double num = 0.0;
        for (const auto& r : raters) num += r.value * c[r.user - 1];
        double den;
        if (variant == Variant::li) {
            den = static_cast<double>(raters.size());
        } else {
            den = 0.0;
            for (const auto& r : raters) den += c[r.user - 1];
        }
        rank_buf[i - 1] = num / den;
    }
}

// c_u = 1 - lambda/|I_u| * sum |R_ui - r_i|, ascending item id. Users with no
// ratings keep their previous value.
void reputations_from(const RatingsMatrix& matrix, const std::vector<double>& rank_buf,
                      double lambda, std::span<const double> c_prev, std::vector<double>& c_out) {
    for (UserId u = 1; u <= matrix.n_users(); ++u) {
        auto rated = matrix.ratings_of_user(u);
        if (rated.empty()) {
            c_out[u - 1] = c_prev[u - 1];
            continue;
        }
        double disagreement = 0.0;
        for (const auto& r : rated) disagreement += std::abs(r.value - rank_buf[r.item - 1]);
        c_out[u - 1] = 1.0 - lambda / static_cast<double>(rated.size()) * disagreement;
    }
}

RankingVector materialize(const RatingsMatrix& matrix, const std::vector<double>& rank_buf) {
    std::vector<std::pair<ItemId, double>> scores;
    for (ItemId i = 1; i <= matrix.n_items(); ++i)
        if (!matrix.ratings_of_item(i).empty()) scores.emplace_back(i, rank_buf[i - 1]);
    return RankingVector(std::move(scores));
}

std::pair<RankingVector, std::vector<double>> one_step(const RatingsMatrix& matrix,
                                                       std::span<const double> c_prev,
                                                       const EngineConfig& config,
                                                       Variant variant) {
    config.validate();
    if (c_prev.size() != matrix.n_users())
        throw DomainError("reputation vector size does not match the user count");
    for (double v : c_prev)
        if (!(v > 0.0 && v <= 1.0)) throw DomainError("previous reputations must lie in ]0,1]");
    std::vector<double> rank_buf(matrix.n_items(), 0.0);
    rank_into(matrix, c_prev, variant, rank_buf);
    std::vector<double> c_next(matrix.n_users(), 0.0);
    reputations_from(matrix, rank_buf, config.lambda, c_prev, c_next);
    return {materialize(matrix, rank_buf), std::move(c_next)};
}

} // namespace

RankingVector aa_ranking(const RatingsMatrix& matrix) {
    if (matrix.n_ratings() == 0) throw DomainError("cannot rank an empty ratings matrix");
    std::vector<std::pair<ItemId, double>> scores;
    for (ItemId i = 1; i <= matrix.n_items(); ++i) {
        auto raters = matrix.ratings_of_item(i);
        if (raters.empty()) continue;
        double sum = 0.0;
        for (const auto& r : raters) sum += r.value;
        scores.emplace_back(i, sum / static_cast<double>(raters.size()));
    }
    return RankingVector(std::move(scores));
}

RankingVector weighted_ranking(const RatingsMatrix& matrix, std::span<const double> reputations) {
    if (matrix.n_ratings() == 0) throw DomainError("cannot rank an empty ratings matrix");
    if (reputations.size() != matrix.n_users())
        throw DomainError("reputation vector size does not match the user count");
    std::vector<double> rank_buf(matrix.n_items(), 0.0);
    rank_into(matrix, reputations, Variant::normalized, rank_buf);
    return materialize(matrix, rank_buf);
}

std::pair<RankingVector, std::vector<double>> step_li(const RatingsMatrix& matrix,
                                                      std::span<const double> c_prev,
                                                      const EngineConfig& config) {
    return one_step(matrix, c_prev, config, Variant::li);
}

std::pair<RankingVector, std::vector<double>> step_normalized(const RatingsMatrix& matrix,
                                                              std::span<const double> c_prev,
                                                              const EngineConfig& config) {
    return one_step(matrix, c_prev, config, Variant::normalized);
}

RunResult run(const RatingsMatrix& matrix, const EngineConfig& config) {
    config.validate();
    if (matrix.n_ratings() == 0) throw DomainError("cannot rank an empty ratings matrix");

    const std::size_t n = matrix.n_users();
    std::vector<double> c(n, config.initial_reputation);
    std::vector<double> c_next(n, 0.0);
    std::vector<double> rank_buf(matrix.n_items(), 0.0);

    ReputationVector rep;
    for (UserId u = 1; u <= matrix.n_users(); ++u)
        if (matrix.ratings_of_user(u).empty()) rep.unrated_users.push_back(u);

    for (int k = 0; k < config.max_iterations; ++k) {
        rank_into(matrix, c, config.variant, rank_buf);
        reputations_from(matrix, rank_buf, config.lambda, c, c_next);
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) delta = std::max(delta, std::abs(c_next[j] - c[j]));
        c.swap(c_next);
        rep.delta_history.push_back(delta);
        rep.iterations_run = k + 1;
        rep.final_delta = delta;
        if (delta < config.tolerance) {
            rep.converged = true;
            break;
        }
    }

    rep.values = std::move(c);
    // Rankings of the final iterate, consistent with the reputations above.
    RankingVector ranking = materialize(matrix, rank_buf);
    return {std::move(ranking), std::move(rep)};
}

} // namespace reprank
