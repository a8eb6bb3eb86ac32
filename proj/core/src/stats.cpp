#include "reprank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "reprank/errors.hpp"

namespace reprank {

namespace {

// P(U <= u) under the tie-free null. f(a, b, u) counts the arrangements of a
// sample-one values among a+b pooled values whose U statistic equals u;
// conditioning on which sample the largest pooled value came from gives
//   f(a, b, u) = f(a-1, b, u-b) + f(a, b-1, u).
// Counts fit a double exactly for a+b <= 40 (max C(40,20) < 2^53).
double exact_cdf_leq(double u_stat, std::size_t n1, std::size_t n2) {
    const long max_u = static_cast<long>(n1) * static_cast<long>(n2);
    const long u_cap = static_cast<long>(std::floor(u_stat + 1e-9));
    if (u_cap < 0) return 0.0;
    if (u_cap >= max_u) return 1.0;

    auto make_table = [&] {
        return std::vector<std::vector<double>>(n1 + 1, std::vector<double>(max_u + 1, 0.0));
    };
    auto prev = make_table(); // f(., b-1, .)
    auto cur = make_table();  // f(., b, .)
    for (std::size_t a = 0; a <= n1; ++a) prev[a][0] = 1.0; // b = 0: U is always 0
    for (std::size_t b = 1; b <= n2; ++b) {
        for (std::size_t a = 0; a <= n1; ++a) {
            for (long u = 0; u <= static_cast<long>(a) * static_cast<long>(b); ++u) {
                double w = prev[a][u];
                if (a >= 1 && u >= static_cast<long>(b)) w += cur[a - 1][u - b];
                cur[a][u] = w;
            }
            if (static_cast<long>(a) * static_cast<long>(b) < max_u)
                std::fill(cur[a].begin() + static_cast<long>(a) * static_cast<long>(b) + 1,
                          cur[a].end(), 0.0);
        }
        prev.swap(cur);
    }

    double total = 0.0;
    double below = 0.0;
    for (long u = 0; u <= max_u; ++u) {
        total += prev[n1][u];
        if (u <= u_cap) below += prev[n1][u];
    }
    return below / total;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

struct RankedPool {
    std::vector<double> ranks_a; // midranks of sample a
    double tie_term = 0.0;       // sum over tie groups of t^3 - t
    bool has_ties = false;
};

RankedPool midrank(std::span<const double> a, std::span<const double> b) {
    struct Tagged {
        double value;
        bool from_a;
    };
    std::vector<Tagged> pool;
    pool.reserve(a.size() + b.size());
    for (double v : a) pool.push_back({v, true});
    for (double v : b) pool.push_back({v, false});
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

    RankedPool out;
    out.ranks_a.reserve(a.size());
    std::size_t i = 0;
    while (i < pool.size()) {
        std::size_t j = i;
        while (j < pool.size() && pool[j].value == pool[i].value) ++j;
        double t = static_cast<double>(j - i);
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        if (j - i > 1) {
            out.has_ties = true;
            out.tie_term += t * t * t - t;
        }
        for (std::size_t k = i; k < j; ++k)
            if (pool[k].from_a) out.ranks_a.push_back(rank);
        i = j;
    }
    return out;
}

} // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> sample_a, std::span<const double> sample_b,
                                 MwMethod method) {
    if (sample_a.empty() || sample_b.empty())
        throw DomainError("Mann-Whitney requires two non-empty samples");

    const std::size_t n1 = sample_a.size();
    const std::size_t n2 = sample_b.size();
    RankedPool pool = midrank(sample_a, sample_b);

    double rank_sum_a = 0.0;
    for (double r : pool.ranks_a) rank_sum_a += r;
    double u1 = rank_sum_a - static_cast<double>(n1) * (n1 + 1) / 2.0;
    double u2 = static_cast<double>(n1) * static_cast<double>(n2) - u1;

    bool want_exact = false;
    switch (method) {
    case MwMethod::exact:
        if (pool.has_ties)
            throw DomainError("exact Mann-Whitney p-value is undefined for tied data");
        want_exact = true;
        break;
    case MwMethod::asymptotic:
        want_exact = false;
        break;
    case MwMethod::automatic:
        want_exact = !pool.has_ties && n1 + n2 <= 40;
        break;
    }

    double p;
    if (want_exact) {
        double u_small = std::min(u1, u2);
        p = std::min(1.0, 2.0 * exact_cdf_leq(u_small, n1, n2));
    } else {
        const double n = static_cast<double>(n1 + n2);
        const double mean_u = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                     ((n + 1.0) - pool.tie_term / (n * (n - 1.0)));
        if (var <= 0.0) {
            // every pooled value identical: the test carries no information
            return {u1, 1.0, false};
        }
        double big_u = std::max(u1, u2);
        double z = (big_u - mean_u - 0.5) / std::sqrt(var); // 0.5 = continuity correction
        p = std::min(1.0, 2.0 * normal_sf(z));
    }
    return {u1, p, want_exact};
}

namespace {

// Ranks 1..n with ties broken by ascending position, so repeated runs on the
// same input produce identical orderings.
std::vector<double> strict_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        ranks[order[pos]] = static_cast<double>(pos + 1);
    return ranks;
}

// Pairs with y_i > y_j for i < j, counted by merge sort.
std::size_t count_inversions(std::vector<double>& y, std::vector<double>& scratch, std::size_t lo,
                             std::size_t hi) {
    if (hi - lo <= 1) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    std::size_t swaps = count_inversions(y, scratch, lo, mid) + count_inversions(y, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (y[j] < y[i]) {
            swaps += mid - i;
            scratch[k++] = y[j++];
        } else {
            scratch[k++] = y[i++];
        }
    }
    while (i < mid) scratch[k++] = y[i++];
    while (j < hi) scratch[k++] = y[j++];
    std::copy(scratch.begin() + lo, scratch.begin() + hi, y.begin() + lo);
    return swaps;
}

double tie_pairs(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        double t = static_cast<double>(j - i);
        total += t * (t - 1.0) / 2.0;
        i = j;
    }
    return total;
}

} // namespace

double kendall_tau_scores(std::span<const double> x, std::span<const double> y,
                          TauVariant variant) {
    if (x.size() != y.size())
        throw DomainError("kendall tau requires sequences of equal length");
    if (x.size() < 2)
        throw DomainError("kendall tau requires at least two observations");

    std::vector<double> xv, yv;
    if (variant == TauVariant::strict) {
        xv = strict_ranks(x);
        yv = strict_ranks(y);
    } else {
        xv.assign(x.begin(), x.end());
        yv.assign(y.begin(), y.end());
    }

    const std::size_t n = xv.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return xv[i] != xv[j] ? xv[i] < xv[j] : yv[i] < yv[j];
    });

    std::vector<double> y_sorted(n);
    for (std::size_t k = 0; k < n; ++k) y_sorted[k] = yv[order[k]];

    // Knight's decomposition: joint ties and x ties from the sorted sequence,
    // discordant pairs from inversion counting on y.
    double ties_x = 0.0, ties_xy = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && xv[order[j]] == xv[order[i]]) ++j;
        double t = static_cast<double>(j - i);
        ties_x += t * (t - 1.0) / 2.0;
        std::size_t a = i;
        while (a < j) {
            std::size_t b = a;
            while (b < j && yv[order[b]] == yv[order[a]]) ++b;
            double s = static_cast<double>(b - a);
            ties_xy += s * (s - 1.0) / 2.0;
            a = b;
        }
        i = j;
    }
    double ties_y = tie_pairs(yv);

    std::vector<double> scratch(n);
    double swaps = static_cast<double>(count_inversions(y_sorted, scratch, 0, n));

    const double n0 = static_cast<double>(n) * (n - 1.0) / 2.0;
    double concordant_minus_discordant = n0 - ties_x - ties_y + ties_xy - 2.0 * swaps;
    double denom = std::sqrt((n0 - ties_x) * (n0 - ties_y));
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return concordant_minus_discordant / denom;
}

double kendall_tau(const RankingVector& a, const RankingVector& b, TauVariant variant) {
    const auto& sa = a.scores();
    const auto& sb = b.scores();
    bool mismatch = sa.size() != sb.size();
    if (!mismatch)
        for (std::size_t k = 0; k < sa.size(); ++k)
            if (sa[k].first != sb[k].first) {
                mismatch = true;
                break;
            }
    if (mismatch) {
        std::vector<ItemId> only_a, only_b;
        std::size_t i = 0, j = 0;
        while (i < sa.size() || j < sb.size()) {
            if (j >= sb.size() || (i < sa.size() && sa[i].first < sb[j].first))
                only_a.push_back(sa[i++].first);
            else if (i >= sa.size() || sb[j].first < sa[i].first)
                only_b.push_back(sb[j++].first);
            else {
                ++i;
                ++j;
            }
        }
        std::ostringstream msg;
        msg << "ranking domains differ;";
        auto list = [&msg](const char* side, const std::vector<ItemId>& ids) {
            msg << ' ' << side << " only:";
            for (std::size_t k = 0; k < ids.size() && k < 8; ++k) msg << ' ' << ids[k];
            if (ids.size() > 8) msg << " ... (" << ids.size() << " items)";
        };
        if (!only_a.empty()) list("first", only_a);
        if (!only_b.empty()) list("second", only_b);
        throw DomainError(msg.str());
    }

    std::vector<double> x(sa.size()), y(sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) {
        x[k] = sa[k].second;
        y[k] = sb[k].second;
    }
    return kendall_tau_scores(x, y, variant);
}

FiveNumberSummary five_number_summary(std::span<const double> values) {
    if (values.empty()) throw DomainError("five-number summary of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());

    auto quantile = [&v](double q) {
        double pos = q * static_cast<double>(v.size() - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, v.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return v[lo] + (v[hi] - v[lo]) * frac;
    };

    FiveNumberSummary s{};
    s.min = v.front();
    s.max = v.back();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);

    double iqr = s.q3 - s.q1;
    double lo_fence = s.q1 - 1.5 * iqr;
    double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    for (double x : v) {
        if (x >= lo_fence) {
            s.whisker_low = x; // first (smallest) point inside the fence
            break;
        }
    }
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        if (*it <= hi_fence) {
            s.whisker_high = *it;
            break;
        }
    }
    // Interpolated quartiles can sit beyond every in-fence datum; keep the
    // whiskers on the box in that case.
    s.whisker_low = std::min(s.whisker_low, s.q1);
    s.whisker_high = std::max(s.whisker_high, s.q3);
    s.outliers = 0;
    for (double x : v)
        if (x < s.whisker_low || x > s.whisker_high) ++s.outliers;
    return s;
}

} // namespace reprank
