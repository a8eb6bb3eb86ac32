#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reprank/errors.hpp"

namespace reprank {

using UserId = std::uint32_t; // 1-based external id
using ItemId = std::uint32_t; // 1-based external id

struct RatingEntry {
    UserId user;
    ItemId item;
    double value; // normalized rating in ]0,1]

    friend bool operator==(const RatingEntry&, const RatingEntry&) = default;
};

/// Immutable sparse user x item rating matrix with normalized ratings.
///
/// A missing entry means "not rated"; stored values are strictly positive.
/// Both index views (ratings per user, ratings per item) are materialized at
/// construction and kept sorted by ascending id so that every summation in the
/// engine has a fixed, reproducible order. Safe to share across threads.
class RatingsMatrix {
public:
    struct UserRating {
        UserId user;
        double value;
    };
    struct ItemRating {
        ItemId item;
        double value;
    };

    /// Build from normalized entries. `delta_r` is the width of the allowed
    /// normalized rating range, e.g. 0.8 for a 1..5 scale divided by 5.
    /// Throws IntegrityError on duplicate (user, item) pairs, RangeError on
    /// values outside ]0,1], ConfigError on delta_r outside ]0,1[.
    RatingsMatrix(UserId n_users, ItemId n_items, std::vector<RatingEntry> entries, double delta_r);

    UserId n_users() const noexcept { return n_users_; }
    ItemId n_items() const noexcept { return n_items_; }
    std::size_t n_ratings() const noexcept { return entries_.size(); }
    double delta_r() const noexcept { return delta_r_; }
    /// Smallest normalized rating the scale allows (1 - delta_r).
    double scale_min() const noexcept { return 1.0 - delta_r_; }

    /// All entries sorted by (user, item).
    const std::vector<RatingEntry>& entries() const noexcept { return entries_; }

    /// Ratings given to `item`, ascending user id. Throws DomainError when out of range.
    std::span<const UserRating> ratings_of_item(ItemId item) const;
    /// Ratings given by `user`, ascending item id. Throws DomainError when out of range.
    std::span<const ItemRating> ratings_of_user(UserId user) const;

    /// U_i: ids of the users that rated `item` (empty if unrated).
    std::vector<UserId> users_of_item(ItemId item) const;
    /// I_u: ids of the items `user` rated (empty if the user rated nothing).
    std::vector<ItemId> items_of_user(UserId user) const;

private:
    UserId n_users_;
    ItemId n_items_;
    double delta_r_;
    std::vector<RatingEntry> entries_; // sorted by (user, item)

    // CSR-style view per user and per item over the same entries.
    std::vector<std::size_t> user_offsets_; // size n_users_ + 1
    std::vector<ItemRating> user_ratings_;
    std::vector<std::size_t> item_offsets_; // size n_items_ + 1
    std::vector<UserRating> item_ratings_;
};

/// Disjoint partition of users into named classes for one attribute.
class AttributeTable {
public:
    /// `assignment` pairs (user, class index into `classes`); one entry per user.
    AttributeTable(std::string attribute_name, std::vector<std::string> classes,
                   std::vector<std::pair<UserId, std::uint32_t>> assignment);

    const std::string& attribute_name() const noexcept { return name_; }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    std::size_t n_assigned() const noexcept { return n_assigned_; }

    std::optional<std::uint32_t> class_index_of(UserId user) const;
    /// Throws AuditError when the user has no assignment.
    const std::string& class_label_of(UserId user) const;

    /// Assignment as sorted (user, class index) pairs.
    std::vector<std::pair<UserId, std::uint32_t>> assignments() const;

private:
    std::string name_;
    std::vector<std::string> classes_;
    std::vector<std::int64_t> class_by_user_; // index user id, -1 when unassigned
    std::size_t n_assigned_ = 0;
};

/// Age code -> class label, ordered by code.
using AgeBracketMap = std::map<int, std::string>;

/// The MovieLens age encoding mapped onto seven age-bracket labels.
AgeBracketMap default_age_brackets();

/// Parse `UserID::MovieID::Rating::Timestamp` lines. Ratings are integers in
/// [1, scale_max] and are stored divided by scale_max; the timestamp is ignored.
RatingsMatrix parse_movielens_ratings(std::istream& in, int scale_max);

/// Parse `UserID::Gender::Age::Occupation::Zip-code` lines into one table for
/// gender (classes in order of first appearance) and one for age (classes in
/// bracket-map order). Occupation and zip are ignored.
std::pair<AttributeTable, AttributeTable> parse_movielens_users(std::istream& in,
                                                                const AgeBracketMap& age_brackets);

/// Canonical interchange CSV: header-less `user_id,item_id,raw_rating` rows.
RatingsMatrix parse_csv_ratings(std::istream& in, int scale_max);
void write_csv_ratings(std::ostream& out, const RatingsMatrix& matrix, int scale_max);

/// Canonical attribute CSV: header-less `user_id,attribute,class` rows.
/// All rows must name the same attribute.
AttributeTable parse_csv_attributes(std::istream& in);
void write_csv_attributes(std::ostream& out, const AttributeTable& table);

} // namespace reprank
