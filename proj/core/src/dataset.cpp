#include "reprank/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace reprank {

namespace {

// Splits on an exact separator token; empty fields are preserved.
std::vector<std::string_view> split(std::string_view line, std::string_view sep) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !text.empty();
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

void check_scale(int scale_max) {
    if (scale_max < 2)
        throw ConfigError("rating scale_max must be at least 2, got " + std::to_string(scale_max));
}

} // namespace

RatingsMatrix::RatingsMatrix(UserId n_users, ItemId n_items, std::vector<RatingEntry> entries,
                             double delta_r)
    : n_users_(n_users), n_items_(n_items), delta_r_(delta_r), entries_(std::move(entries)) {
    if (!(delta_r_ > 0.0 && delta_r_ < 1.0))
        throw ConfigError("delta_r must lie in ]0,1[, got " + std::to_string(delta_r_));

    std::sort(entries_.begin(), entries_.end(), [](const RatingEntry& a, const RatingEntry& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });

    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const RatingEntry& e = entries_[k];
        if (e.user == 0 || e.user > n_users_ || e.item == 0 || e.item > n_items_)
            throw DomainError("rating entry (" + std::to_string(e.user) + "," +
                              std::to_string(e.item) + ") outside declared bounds");
        if (!(e.value > 0.0 && e.value <= 1.0))
            throw RangeError("normalized rating for (" + std::to_string(e.user) + "," +
                             std::to_string(e.item) + ") outside ]0,1]");
        if (k > 0 && entries_[k - 1].user == e.user && entries_[k - 1].item == e.item)
            throw IntegrityError("duplicate rating for user " + std::to_string(e.user) +
                                 ", item " + std::to_string(e.item));
    }

    // Per-user view follows directly from the (user, item) sort.
    // offsets[u] = end of user u's block, so user u owns [offsets[u-1], offsets[u]).
    user_offsets_.assign(static_cast<std::size_t>(n_users_) + 1, 0);
    for (const RatingEntry& e : entries_) user_offsets_[e.user]++;
    for (std::size_t u = 1; u <= n_users_; ++u) user_offsets_[u] += user_offsets_[u - 1];
    user_ratings_.resize(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k)
        user_ratings_[k] = ItemRating{entries_[k].item, entries_[k].value};

    // Per-item view via stable counting sort, so users stay ascending inside
    // each item block.
    item_offsets_.assign(static_cast<std::size_t>(n_items_) + 1, 0);
    for (const RatingEntry& e : entries_) item_offsets_[e.item]++;
    for (std::size_t i = 1; i <= n_items_; ++i) item_offsets_[i] += item_offsets_[i - 1];
    item_ratings_.resize(entries_.size());
    {
        std::vector<std::size_t> cursor(static_cast<std::size_t>(n_items_) + 1, 0);
        for (ItemId i = 1; i <= n_items_; ++i) cursor[i] = item_offsets_[i - 1];
        for (const RatingEntry& e : entries_)
            item_ratings_[cursor[e.item]++] = UserRating{e.user, e.value};
    }
}

std::span<const RatingsMatrix::UserRating> RatingsMatrix::ratings_of_item(ItemId item) const {
    if (item == 0 || item > n_items_)
        throw DomainError("item id " + std::to_string(item) + " outside declared bounds [1," +
                          std::to_string(n_items_) + "]");
    std::size_t lo = item_offsets_[item - 1];
    std::size_t hi = item_offsets_[item];
    return {item_ratings_.data() + lo, hi - lo};
}

std::span<const RatingsMatrix::ItemRating> RatingsMatrix::ratings_of_user(UserId user) const {
    if (user == 0 || user > n_users_)
        throw DomainError("user id " + std::to_string(user) + " outside declared bounds [1," +
                          std::to_string(n_users_) + "]");
    std::size_t lo = user_offsets_[user - 1];
    std::size_t hi = user_offsets_[user];
    return {user_ratings_.data() + lo, hi - lo};
}

std::vector<UserId> RatingsMatrix::users_of_item(ItemId item) const {
    auto span = ratings_of_item(item);
    std::vector<UserId> ids;
    ids.reserve(span.size());
    for (const UserRating& r : span) ids.push_back(r.user);
    return ids;
}

std::vector<ItemId> RatingsMatrix::items_of_user(UserId user) const {
    auto span = ratings_of_user(user);
    std::vector<ItemId> ids;
    ids.reserve(span.size());
    for (const ItemRating& r : span) ids.push_back(r.item);
    return ids;
}

AttributeTable::AttributeTable(std::string attribute_name, std::vector<std::string> classes,
                               std::vector<std::pair<UserId, std::uint32_t>> assignment)
    : name_(std::move(attribute_name)), classes_(std::move(classes)) {
    UserId max_user = 0;
    for (const auto& [user, cls] : assignment) {
        if (user == 0) throw DomainError("attribute assignment for user id 0");
        if (cls >= classes_.size())
            throw DomainError("attribute assignment references class index " +
                              std::to_string(cls) + " outside the class list");
        max_user = std::max(max_user, user);
    }
    class_by_user_.assign(static_cast<std::size_t>(max_user) + 1, -1);
    for (const auto& [user, cls] : assignment) {
        if (class_by_user_[user] != -1)
            throw IntegrityError("user " + std::to_string(user) + " assigned twice for attribute " +
                                 name_);
        class_by_user_[user] = cls;
        ++n_assigned_;
    }
}

std::optional<std::uint32_t> AttributeTable::class_index_of(UserId user) const {
    if (user == 0 || user >= class_by_user_.size() || class_by_user_[user] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(class_by_user_[user]);
}

const std::string& AttributeTable::class_label_of(UserId user) const {
    auto idx = class_index_of(user);
    if (!idx)
        throw AuditError("user " + std::to_string(user) + " has no " + name_ + " assignment");
    return classes_[*idx];
}

std::vector<std::pair<UserId, std::uint32_t>> AttributeTable::assignments() const {
    std::vector<std::pair<UserId, std::uint32_t>> out;
    out.reserve(n_assigned_);
    for (UserId u = 1; u < class_by_user_.size(); ++u)
        if (class_by_user_[u] >= 0) out.emplace_back(u, static_cast<std::uint32_t>(class_by_user_[u]));
    return out;
}

AgeBracketMap default_age_brackets() {
    return {
        {1, "(<18)"},  {18, "(18-24)"}, {25, "(25-34)"}, {35, "(35-44)"},
        {45, "(45-49)"}, {50, "(50-55)"}, {56, "(>55)"},
    };
}

RatingsMatrix parse_movielens_ratings(std::istream& in, int scale_max) {
    check_scale(scale_max);
    std::vector<RatingEntry> entries;
    UserId max_user = 0;
    ItemId max_item = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        auto fields = split(text, "::");
        if (fields.size() != 4)
            throw ParseError("expected 4 '::'-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        UserId user;
        ItemId item;
        int raw;
        if (!parse_int(fields[0], user) || user == 0)
            throw ParseError("bad user id '" + std::string(fields[0]) + "'", line_no);
        if (!parse_int(fields[1], item) || item == 0)
            throw ParseError("bad item id '" + std::string(fields[1]) + "'", line_no);
        if (!parse_int(fields[2], raw))
            throw ParseError("bad rating '" + std::string(fields[2]) + "'", line_no);
        if (raw < 1 || raw > scale_max)
            throw RangeError("rating " + std::to_string(raw) + " outside [1," +
                                 std::to_string(scale_max) + "]",
                             line_no);
        entries.push_back({user, item, static_cast<double>(raw) / scale_max});
        max_user = std::max(max_user, user);
        max_item = std::max(max_item, item);
    }
    if (entries.empty()) throw ParseError("ratings input holds no records");
    double delta_r = static_cast<double>(scale_max - 1) / scale_max;
    return RatingsMatrix(max_user, max_item, std::move(entries), delta_r);
}

std::pair<AttributeTable, AttributeTable> parse_movielens_users(std::istream& in,
                                                                const AgeBracketMap& age_brackets) {
    std::vector<std::string> gender_classes;
    std::vector<std::pair<UserId, std::uint32_t>> gender_assign;

    // Age classes keep the bracket-map order (ascending code); only brackets
    // that occur in the data become classes.
    std::vector<std::string> age_classes;
    std::vector<std::pair<UserId, std::uint32_t>> age_assign_codes; // temp: index into age_brackets
    std::vector<int> codes;
    for (const auto& [code, label] : age_brackets) codes.push_back(code);

    std::string line;
    std::size_t line_no = 0;
    std::vector<bool> code_seen(codes.size(), false);
    std::vector<std::pair<UserId, std::size_t>> age_by_code_index;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        auto fields = split(text, "::");
        if (fields.size() != 5)
            throw ParseError("expected 5 '::'-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        UserId user;
        int age_code;
        if (!parse_int(fields[0], user) || user == 0)
            throw ParseError("bad user id '" + std::string(fields[0]) + "'", line_no);
        if (fields[1].empty())
            throw ParseError("empty gender token", line_no);
        if (!parse_int(fields[2], age_code))
            throw ParseError("bad age code '" + std::string(fields[2]) + "'", line_no);

        std::string gender(fields[1]);
        auto it = std::find(gender_classes.begin(), gender_classes.end(), gender);
        std::uint32_t gender_idx;
        if (it == gender_classes.end()) {
            gender_idx = static_cast<std::uint32_t>(gender_classes.size());
            gender_classes.push_back(gender);
        } else {
            gender_idx = static_cast<std::uint32_t>(it - gender_classes.begin());
        }
        gender_assign.emplace_back(user, gender_idx);

        auto code_it = std::find(codes.begin(), codes.end(), age_code);
        if (code_it == codes.end())
            throw MappingError("age code " + std::to_string(age_code) +
                                   " has no bracket mapping",
                               line_no);
        std::size_t code_index = static_cast<std::size_t>(code_it - codes.begin());
        code_seen[code_index] = true;
        age_by_code_index.emplace_back(user, code_index);
    }

    // Compact the observed brackets into the final class list. Several codes
    // may share one label (a coarser bracket map); they form a single class.
    std::vector<std::int32_t> class_of_code(codes.size(), -1);
    for (std::size_t k = 0; k < codes.size(); ++k) {
        if (!code_seen[k]) continue;
        const std::string& label = age_brackets.at(codes[k]);
        auto it = std::find(age_classes.begin(), age_classes.end(), label);
        if (it == age_classes.end()) {
            class_of_code[k] = static_cast<std::int32_t>(age_classes.size());
            age_classes.push_back(label);
        } else {
            class_of_code[k] = static_cast<std::int32_t>(it - age_classes.begin());
        }
    }
    std::vector<std::pair<UserId, std::uint32_t>> age_assign;
    age_assign.reserve(age_by_code_index.size());
    for (const auto& [user, code_index] : age_by_code_index)
        age_assign.emplace_back(user, static_cast<std::uint32_t>(class_of_code[code_index]));

    return {AttributeTable("gender", std::move(gender_classes), std::move(gender_assign)),
            AttributeTable("age", std::move(age_classes), std::move(age_assign))};
}

RatingsMatrix parse_csv_ratings(std::istream& in, int scale_max) {
    check_scale(scale_max);
    std::vector<RatingEntry> entries;
    UserId max_user = 0;
    ItemId max_item = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        auto fields = split(text, ",");
        if (fields.size() != 3)
            throw ParseError("expected 'user_id,item_id,raw_rating', got " +
                                 std::to_string(fields.size()) + " fields",
                             line_no);
        UserId user;
        ItemId item;
        int raw;
        if (!parse_int(fields[0], user) || user == 0)
            throw ParseError("bad user id '" + std::string(fields[0]) + "'", line_no);
        if (!parse_int(fields[1], item) || item == 0)
            throw ParseError("bad item id '" + std::string(fields[1]) + "'", line_no);
        if (!parse_int(fields[2], raw))
            throw ParseError("bad rating '" + std::string(fields[2]) + "'", line_no);
        if (raw < 1 || raw > scale_max)
            throw RangeError("rating " + std::to_string(raw) + " outside [1," +
                                 std::to_string(scale_max) + "]",
                             line_no);
        entries.push_back({user, item, static_cast<double>(raw) / scale_max});
        max_user = std::max(max_user, user);
        max_item = std::max(max_item, item);
    }
    if (entries.empty()) throw ParseError("ratings input holds no records");
    double delta_r = static_cast<double>(scale_max - 1) / scale_max;
    return RatingsMatrix(max_user, max_item, std::move(entries), delta_r);
}

void write_csv_ratings(std::ostream& out, const RatingsMatrix& matrix, int scale_max) {
    check_scale(scale_max);
    for (const RatingEntry& e : matrix.entries()) {
        long raw = std::lround(e.value * scale_max);
        out << e.user << ',' << e.item << ',' << raw << '\n';
    }
}

AttributeTable parse_csv_attributes(std::istream& in) {
    std::string attribute;
    std::vector<std::string> classes;
    std::vector<std::pair<UserId, std::uint32_t>> assignment;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        auto fields = split(text, ",");
        if (fields.size() != 3)
            throw ParseError("expected 'user_id,attribute,class', got " +
                                 std::to_string(fields.size()) + " fields",
                             line_no);
        UserId user;
        if (!parse_int(fields[0], user) || user == 0)
            throw ParseError("bad user id '" + std::string(fields[0]) + "'", line_no);
        if (attribute.empty())
            attribute = std::string(fields[1]);
        else if (attribute != fields[1])
            throw ParseError("mixed attribute names '" + attribute + "' and '" +
                                 std::string(fields[1]) + "'",
                             line_no);
        std::string label(fields[2]);
        if (label.empty()) throw ParseError("empty class label", line_no);
        auto it = std::find(classes.begin(), classes.end(), label);
        std::uint32_t idx;
        if (it == classes.end()) {
            idx = static_cast<std::uint32_t>(classes.size());
            classes.push_back(label);
        } else {
            idx = static_cast<std::uint32_t>(it - classes.begin());
        }
        assignment.emplace_back(user, idx);
    }
    if (attribute.empty()) throw ParseError("attribute input holds no records");
    return AttributeTable(std::move(attribute), std::move(classes), std::move(assignment));
}

void write_csv_attributes(std::ostream& out, const AttributeTable& table) {
    for (const auto& [user, cls] : table.assignments())
        out << user << ',' << table.attribute_name() << ',' << table.classes()[cls] << '\n';
}

} // namespace reprank
