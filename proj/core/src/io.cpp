#include "reprank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "reprank/errors.hpp"

namespace reprank {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(',', pos);
        if (next == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_double_field(const std::string& text, std::size_t line_no) {
    try {
        std::size_t consumed = 0;
        double v = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad numeric field '" + text + "'", line_no);
    }
}

template <typename Int>
Int parse_id_field(const std::string& text, std::size_t line_no) {
    Int out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || out == 0)
        throw ParseError("bad id field '" + text + "'", line_no);
    return out;
}

} // namespace

void write_reputation_csv(std::ostream& out, const ReputationVector& reputations) {
    for (std::size_t k = 0; k < reputations.values.size(); ++k)
        out << (k + 1) << ',' << format_double(reputations.values[k]) << '\n';
}

std::vector<double> read_reputation_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 2)
            throw ParseError("expected 'user_id,reputation'", line_no);
        UserId user = parse_id_field<UserId>(fields[0], line_no);
        if (user != values.size() + 1)
            throw ParseError("user ids must be dense and ascending, got " + fields[0], line_no);
        values.push_back(parse_double_field(fields[1], line_no));
    }
    if (values.empty()) throw ParseError("reputation input holds no records");
    return values;
}

void write_ranking_csv(std::ostream& out, const RankingVector& ranking) {
    for (const auto& [item, score] : ranking.scores())
        out << item << ',' << format_double(score) << '\n';
}

RankingVector read_ranking_csv(std::istream& in) {
    std::vector<std::pair<ItemId, double>> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 2)
            throw ParseError("expected 'item_id,score'", line_no);
        ItemId item = parse_id_field<ItemId>(fields[0], line_no);
        scores.emplace_back(item, parse_double_field(fields[1], line_no));
    }
    if (scores.empty()) throw ParseError("ranking input holds no records");
    return RankingVector(std::move(scores));
}

void write_audit_csv(std::ostream& out, const DrAuditReport& report) {
    for (const PairAudit& p : report.pairs) {
        out << p.class_a << ',' << p.class_b << ',' << format_double(p.delta) << ','
            << format_double(p.u_statistic) << ',' << format_double(p.p_value) << ','
            << (p.rejected ? "true" : "false") << '\n';
    }
}

std::vector<PairAudit> read_audit_pairs_csv(std::istream& in) {
    std::vector<PairAudit> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 6)
            throw ParseError("expected 'class_a,class_b,delta,u_stat,p_value,rejected'", line_no);
        PairAudit p;
        p.class_a = fields[0];
        p.class_b = fields[1];
        p.delta = parse_double_field(fields[2], line_no);
        p.u_statistic = parse_double_field(fields[3], line_no);
        p.p_value = parse_double_field(fields[4], line_no);
        if (fields[5] == "true")
            p.rejected = true;
        else if (fields[5] == "false")
            p.rejected = false;
        else
            throw ParseError("bad verdict '" + fields[5] + "'", line_no);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void write_audit_json(std::ostream& out, const DrAuditReport& report) {
    nlohmann::ordered_json doc;
    doc["attribute"] = report.attribute;
    doc["alpha"] = report.alpha;
    doc["range_bound"] = {report.range_lo, report.range_hi};
    doc["observed_delta_range"] = {report.observed_lo, report.observed_hi};

    // Triangular layout: one row per class, pairs keyed by the other class.
    std::vector<std::string> classes;
    for (const PairAudit& p : report.pairs) {
        if (std::find(classes.begin(), classes.end(), p.class_a) == classes.end())
            classes.push_back(p.class_a);
        if (std::find(classes.begin(), classes.end(), p.class_b) == classes.end())
            classes.push_back(p.class_b);
    }
    doc["classes"] = classes;
    nlohmann::ordered_json rows = nlohmann::ordered_json::object();
    for (const PairAudit& p : report.pairs) {
        rows[p.class_a][p.class_b] = {
            {"delta", p.delta},
            {"u_statistic", p.u_statistic},
            {"p_value", p.p_value},
            {"rejected", p.rejected},
        };
    }
    doc["pairs"] = rows;
    out << doc.dump(2) << '\n';
}

void write_summary_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, FiveNumberSummary>>& groups) {
    out << "group,min,whisker_low,q1,median,q3,whisker_high,max,outliers\n";
    for (const auto& [label, s] : groups) {
        out << label << ',' << format_double(s.min) << ',' << format_double(s.whisker_low) << ','
            << format_double(s.q1) << ',' << format_double(s.median) << ',' << format_double(s.q3)
            << ',' << format_double(s.whisker_high) << ',' << format_double(s.max) << ','
            << s.outliers << '\n';
    }
}

} // namespace reprank
