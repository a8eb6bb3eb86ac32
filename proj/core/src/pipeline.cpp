#include "reprank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "reprank/io.hpp"
#include "reprank/stats.hpp"

namespace fs = std::filesystem;

namespace reprank {

std::string to_string(AttributeChoice attribute) {
    switch (attribute) {
    case AttributeChoice::gender: return "gender";
    case AttributeChoice::age: return "age";
    case AttributeChoice::none: return "none";
    }
    return "?";
}

void RunConfig::validate() const {
    EngineConfig engine{lambda, 1.0, tolerance, max_iterations, variant};
    engine.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("alpha must lie in ]0,1[, got " + std::to_string(alpha));
    if (scale_max < 2)
        throw ConfigError("scale_max must be at least 2, got " + std::to_string(scale_max));
    if (ratings_path.empty() || !fs::exists(ratings_path))
        throw ConfigError("ratings file not found: " + ratings_path.string());
    if (attribute != AttributeChoice::none && (users_path.empty() || !fs::exists(users_path)))
        throw ConfigError("users file not found: " + users_path.string());
    if (out_dir.empty()) throw ConfigError("output directory not set");
}

namespace {

// Rethrows with the failing stage in front, keeping the error family (and so
// the CLI exit code) intact.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(std::string(name) + ": " + e.what());
    } catch (const AuditError& e) {
        throw AuditError(std::string(name) + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(std::string(name) + ": " + e.what());
    }
}

template <typename Fn>
fs::path write_file(const fs::path& dir, const std::string& name, Fn&& body) {
    fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary); // binary: byte-identical across platforms
    if (!out) throw DomainError("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw DomainError("failed while writing " + path.string());
    return path;
}

std::vector<std::pair<std::string, FiveNumberSummary>>
class_summaries(const ReputationVector& reputations, const AttributeTable* attr) {
    std::vector<std::pair<std::string, FiveNumberSummary>> rows;
    if (attr == nullptr) {
        rows.emplace_back("all", five_number_summary(reputations.values));
        return rows;
    }
    std::vector<std::vector<double>> by_class(attr->classes().size());
    for (UserId u = 1; u <= reputations.values.size(); ++u) {
        auto idx = attr->class_index_of(u);
        if (idx) by_class[*idx].push_back(reputations.values[u - 1]);
    }
    for (std::size_t k = 0; k < by_class.size(); ++k)
        if (!by_class[k].empty())
            rows.emplace_back(attr->classes()[k], five_number_summary(by_class[k]));
    return rows;
}

AttributeTable load_attribute(const RunConfig& config) {
    std::ifstream users(config.users_path);
    if (!users) throw ConfigError("cannot open " + config.users_path.string());
    auto [gender, age] = parse_movielens_users(users, default_age_brackets());
    return config.attribute == AttributeChoice::gender ? std::move(gender) : std::move(age);
}

} // namespace

PipelineOutcome run_pipeline(const RunConfig& config) {
    stage("config", [&] { config.validate(); });
    fs::create_directories(config.out_dir);

    RatingsMatrix matrix = stage("parse-ratings", [&] {
        std::ifstream in(config.ratings_path);
        if (!in) throw ConfigError("cannot open " + config.ratings_path.string());
        return parse_movielens_ratings(in, config.scale_max);
    });

    std::optional<AttributeTable> attr;
    if (config.attribute != AttributeChoice::none)
        attr = stage("parse-users", [&] { return load_attribute(config); });

    EngineConfig engine{config.lambda, 1.0, config.tolerance, config.max_iterations,
                        config.variant};
    RunResult result = stage("rank", [&] {
        RunResult r = run(matrix, engine);
        if (!r.reputation.converged)
            throw DomainError("iteration did not converge within " +
                              std::to_string(config.max_iterations) +
                              " iterations (last step " +
                              format_double(r.reputation.final_delta) + ")");
        return r;
    });
    RankingVector aa = stage("rank", [&] { return aa_ranking(matrix); });

    PipelineOutcome outcome;
    outcome.iterations_run = result.reputation.iterations_run;
    outcome.converged = result.reputation.converged;

    std::optional<HarmonizeResult> mitigated;
    if (attr) {
        outcome.audit_pre = stage("audit-pre", [&] {
            return mw_pairwise_audit(result.reputation, *attr, config.alpha, config.lambda,
                                     matrix.delta_r());
        });
        mitigated = stage("harmonize", [&] { return harmonize(result.reputation, *attr, matrix); });
        outcome.audit_post = stage("audit-post", [&] {
            return mw_pairwise_audit(mitigated->reputations, *attr, config.alpha, config.lambda,
                                     matrix.delta_r());
        });
    }

    stage("evaluate", [&] {
        outcome.tau_report.push_back({"aa_vs_unmitigated",
                                      kendall_tau(aa, result.ranking, TauVariant::tau_b),
                                      kendall_tau(aa, result.ranking, TauVariant::strict)});
        if (mitigated)
            outcome.tau_report.push_back({"aa_vs_mitigated",
                                          kendall_tau(aa, mitigated->ranking, TauVariant::tau_b),
                                          kendall_tau(aa, mitigated->ranking, TauVariant::strict)});
    });

    stage("write-reports", [&] {
        auto& files = outcome.files_written;
        if (config.write_csv) {
            files.push_back(write_file(config.out_dir, "ranking_aa.csv",
                                       [&](std::ostream& o) { write_ranking_csv(o, aa); }));
            files.push_back(write_file(config.out_dir, "reputation_pre.csv", [&](std::ostream& o) {
                write_reputation_csv(o, result.reputation);
            }));
            files.push_back(write_file(config.out_dir, "ranking_pre.csv", [&](std::ostream& o) {
                write_ranking_csv(o, result.ranking);
            }));
            files.push_back(write_file(config.out_dir, "bwc_pre.csv", [&](std::ostream& o) {
                write_summary_csv(o, class_summaries(result.reputation,
                                                     attr ? &*attr : nullptr));
            }));
            if (outcome.audit_pre)
                files.push_back(write_file(config.out_dir, "audit_pre.csv", [&](std::ostream& o) {
                    write_audit_csv(o, *outcome.audit_pre);
                }));
            if (mitigated) {
                files.push_back(
                    write_file(config.out_dir, "reputation_post.csv", [&](std::ostream& o) {
                        write_reputation_csv(o, mitigated->reputations);
                    }));
                files.push_back(write_file(config.out_dir, "ranking_post.csv", [&](std::ostream& o) {
                    write_ranking_csv(o, mitigated->ranking);
                }));
                files.push_back(write_file(config.out_dir, "bwc_post.csv", [&](std::ostream& o) {
                    write_summary_csv(o, class_summaries(mitigated->reputations, &*attr));
                }));
            }
            if (outcome.audit_post)
                files.push_back(write_file(config.out_dir, "audit_post.csv", [&](std::ostream& o) {
                    write_audit_csv(o, *outcome.audit_post);
                }));
            files.push_back(write_file(config.out_dir, "kendall_tau.csv", [&](std::ostream& o) {
                o << "pairing,tau_b,tau_strict\n";
                for (const TauReportRow& row : outcome.tau_report)
                    o << row.pairing << ',' << format_double(row.tau_b) << ','
                      << format_double(row.tau_strict) << '\n';
            }));
        }
        if (config.write_json) {
            if (outcome.audit_pre)
                files.push_back(write_file(config.out_dir, "audit_pre.json", [&](std::ostream& o) {
                    write_audit_json(o, *outcome.audit_pre);
                }));
            if (outcome.audit_post)
                files.push_back(write_file(config.out_dir, "audit_post.json", [&](std::ostream& o) {
                    write_audit_json(o, *outcome.audit_post);
                }));
            files.push_back(write_file(config.out_dir, "run_summary.json", [&](std::ostream& o) {
                nlohmann::ordered_json doc;
                doc["ratings"] = config.ratings_path.string();
                doc["users"] = config.users_path.string();
                doc["attribute"] = to_string(config.attribute);
                doc["scale_max"] = config.scale_max;
                doc["lambda"] = config.lambda;
                doc["variant"] = config.variant == Variant::li ? "li" : "normalized";
                doc["tolerance"] = config.tolerance;
                doc["max_iterations"] = config.max_iterations;
                doc["alpha"] = config.alpha;
                doc["n_users"] = matrix.n_users();
                doc["n_items"] = matrix.n_items();
                doc["n_ratings"] = matrix.n_ratings();
                doc["iterations_run"] = outcome.iterations_run;
                doc["converged"] = outcome.converged;
                nlohmann::ordered_json taus = nlohmann::ordered_json::object();
                for (const TauReportRow& row : outcome.tau_report)
                    taus[row.pairing] = {{"tau_b", row.tau_b}, {"tau_strict", row.tau_strict}};
                doc["kendall_tau"] = taus;
                o << doc.dump(2) << '\n';
            }));
        }
    });

    return outcome;
}

namespace {

std::string fixed4(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
}

std::string sig4(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

// Class order as emitted: first row's class_a, then every class_b of that row's block.
std::vector<std::string> classes_in_order(const std::vector<PairAudit>& pairs) {
    std::vector<std::string> classes;
    auto add = [&classes](const std::string& label) {
        if (std::find(classes.begin(), classes.end(), label) == classes.end())
            classes.push_back(label);
    };
    for (const PairAudit& p : pairs) {
        add(p.class_a);
        add(p.class_b);
    }
    return classes;
}

void render_matrix(std::ostream& out, const std::vector<PairAudit>& pairs,
                   const std::string& title,
                   const std::function<std::string(const PairAudit&)>& cell) {
    auto classes = classes_in_order(pairs);
    std::vector<std::string> cells;
    cells.reserve(pairs.size());
    std::size_t width = 10;
    for (const auto& c : classes) width = std::max(width, c.size() + 2);
    for (const PairAudit& p : pairs) {
        cells.push_back(cell(p));
        width = std::max(width, cells.back().size() + 2);
    }

    out << title << '\n';
    out << std::string(width, ' ');
    for (std::size_t j = 1; j < classes.size(); ++j)
        out << std::setw(static_cast<int>(width)) << classes[j];
    out << '\n';
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
        out << std::setw(static_cast<int>(width)) << classes[i];
        for (std::size_t j = 1; j < classes.size(); ++j) {
            if (j <= i) {
                out << std::setw(static_cast<int>(width)) << "";
            } else {
                out << std::setw(static_cast<int>(width)) << cells[k];
                ++k;
            }
        }
        out << '\n';
    }
    out << '\n';
}

void render_audit(std::ostream& out, const fs::path& file, const std::string& heading) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + file.string());
    auto pairs = read_audit_pairs_csv(in);
    if (pairs.empty()) throw ParseError("no audit rows in " + file.string());
    render_matrix(out, pairs, heading + ": disparate reputation (mean a - mean b)",
                  [](const PairAudit& p) { return fixed4(p.delta); });
    render_matrix(out, pairs, heading + ": Mann-Whitney verdicts (p-value)",
                  [](const PairAudit& p) {
                      return std::string(p.rejected ? "H1 " : "H0 ") + sig4(p.p_value);
                  });
}

} // namespace

void print_report(const std::filesystem::path& dir, std::ostream& out) {
    if (!fs::exists(dir) || !fs::is_directory(dir))
        throw ConfigError("report directory not found: " + dir.string());

    fs::path tau_file = dir / "kendall_tau.csv";
    fs::path pre_file = dir / "audit_pre.csv";
    fs::path post_file = dir / "audit_post.csv";
    if (!fs::exists(tau_file))
        throw ConfigError("no reports under " + dir.string() +
                          "; expected at least kendall_tau.csv (plus audit_pre.csv and "
                          "audit_post.csv for audited runs)");

    if (fs::exists(pre_file)) render_audit(out, pre_file, "pre-mitigation");
    if (fs::exists(post_file)) render_audit(out, post_file, "post-mitigation");

    std::ifstream tau(tau_file);
    if (!tau) throw ConfigError("cannot open " + tau_file.string());
    std::string line;
    std::size_t line_no = 0;
    out << "Kendall tau vs arithmetic average\n";
    out << std::setw(22) << "pairing" << std::setw(12) << "tau_b" << std::setw(12) << "tau_strict"
        << '\n';
    bool any = false;
    while (std::getline(tau, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue; // header
        std::istringstream fields(line);
        std::string pairing, tb, ts;
        if (!std::getline(fields, pairing, ',') || !std::getline(fields, tb, ',') ||
            !std::getline(fields, ts))
            throw ParseError("bad kendall_tau row", line_no);
        try {
            out << std::setw(22) << pairing << std::setw(12) << fixed4(std::stod(tb))
                << std::setw(12) << fixed4(std::stod(ts)) << '\n';
        } catch (const std::exception&) {
            throw ParseError("bad kendall_tau row", line_no);
        }
        any = true;
    }
    if (!any) throw ParseError("no data rows in " + tau_file.string());
}

} // namespace reprank
