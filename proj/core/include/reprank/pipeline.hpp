#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reprank/independence.hpp"
#include "reprank/reputation.hpp"

namespace reprank {

enum class AttributeChoice { gender, age, none };

std::string to_string(AttributeChoice attribute);

struct RunConfig {
    std::filesystem::path ratings_path;
    std::filesystem::path users_path; // may be empty when attribute == none
    AttributeChoice attribute = AttributeChoice::gender;
    int scale_max = 5;
    double lambda = 0.5;
    Variant variant = Variant::normalized;
    double tolerance = 1e-8;
    int max_iterations = 200;
    double alpha = 0.05;
    std::filesystem::path out_dir;
    bool write_csv = true;
    bool write_json = false;

    /// Throws ConfigError on out-of-range fields or missing input paths.
    void validate() const;
};

struct TauReportRow {
    std::string pairing; // e.g. "aa_vs_unmitigated"
    double tau_b;
    double tau_strict;
};

/// What run_pipeline computed, for callers that want more than the files.
struct PipelineOutcome {
    int iterations_run = 0;
    bool converged = false;
    std::optional<DrAuditReport> audit_pre;
    std::optional<DrAuditReport> audit_post;
    std::vector<TauReportRow> tau_report;
    std::vector<std::filesystem::path> files_written;
};

/// Full audit pipeline: parse, iterate to convergence, audit disparate
/// reputation, harmonize, re-audit, and compare rankings against the
/// arithmetic-average baseline. Writes machine-readable reports under
/// config.out_dir; two runs with the same config produce byte-identical files.
/// With attribute == none the audit/mitigation stages are skipped.
PipelineOutcome run_pipeline(const RunConfig& config);

/// Render the report files under `dir` as aligned text tables.
/// Missing directory/files raise ConfigError; corrupt rows raise ParseError.
void print_report(const std::filesystem::path& dir, std::ostream& out);

} // namespace reprank
