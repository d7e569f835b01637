#pragma once

#include "mdcrow/eval/grades.hpp"
#include "mdcrow/eval/stats.hpp"
#include "mdcrow/eval/tasks.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mdcrow::eval {

struct ComplexityCorrelation {
    std::string model_id;
    Framework framework = Framework::mdcrow;
    std::size_t n = 0;
    Correlation accuracy;    // complexity vs accuracy boolean
    Correlation completion;  // complexity vs cascade-aware completion fraction
};

// Spearman per (model, framework) over the graded tasks. Configurations with
// fewer than 3 distinct complexities are skipped.
std::vector<ComplexityCorrelation> complexity_correlations(const std::vector<GradeRecord>& grades,
                                                           const std::vector<TaskSpec>& tasks);

struct StyleComparison {
    std::string model_id;
    TTest test;  // natural vs ordered completion fractions on the ladder
};

std::vector<StyleComparison> style_comparisons(const std::vector<GradeRecord>& ladder_grades,
                                               const std::vector<TaskSpec>& ladder,
                                               const TTestOptions& options = {});

struct ReportOptions {
    TTestOptions t_test;
};

// CSV tables and PPM figures under out_dir; returns the files written.
// Either grade list may be empty.
std::vector<std::filesystem::path> write_report(const std::vector<GradeRecord>& grades,
                                                const std::vector<TaskSpec>& tasks,
                                                const std::vector<GradeRecord>& ladder_grades,
                                                const std::vector<TaskSpec>& ladder,
                                                const std::filesystem::path& out_dir,
                                                const ReportOptions& options = {});

} // namespace mdcrow::eval
