#pragma once

#include <string>
#include <vector>

#include "frsde/experiment.hpp"

namespace frsde::bench {

enum class ReportFormat { csv, markdown, svg_plots };

/// Renders a batch of experiment reports (one per density x sample size)
/// into out_dir. CSV schemas:
///   metrics.csv : density,n_subjects,estimator,metric,mean,stderr,replicates
///   boundary.csv: density,n_subjects,x,f_true,f_bernstein,f_kde
/// markdown produces report.md; svg_plots produces one overlay plot per
/// report. Output is deterministic; an empty batch is rejected before any
/// file is created.
std::vector<std::string> emit_report(const std::vector<MetricsReport>& reports,
                                     const std::string& out_dir,
                                     const std::vector<ReportFormat>& formats);

/// In-memory markdown rendering (used by the CLI `tables` command).
std::string render_markdown(const std::vector<MetricsReport>& reports);

} // namespace frsde::bench
