#pragma once

#include <string>
#include <vector>

#include "dqgp/harness/experiment.hpp"
#include "dqgp/io/csv.hpp"

namespace dqgp::io {

inline constexpr int kTickSchema = 1;
inline constexpr int kUpdateSchema = 1;
inline constexpr int kMetricsSchema = 1;
inline constexpr int kSummarySchema = 1;
inline constexpr int kDiagnoseSchema = 1;

/// Per-tick rows. GP columns are present only when the GP was enabled.
CsvTable tick_table(const harness::EpisodeLog& log);
CsvTable update_table(const harness::EpisodeLog& log);
CsvTable metrics_table(const harness::MetricsWindow& m);

/// Inverse of tick_table/update_table; the metadata fields are filled from
/// the arguments.
harness::EpisodeLog episode_from_tables(const CsvTable& ticks, const CsvTable& updates, const std::string& name,
                                        std::uint64_t seed, bool compensate);

CsvTable summary_csv(const std::vector<harness::SummaryRow>& rows);
/// Aligned text in the layout of a trajectory × {MAE, MSE} × {attitude,
/// position} table with GP / without GP / ratio lines.
std::string summary_text(const std::vector<harness::SummaryRow>& rows);

/// Per-tick true disturbance, GP mean, ±2σ band and ρ‡ for both GPs.
/// Throws ConfigError when the log has no GP columns.
CsvTable diagnose_table(const CsvTable& ticks);

}  // namespace dqgp::io
