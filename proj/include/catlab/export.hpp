#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "catlab/harness.hpp"
#include "catlab/kernel.hpp"
#include "catlab/observables.hpp"

namespace catlab {

/// Trajectory JSON-lines. The first line is the file header
/// {"format":"catlab.trajectory","version":1,"records":K}; each record then
/// contributes one "record" line followed by its "row", "snapshot" and
/// "trace" lines.
void write_trajectories_jsonl(std::ostream& os, std::span<const TrajectoryRecord> records);
/// Inverse of write_trajectories_jsonl. Throws ValidationError on a bad file.
std::vector<TrajectoryRecord> read_trajectories_jsonl(std::istream& is);

/// Every CSV starts with "# catlab.<kind> v1" followed by a column header.
void write_diameter_csv(std::ostream& os, std::span<const TrajectoryRecord> records);
/// One row per (m, n, seed) of the defined cells.
void write_sweep_csv(std::ostream& os, const SweepResult& result);
/// One row per cell, including undefined ones.
void write_sweep_cells_csv(std::ostream& os, const SweepResult& result);
/// Columns k, xi, S_1..S_d.
void write_walk_csv(std::ostream& os, const RenewalSeries& series, std::span<const Point> walk,
                    std::size_t dim);
/// Columns t, chosen, sep, renewal.
void write_copycat_csv(std::ostream& os, const CopyTrajectory& run);
void write_stationarity_csv(std::ostream& os, const StationarityReport& report);

/// Opens `path` for writing (creating parent directories) and runs `body`.
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace catlab
