#pragma once

#include <string>
#include <vector>

#include "microcell/fluor.hpp"
#include "microcell/geometry.hpp"

namespace microcell {

/// One database row: a kept cell with its measurements and per-channel
/// fluorescence statistics.
struct CellRecord {
    int id = 0;        // component label in the cell mask
    int frame_id = 0;  // image index in the run
    CellMeasurements measurements;
    std::vector<CellFluorStats> channels;  // aligned with DatabaseTable::channel_names
};

struct DatabaseTable {
    std::vector<std::string> channel_names;
    std::vector<CellRecord> rows;  // (frame_id, id) ascending

    /// Highest cluster count of any row for the given channel index.
    int max_clusters(size_t channel) const;
};

/// Rows for one frame, ascending id. measurements/stats are keyed by cell id
/// and must cover exactly the kept cells.
std::vector<CellRecord> build_records(
    const ComponentSet& cells, const std::vector<std::pair<int, CellMeasurements>>& measurements,
    const std::vector<std::vector<std::pair<int, CellFluorStats>>>& channel_stats, int frame_id);

/// Header text for the table (also the first line of write_csv output).
std::string database_header(const DatabaseTable& table);

/// Deterministic UTF-8 CSV; identical inputs produce identical bytes.
void write_csv(const DatabaseTable& table, const std::string& path);
std::string database_csv(const DatabaseTable& table);

}  // namespace microcell
