#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "lazy_newton/scene_config.hpp"

namespace lazy_newton {

struct FieldRow {
    double t = 0.0;
    Vec3 point;
    double potential = 0.0;
    Vec3 field;
    bool singular = false;
};

struct FieldMapResult {
    /// Time-major, then grid-point order.
    std::vector<FieldRow> rows;
    std::size_t singular_rows = 0;
};

/// Evaluates the superposed delayed potential and field on every grid point
/// and time. Rows near a source path come back with NaN values and are
/// counted in singular_rows. Output is independent of `threads`
/// (0 = hardware concurrency).
FieldMapResult field_map(const SceneConfig& config, const GridSpec& grid, unsigned threads = 0);

/// Worker count from a LAZY_NEWTON_THREADS style value: unset, empty, 0 or
/// unparsable selects hardware concurrency.
unsigned resolve_thread_count(std::optional<std::string_view> setting);

inline constexpr std::string_view kFieldCsvHeader = "t,x,y,z,phi,gx,gy,gz";

void write_field_csv(std::ostream& out, const FieldMapResult& result);
void write_field_json(std::ostream& out, const FieldMapResult& result);

}  // namespace lazy_newton
