#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace pitchlog {

/// Provider coordinates: x along the pitch length, y across the width,
/// both as fractions with the origin in the top-left corner (y grows downward).
struct NormalizedPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

using MaybePoint = std::optional<NormalizedPoint>;

/// Uniform pitch grid plus the metric pitch size used for distances.
struct GridSpec {
    int cols = 6;
    int rows = 4;
    double pitch_length_m = 105.0;
    double pitch_width_m = 68.0;

    /// Throws ConfigError unless cols, rows and both dimensions are positive.
    void validate() const;
    int cell_count() const { return cols * rows; }
};

/// Grid cell, column counted from the left and row counted from the bottom.
struct GridCell {
    int col = 0;
    int row = 0;

    friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

/// Cell containing `p`. Intervals are half-open; the far edge (1.0) folds into
/// the last column/row. Coordinates slightly outside the unit square (players
/// off the touchline) are clamped first. Throws InvariantError for an absent or
/// non-finite point.
GridCell cell_of(const MaybePoint& p, const GridSpec& spec = {});

/// "A1" style label: column letters (A..Z, then AA..) followed by the 1-based row.
std::string cell_label(GridCell c);

/// Inverse of cell_label; nullopt when the text is not a label or is off-grid.
std::optional<GridCell> parse_cell_label(std::string_view label, const GridSpec& spec = {});

/// Centre of a cell in provider coordinates.
NormalizedPoint cell_center(GridCell c, const GridSpec& spec = {});

bool is_valid_cell(GridCell c, const GridSpec& spec);

/// Euclidean distance in metres after scaling by the pitch dimensions.
double metric_distance(const MaybePoint& a, const MaybePoint& b, const GridSpec& spec = {});

/// Sum of segment lengths over consecutive present points; absent samples are
/// bridged by joining the nearest present neighbours. Throws on an empty list.
double path_length(std::span<const MaybePoint> points, const GridSpec& spec = {});

} // namespace pitchlog
