#include "pitchlog/spatial.hpp"

#include "pitchlog/error.hpp"

#include <algorithm>
#include <cmath>

namespace pitchlog {

void GridSpec::validate() const {
    if (cols < 1 || rows < 1) {
        throw ConfigError("grid needs at least one column and one row");
    }
    if (!(pitch_length_m > 0.0) || !(pitch_width_m > 0.0)) {
        throw ConfigError("pitch dimensions must be positive");
    }
}

namespace {

int bucket(double fraction, int count) {
    fraction = std::clamp(fraction, 0.0, 1.0);
    const int idx = static_cast<int>(std::floor(fraction * count));
    return std::min(idx, count - 1);
}

const NormalizedPoint& require(const MaybePoint& p) {
    if (!p || !std::isfinite(p->x) || !std::isfinite(p->y)) {
        throw InvariantError("no position");
    }
    return *p;
}

} // namespace

GridCell cell_of(const MaybePoint& p, const GridSpec& spec) {
    const auto& pt = require(p);
    // Provider y runs top to bottom; rows count from the bottom.
    return GridCell{bucket(pt.x, spec.cols), bucket(1.0 - pt.y, spec.rows)};
}

std::string cell_label(GridCell c) {
    std::string letters;
    int n = c.col;
    do {
        letters.insert(letters.begin(), static_cast<char>('A' + n % 26));
        n = n / 26 - 1;
    } while (n >= 0);
    return letters + std::to_string(c.row + 1);
}

std::optional<GridCell> parse_cell_label(std::string_view label, const GridSpec& spec) {
    std::size_t i = 0;
    int col = 0;
    while (i < label.size() && label[i] >= 'A' && label[i] <= 'Z') {
        col = col * 26 + (label[i] - 'A' + 1);
        ++i;
    }
    if (i == 0 || i == label.size()) {
        return std::nullopt;
    }
    int row = 0;
    for (std::size_t j = i; j < label.size(); ++j) {
        if (label[j] < '0' || label[j] > '9') {
            return std::nullopt;
        }
        row = row * 10 + (label[j] - '0');
        if (row > 1'000'000) {
            return std::nullopt;
        }
    }
    GridCell cell{col - 1, row - 1};
    if (!is_valid_cell(cell, spec)) {
        return std::nullopt;
    }
    return cell;
}

bool is_valid_cell(GridCell c, const GridSpec& spec) {
    return c.col >= 0 && c.col < spec.cols && c.row >= 0 && c.row < spec.rows;
}

NormalizedPoint cell_center(GridCell c, const GridSpec& spec) {
    return NormalizedPoint{(c.col + 0.5) / spec.cols, 1.0 - (c.row + 0.5) / spec.rows};
}

double metric_distance(const MaybePoint& a, const MaybePoint& b, const GridSpec& spec) {
    const auto& pa = require(a);
    const auto& pb = require(b);
    return std::hypot((pb.x - pa.x) * spec.pitch_length_m, (pb.y - pa.y) * spec.pitch_width_m);
}

double path_length(std::span<const MaybePoint> points, const GridSpec& spec) {
    if (points.empty()) {
        throw InvariantError("path_length of an empty trajectory");
    }
    double total = 0.0;
    const NormalizedPoint* last = nullptr;
    for (const auto& p : points) {
        if (!p) {
            continue;
        }
        if (last != nullptr) {
            total += metric_distance(*last, *p, spec);
        }
        last = &*p;
    }
    return total;
}

} // namespace pitchlog
