#pragma once

#include "pitchlog/mining.hpp"
#include "pitchlog/ocel.hpp"
#include "pitchlog/spatial.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pitchlog {

struct RenderOptions {
    /// Object type -> colour; types not listed get a palette colour.
    std::map<std::string, std::string> type_colors = {
        {"ball", "#1f77b4"},   {"player", "#2ca02c"}, {"possession", "#d62728"},
        {"team", "#9467bd"},   {"match", "#8c564b"},  {"grid_position", "#ff7f0e"},
    };
    bool node_counts = true;
    bool edge_labels = true;
    bool grid_lines = true;
    /// Spatial maps: only plot players of the team holding the possession.
    bool team_only = false;
    int width = 840;
    int height = 544;
};

/// Graphviz digraph with one node per activity and one edge per
/// (object type, a -> b), labelled "<type>:<count>". Output is sorted and
/// therefore byte-stable.
std::string dfg_to_dot(const OcDfg& g, const RenderOptions& opts = {});

struct PlottedEvent {
    std::string event_id;
    std::string activity;
    NormalizedPoint point; // provider coordinates
    GridCell cell;
};

struct InstanceTrace {
    std::string object_id;
    std::string object_type;
    std::vector<PlottedEvent> events;
};

/// Traces of every object of `types` over the events of one possession.
/// Events without coordinates are placed at the centre of their (destination)
/// cell; events with neither are left out. Throws LookupError for an unknown
/// possession id ("AA156" or "possession:AA156").
std::vector<InstanceTrace> instance_traces(const OcelLog& log, std::string_view possession_id,
                                           const std::set<std::string>& types, const GridSpec& spec = {},
                                           const RenderOptions& opts = {});

/// SVG 1.1 pitch map: labelled grid, one arrow chain per object, legend.
std::string spatial_instance_svg(const OcelLog& log, std::string_view possession_id,
                                 const std::set<std::string>& types, const GridSpec& spec = {},
                                 const RenderOptions& opts = {});

} // namespace pitchlog
