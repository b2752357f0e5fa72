#pragma once

#include "pitchlog/ocel.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pitchlog {

/// `<object_type>.<attribute>=<value>`; values compare as text.
struct AttrPredicate {
    std::string object_type;
    std::string attribute;
    std::string value;

    /// Parses "possession.outcome=goal". Throws ConfigError on bad syntax.
    static AttrPredicate parse(std::string_view text);
};

/// Predicates on the same object type must hold for one object; predicates
/// on different types must each be met by some related object.
struct LogFilter {
    std::vector<AttrPredicate> predicates;
    /// Object types whose relations survive; nullopt keeps all.
    std::optional<std::set<std::string>> retained_types;
};

/// Keeps events related to matching objects, drops relations to non-retained
/// types and objects no longer referenced. Throws LookupError when a predicate
/// names an attribute no object of that type declares.
OcelLog filter_log(const OcelLog& log, const LogFilter& filter);

struct NodeStats {
    std::size_t events = 0;      // distinct events with this activity
    std::size_t occurrences = 0; // (object, event) pairs

    friend bool operator==(const NodeStats&, const NodeStats&) = default;
};

using ActivityPair = std::pair<std::string, std::string>;

struct TypeDfg {
    std::map<std::string, NodeStats> nodes;
    std::map<ActivityPair, std::size_t> edges;
    std::map<std::string, std::size_t> starts;
    std::map<std::string, std::size_t> ends;
    std::size_t objects = 0; // objects with at least one event

    friend bool operator==(const TypeDfg&, const TypeDfg&) = default;
};

/// Object-centric directly-follows graph: one DFG per object type.
struct OcDfg {
    std::map<std::string, TypeDfg> types;
    std::vector<std::string> warnings;

    bool empty() const;
};

/// Each object's trace is its related events in log order (an event appears
/// once per trace even when related several times). Requested types missing
/// from the log give an empty sub-graph and a warning.
OcDfg discover_ocdfg(const OcelLog& log, const std::set<std::string>& types);

struct TypeDfgMetrics {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t self_loop_total = 0;
    std::size_t max_edge_weight = 0;
    std::optional<ActivityPair> max_edge;
    std::optional<std::string> max_self_loop; // activity with the heaviest a->a edge
    std::size_t max_self_loop_weight = 0;
};

std::map<std::string, TypeDfgMetrics> dfg_metrics(const OcDfg& g);

} // namespace pitchlog
