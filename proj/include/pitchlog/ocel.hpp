#pragma once

#include "pitchlog/attributes.hpp"
#include "pitchlog/derive.hpp"
#include "pitchlog/possession.hpp"
#include "pitchlog/spatial.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pitchlog {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

namespace object_type {
inline constexpr std::string_view kMatch = "match";
inline constexpr std::string_view kTeam = "team";
inline constexpr std::string_view kPlayer = "player";
inline constexpr std::string_view kPossession = "possession";
inline constexpr std::string_view kGridPosition = "grid_position";
inline constexpr std::string_view kBall = "ball";
} // namespace object_type

namespace qualifier {
inline constexpr std::string_view kMatch = "match";
inline constexpr std::string_view kTeam = "team";
inline constexpr std::string_view kExecutingPlayer = "executing_player";
inline constexpr std::string_view kReceivingPlayer = "receiving_player";
inline constexpr std::string_view kPossession = "possession";
inline constexpr std::string_view kAtCell = "at_cell";
inline constexpr std::string_view kFromCell = "from_cell";
inline constexpr std::string_view kToCell = "to_cell";
inline constexpr std::string_view kBall = "ball";
} // namespace qualifier

struct OcelObject {
    std::string id;
    std::string type;
    AttrMap attrs;

    friend bool operator==(const OcelObject&, const OcelObject&) = default;
};

struct Relation {
    std::string object_id;
    std::string qualifier;

    friend bool operator==(const Relation&, const Relation&) = default;
};

struct OcelEvent {
    std::string id;
    std::string activity;
    Timestamp time{};
    AttrMap attrs;
    std::vector<Relation> relations;

    friend bool operator==(const OcelEvent&, const OcelEvent&) = default;
};

struct AttrDecl {
    std::string name;
    std::string type; // "string" | "integer" | "float"

    friend bool operator==(const AttrDecl&, const AttrDecl&) = default;
};

struct TypeSchema {
    std::string name;
    std::vector<AttrDecl> attributes;

    friend bool operator==(const TypeSchema&, const TypeSchema&) = default;
};

struct OcelLog {
    std::vector<TypeSchema> object_types;
    std::vector<TypeSchema> event_types;
    std::vector<OcelObject> objects;
    std::vector<OcelEvent> events; // sorted by (time, id)

    friend bool operator==(const OcelLog&, const OcelLog&) = default;

    /// Recomputes both schema lists from the objects and events present.
    void derive_schemas();
    void sort_events();
};

/// Object-id -> position in OcelLog::objects.
class ObjectIndex {
public:
    explicit ObjectIndex(const OcelLog& log);
    const OcelObject* find(std::string_view id) const;

private:
    const OcelLog* log_;
    std::unordered_map<std::string_view, std::size_t> by_id_;
};

enum class IdentityScope {
    Global,   // teams, players, ball and grid cells shared across matches
    PerMatch, // one copy of each per match
};

std::string_view scope_name(IdentityScope s);
std::optional<IdentityScope> parse_scope(std::string_view s);

/// Everything about one match that the log needs once events are derived.
struct MatchSummary {
    std::string match_id;
    std::string prefix; // possession id prefix, "AA"
    std::array<std::set<std::string>, 2> rosters;
    std::vector<PossessionSpan> spans;
    Timestamp epoch{};
    std::map<int, double> period_offset_s; // added to time_s per period; default 0
};

/// Synthetic kick-off instant for the n-th match (the sample data carries no dates).
Timestamp default_match_epoch(std::size_t match_index);

/// Object ids under a scope, e.g. "player:HomePlayer11" or "player:game1/HomePlayer11".
struct ObjectIds {
    IdentityScope scope = IdentityScope::Global;

    std::string match(std::string_view match_id) const;
    std::string team(std::string_view match_id, Side side) const;
    std::string player(std::string_view match_id, std::string_view label) const;
    std::string ball(std::string_view match_id) const;
    std::string grid(std::string_view match_id, GridCell cell) const;
    std::string possession(std::string_view span_id) const;
};

/// Match, team, player, ball, grid-position and possession objects.
/// Throws InvariantError on duplicate ids.
std::vector<OcelObject> build_objects(std::span<const MatchSummary> matches, IdentityScope scope,
                                      const GridSpec& spec = {});

/// Converts enriched per-match streams into OCEL events with qualified
/// relations, then sorts by (time, id). `streams[i]` belongs to `matches[i]`.
/// Throws InvariantError for a relation to an unknown object.
OcelLog build_log(std::span<const MatchSummary> matches, std::span<const std::vector<ActivityEvent>> streams,
                  std::vector<OcelObject> objects, IdentityScope scope, const GridSpec& spec = {});

/// Structural and cardinality problems; empty when the log is valid.
std::vector<std::string> validate_log(const OcelLog& log);

struct LogStats {
    std::size_t events = 0;
    std::size_t primary_events = 0; // excluding decomposed outcome events
    std::size_t movement_events = 0;
    std::size_t objects = 0;
    std::size_t possessions = 0;
    std::size_t matches = 0;
    std::map<std::string, std::size_t> per_activity;
    std::map<std::string, std::size_t> per_class;
    std::map<std::string, std::size_t> per_object_type;
};

LogStats stats(const OcelLog& log);
/// Tab separated "key\tvalue" lines, totals first, then the breakdowns.
std::string format_stats(const LogStats& s);

/// ISO-8601 UTC with milliseconds: 2024-08-03T15:30:00.040Z
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view s);

void write_ocel_json(const OcelLog& log, std::ostream& out);
void write_ocel_json(const OcelLog& log, const std::filesystem::path& path);
/// Throws ParseError naming the JSON path of the first schema violation.
OcelLog read_ocel_json(std::istream& in, const std::string& source = "<ocel>");
OcelLog read_ocel_json(const std::filesystem::path& path);

} // namespace pitchlog
