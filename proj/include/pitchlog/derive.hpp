#pragma once

#include "pitchlog/activity_table.hpp"
#include "pitchlog/attributes.hpp"
#include "pitchlog/ingest.hpp"
#include "pitchlog/possession.hpp"
#include "pitchlog/spatial.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace pitchlog {

enum class PlayerRole { Executing, Receiving };

struct PlayerRef {
    std::string label;
    PlayerRole role = PlayerRole::Executing;

    friend bool operator==(const PlayerRef&, const PlayerRef&) = default;
};

/// One atomic activity after decomposition, movement detection or enrichment.
struct ActivityEvent {
    std::string event_id;
    std::string activity;
    double time_s = 0.0;
    std::int64_t frame = 0;
    int period = 1;
    std::optional<Side> team;
    std::vector<PlayerRef> players;
    MaybePoint position;
    std::optional<GridCell> cell;
    EventClass event_class = EventClass::GameBased;
    AttrMap attrs;

    friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

inline constexpr std::string_view kGoalActivity = "Goal";

/// Frames searched on each side of an event frame when the event record has
/// no coordinates and the ball position is taken from tracking instead.
inline constexpr std::int64_t kBallLookupWindow = 5;

/// Maps raw records to canonical activities. A record yields its primary event
/// and, where its rule says so, an outcome event at the record's end. Ball-class
/// events without a position (neither in the record nor in `ball_track`) are
/// emitted as game-based events. Output is stably sorted by (period, time).
/// Throws ParseError for an unknown type under the reject policy.
std::vector<ActivityEvent> decompose_events(std::span<const RawEventRecord> raw, const GridSpec& spec,
                                            const ActivityTable& table = ActivityTable::defaults(),
                                            const TrackingTable* ball_track = nullptr);

struct MovementOptions {
    /// A cell change counts only after the player stayed this long in the new cell.
    double min_dwell_s = 0.0;
};

/// "Player changes position" events for every player, one per grid-cell change.
std::vector<ActivityEvent> detect_movement_events(const TrackingTable& tracking, const GridSpec& spec,
                                                  const MovementOptions& options = {});

/// Stable merge by (period, time). On ties game and ball events precede
/// position-based ones, and position-based events are ordered by player label.
/// Assigns ids `<id_prefix>-NNNNNN` in merged order.
std::vector<ActivityEvent> merge_streams(std::vector<ActivityEvent> game, std::vector<ActivityEvent> movement,
                                         std::string_view id_prefix);

/// Adds possession_id, score_home and score_away (goals strictly before the
/// event) and fills in the team of player-only events from the rosters.
std::vector<ActivityEvent> enrich(std::vector<ActivityEvent> stream, std::span<const PossessionSpan> spans,
                                  const std::array<std::set<std::string>, 2>& rosters);

} // namespace pitchlog
