#pragma once

#include "pitchlog/spatial.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pitchlog {

enum class Side { Home, Away };

std::string_view side_name(Side s);
std::optional<Side> parse_side(std::string_view token);
inline Side other_side(Side s) { return s == Side::Home ? Side::Away : Side::Home; }
inline std::size_t side_index(Side s) { return s == Side::Home ? 0 : 1; }

/// One sample of every tracked player plus the ball. `positions` is aligned
/// with the player list of the owning fragment or table.
struct TrackingFrame {
    int period = 1;
    std::int64_t frame = 0;
    double time_s = 0.0;
    std::vector<MaybePoint> positions;
    MaybePoint ball;
};

/// Contents of one per-team tracking file.
struct TrackingFragment {
    Side side = Side::Home;
    std::vector<std::string> players; // side-prefixed, e.g. "HomePlayer11"
    std::vector<TrackingFrame> frames;
};

/// Both teams joined on frame number. Player order: home header order, then away.
struct TrackingTable {
    std::vector<std::string> players;
    std::vector<Side> sides;
    std::vector<TrackingFrame> frames;

    std::optional<std::size_t> index_of(std::string_view label) const;
    /// Position of `label` in frame `frame_index`; absent for unknown labels.
    MaybePoint position(std::size_t frame_index, std::string_view label) const;
};

struct RawEventRecord {
    Side team = Side::Home;
    std::string event_type;
    std::optional<std::string> subtype;
    int period = 1;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    double start_time_s = 0.0;
    double end_time_s = 0.0;
    std::optional<std::string> from_player;
    std::optional<std::string> to_player;
    MaybePoint start_pos;
    MaybePoint end_pos;

    friend bool operator==(const RawEventRecord&, const RawEventRecord&) = default;
};

/// Parses one team's tracking CSV (three header lines, then
/// `Period,Frame,Time [s]` followed by x/y pairs with the ball last).
/// Empty and `NaN` coordinates become absent points.
TrackingFragment parse_tracking(std::istream& in, Side side, double sample_rate = 25.0,
                                const std::string& source = {});

/// Joins the two team fragments frame by frame. Period and time come from the
/// home side; the ball from whichever side reports it.
TrackingTable merge_tracking(const TrackingFragment& home, const TrackingFragment& away);

/// Parses the 14-column event CSV. Player labels are kept as written in the
/// file. The result is stably sorted by start time.
std::vector<RawEventRecord> parse_events(std::istream& in, const std::string& source = {});

/// Writes records in the same 14-column layout parse_events reads.
void write_events(std::ostream& out, const std::vector<RawEventRecord>& records);

/// Flips x -> 1-x and y -> 1-y in place for a single point.
MaybePoint mirrored(const MaybePoint& p);

struct LoadOptions {
    double sample_rate = 25.0;
    /// Mirror every period-2 coordinate (players, ball, events) so both halves
    /// share one attacking direction per team.
    bool normalize_direction = false;
    GridSpec pitch{};
};

struct MatchBundle {
    std::string match_id;
    std::array<std::set<std::string>, 2> rosters; // indexed by side_index
    TrackingTable tracking;
    std::vector<RawEventRecord> events; // player labels side-prefixed
    GridSpec pitch{};
    std::vector<std::string> warnings;

    const std::set<std::string>& roster(Side s) const { return rosters[side_index(s)]; }
    std::optional<Side> side_of(std::string_view label) const;
};

/// Loads, validates and bundles one match. Event player labels are rewritten
/// to their side-prefixed form; labels unknown to both tracking headers are
/// added to the event team's roster with a warning.
MatchBundle load_match(const std::filesystem::path& tracking_home,
                       const std::filesystem::path& tracking_away,
                       const std::filesystem::path& events, std::string match_id,
                       const LoadOptions& options = {});

} // namespace pitchlog
