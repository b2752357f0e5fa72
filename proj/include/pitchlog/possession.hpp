#pragma once

#include "pitchlog/ingest.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pitchlog {

enum class PossessionOutcome { Goal, Shot, Lost, OutThenLost, PeriodEnd };

std::string_view outcome_name(PossessionOutcome o);
std::optional<PossessionOutcome> parse_outcome(std::string_view s);

/// Interval [start_time_s, end_time_s) in which one team controls the ball.
/// The last span of a period also contains its end instant.
struct PossessionSpan {
    std::string id;
    Side team = Side::Home;
    int period = 1;
    double start_time_s = 0.0;
    double end_time_s = 0.0;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    PossessionOutcome outcome = PossessionOutcome::Lost;
    bool last_in_period = false;

    friend bool operator==(const PossessionSpan&, const PossessionSpan&) = default;
};

/// Which provider event types establish control of the ball.
struct ControlRules {
    std::set<std::string> controlling = {"SET PIECE", "RECOVERY", "PASS", "SHOT", "CARRY"};
    std::string shot_type = "SHOT";
    std::string ball_out_type = "BALL OUT";

    bool is_controlling(std::string_view type) const { return controlling.contains(std::string(type)); }
};

/// True when a SHOT subtype marks a goal, i.e. one of its '-' separated tokens is "GOAL".
bool is_goal_subtype(const std::optional<std::string>& subtype);

/// Two-letter match prefix for the n-th loaded match: 0 -> "AA", 1 -> "AB", ...
std::string match_prefix(std::size_t match_index);

/// "AA" + counter zero-padded to three digits: ("AA", 156) -> "AA156".
std::string possession_id(std::string_view prefix, std::size_t counter);

/// Splits time-ordered events into alternating team possessions. Control
/// flips only on a controlling event of the other team; non-controlling
/// events never open a span. Spans never cross a period boundary.
std::vector<PossessionSpan> segment_possessions(std::span<const RawEventRecord> events,
                                                std::string_view match_prefix,
                                                const ControlRules& rules = {});

/// Span containing time `t` of `period`, if any. Spans must be sorted.
std::optional<PossessionSpan> possession_at(double t, int period, std::span<const PossessionSpan> spans);

/// Index form of possession_at.
std::optional<std::size_t> possession_index_at(double t, int period, std::span<const PossessionSpan> spans);

} // namespace pitchlog
