#include "pitchlog/derive.hpp"

#include "pitchlog/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace pitchlog {

namespace {

/// Ball position at `frame` from tracking, widening up to kBallLookupWindow.
MaybePoint tracked_ball(const TrackingTable* track, std::int64_t frame) {
    if (track == nullptr || track->frames.empty()) {
        return std::nullopt;
    }
    const auto& frames = track->frames;
    const auto it = std::lower_bound(frames.begin(), frames.end(), frame,
                                     [](const TrackingFrame& f, std::int64_t fr) { return f.frame < fr; });
    const auto centre = static_cast<std::ptrdiff_t>(it - frames.begin());
    const auto n = static_cast<std::ptrdiff_t>(frames.size());
    for (std::int64_t d = 0; d <= kBallLookupWindow; ++d) {
        for (const auto idx : {centre - d, centre + d}) {
            if (idx < 0 || idx >= n) {
                continue;
            }
            const auto& f = frames[static_cast<std::size_t>(idx)];
            if (std::llabs(f.frame - frame) <= kBallLookupWindow && f.ball) {
                return f.ball;
            }
        }
    }
    return std::nullopt;
}

struct Placement {
    MaybePoint position;
    std::string_view source;
};

Placement place(const MaybePoint& own, const MaybePoint& other, std::int64_t frame, const TrackingTable* track) {
    if (own) {
        return {own, "event"};
    }
    if (auto p = tracked_ball(track, frame)) {
        return {p, "tracking"};
    }
    if (other) {
        return {other, "event"};
    }
    return {std::nullopt, {}};
}

/// Ball events need a location and an acting player; otherwise they are
/// demoted to game-based events.
void settle_class(ActivityEvent& e) {
    if (e.event_class == EventClass::Ball && (!e.position || e.players.empty())) {
        e.event_class = EventClass::GameBased;
    }
}

ActivityEvent make_event(std::string label, EventClass cls, const RawEventRecord& r, bool at_end,
                         const GridSpec& spec, const TrackingTable* track) {
    ActivityEvent e;
    e.activity = std::move(label);
    e.period = r.period;
    e.team = r.team;
    e.time_s = at_end ? r.end_time_s : r.start_time_s;
    e.frame = at_end ? r.end_frame : r.start_frame;
    e.attrs["provider_type"] = r.event_type;
    if (r.subtype) {
        e.attrs["subtype"] = *r.subtype;
    }
    // The tracked ball only locates on-ball actions; a card is not where the ball is.
    const TrackingTable* ball = cls == EventClass::Ball ? track : nullptr;
    const auto placed =
        at_end ? place(r.end_pos, r.start_pos, e.frame, ball) : place(r.start_pos, r.end_pos, e.frame, ball);
    e.position = placed.position;
    if (e.position) {
        e.cell = cell_of(e.position, spec);
        e.attrs["x"] = e.position->x;
        e.attrs["y"] = e.position->y;
        e.attrs["position_source"] = std::string(placed.source);
    }
    e.event_class = cls;
    return e;
}

bool end_event_applies(const EndEventRule& rule, const RawEventRecord& r) {
    switch (rule.when) {
    case EndCondition::Always:
        return true;
    case EndCondition::HasReceiver:
        return r.to_player.has_value();
    case EndCondition::GoalSubtype:
        return is_goal_subtype(r.subtype);
    }
    return false;
}

} // namespace

std::vector<ActivityEvent> decompose_events(std::span<const RawEventRecord> raw, const GridSpec& spec,
                                            const ActivityTable& table, const TrackingTable* ball_track) {
    std::vector<ActivityEvent> out;
    out.reserve(raw.size() * 2);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& r = raw[i];
        const ActivityRule* rule = table.find(r.event_type);
        ActivityRule passthrough;
        if (rule == nullptr) {
            if (table.unknown == UnknownTypePolicy::Reject) {
                throw ParseError("events", 0, "unknown event type '" + r.event_type + "'");
            }
            passthrough.label = "Other:" + r.event_type;
            passthrough.event_class = EventClass::GameBased;
            rule = &passthrough;
        }

        auto primary = make_event(rule->label, rule->event_class, r, rule->at_end, spec, ball_track);
        if (r.from_player) {
            primary.players.push_back({*r.from_player, PlayerRole::Executing});
        }
        if (r.to_player) {
            primary.players.push_back({*r.to_player, PlayerRole::Receiving});
        }
        primary.attrs["duration_s"] = r.end_time_s - r.start_time_s;
        if (r.start_pos && r.end_pos) {
            primary.attrs["distance_m"] = metric_distance(r.start_pos, r.end_pos, spec);
        }
        primary.attrs["record_part"] = std::string("primary");
        settle_class(primary);
        out.push_back(std::move(primary));

        if (rule->end_event && end_event_applies(*rule->end_event, r)) {
            auto end = make_event(rule->end_event->label, rule->event_class, r, true, spec, ball_track);
            if (rule->end_event->when == EndCondition::HasReceiver) {
                end.players.push_back({*r.to_player, PlayerRole::Receiving});
            } else if (r.from_player) {
                end.players.push_back({*r.from_player, PlayerRole::Executing});
            }
            end.attrs["record_part"] = std::string("end");
            settle_class(end);
            out.push_back(std::move(end));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const ActivityEvent& a, const ActivityEvent& b) {
        return std::tie(a.period, a.time_s) < std::tie(b.period, b.time_s);
    });
    return out;
}

namespace {

/// Per-player cell-change state machine.
class MovementTracker {
public:
    MovementTracker(std::string label, const GridSpec& spec, double min_dwell_s,
                    std::vector<ActivityEvent>& out)
        : label_(std::move(label)), spec_(spec), min_dwell_s_(min_dwell_s), out_(out) {}

    void absent() {
        if (have_prev_) {
            in_gap_ = true;
        }
    }

    void sample(const TrackingFrame& f, const NormalizedPoint& p) {
        const GridCell c = cell_of(p, spec_);
        if (have_prev_ && f.period != period_) {
            have_prev_ = false;
        }
        if (!have_prev_) {
            start(f, p, c);
            return;
        }
        const double step = metric_distance(last_, p, spec_);
        last_ = p;
        if (in_gap_) {
            in_gap_ = false;
            if (candidate_) {
                seg_dist_ += candidate_->dist;
                candidate_.reset();
            }
            if (c != prev_cell_) {
                start(f, p, c); // reappeared elsewhere: no event for the jump
                return;
            }
            seg_dist_ += step;
            return;
        }
        if (candidate_) {
            if (c == candidate_->cell) {
                candidate_->dist += step;
            } else {
                seg_dist_ += candidate_->dist + step;
                candidate_.reset();
                if (c != prev_cell_) {
                    candidate_ = Candidate{c, f.time_s, f.frame, 0.0};
                }
            }
        } else {
            seg_dist_ += step;
            if (c != prev_cell_) {
                candidate_ = Candidate{c, f.time_s, f.frame, 0.0};
            }
        }
        if (candidate_ && f.time_s - candidate_->enter_time_s >= min_dwell_s_) {
            confirm();
        }
    }

private:
    struct Candidate {
        GridCell cell;
        double enter_time_s = 0.0;
        std::int64_t enter_frame = 0;
        double dist = 0.0; // path travelled since entering the candidate cell
    };

    void start(const TrackingFrame& f, const NormalizedPoint& p, GridCell c) {
        have_prev_ = true;
        in_gap_ = false;
        period_ = f.period;
        prev_cell_ = c;
        prev_enter_s_ = f.time_s;
        seg_dist_ = 0.0;
        last_ = p;
        candidate_.reset();
    }

    void confirm() {
        ActivityEvent e;
        e.activity = std::string(kMovementActivity);
        e.event_class = EventClass::PositionBased;
        e.period = period_;
        e.time_s = candidate_->enter_time_s;
        e.frame = candidate_->enter_frame;
        e.players.push_back({label_, PlayerRole::Executing});
        e.cell = candidate_->cell;
        e.attrs["from_cell"] = cell_label(prev_cell_);
        e.attrs["to_cell"] = cell_label(candidate_->cell);
        e.attrs["duration_s"] = candidate_->enter_time_s - prev_enter_s_;
        e.attrs["distance_m"] = seg_dist_;
        out_.push_back(std::move(e));

        prev_cell_ = candidate_->cell;
        prev_enter_s_ = candidate_->enter_time_s;
        seg_dist_ = candidate_->dist;
        candidate_.reset();
    }

    std::string label_;
    const GridSpec& spec_;
    double min_dwell_s_;
    std::vector<ActivityEvent>& out_;

    bool have_prev_ = false;
    bool in_gap_ = false;
    int period_ = 0;
    GridCell prev_cell_{};
    double prev_enter_s_ = 0.0;
    double seg_dist_ = 0.0;
    NormalizedPoint last_{};
    std::optional<Candidate> candidate_;
};

} // namespace

std::vector<ActivityEvent> detect_movement_events(const TrackingTable& tracking, const GridSpec& spec,
                                                  const MovementOptions& options) {
    std::vector<ActivityEvent> out;
    for (std::size_t pi = 0; pi < tracking.players.size(); ++pi) {
        MovementTracker tracker(tracking.players[pi], spec, options.min_dwell_s, out);
        for (const auto& f : tracking.frames) {
            const auto& p = f.positions[pi];
            if (p && std::isfinite(p->x) && std::isfinite(p->y)) {
                tracker.sample(f, *p);
            } else {
                tracker.absent();
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const ActivityEvent& a, const ActivityEvent& b) {
        return std::tie(a.period, a.time_s, a.players.front().label) <
               std::tie(b.period, b.time_s, b.players.front().label);
    });
    return out;
}

namespace {

std::string sequence_id(std::string_view prefix, std::size_t n, std::size_t width) {
    std::string digits = std::to_string(n);
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return std::string(prefix) + "-" + digits;
}

} // namespace

std::vector<ActivityEvent> merge_streams(std::vector<ActivityEvent> game, std::vector<ActivityEvent> movement,
                                         std::string_view id_prefix) {
    std::vector<ActivityEvent> out;
    out.reserve(game.size() + movement.size());
    std::move(game.begin(), game.end(), std::back_inserter(out));
    std::move(movement.begin(), movement.end(), std::back_inserter(out));

    static const std::string kNoLabel;
    const auto key = [](const ActivityEvent& e) {
        const bool positional = e.event_class == EventClass::PositionBased;
        const std::string& label = positional && !e.players.empty() ? e.players.front().label : kNoLabel;
        return std::tuple<int, double, int, const std::string&>(e.period, e.time_s, positional ? 1 : 0, label);
    };
    std::stable_sort(out.begin(), out.end(),
                     [&key](const ActivityEvent& a, const ActivityEvent& b) { return key(a) < key(b); });

    const std::size_t width = std::max<std::size_t>(6, std::to_string(out.size()).size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].event_id = sequence_id(id_prefix, i + 1, width);
    }
    return out;
}

std::vector<ActivityEvent> enrich(std::vector<ActivityEvent> stream, std::span<const PossessionSpan> spans,
                                  const std::array<std::set<std::string>, 2>& rosters) {
    std::int64_t home = 0;
    std::int64_t away = 0;
    for (auto& e : stream) {
        if (!e.team && !e.players.empty()) {
            for (const Side s : {Side::Home, Side::Away}) {
                if (rosters[side_index(s)].contains(e.players.front().label)) {
                    e.team = s;
                }
            }
        }
        if (const auto idx = possession_index_at(e.time_s, e.period, spans)) {
            e.attrs["possession_id"] = spans[*idx].id;
        }
        e.attrs["score_home"] = home;
        e.attrs["score_away"] = away;
        if (e.activity == kGoalActivity && e.team) {
            ++(*e.team == Side::Home ? home : away);
        }
    }
    return stream;
}

} // namespace pitchlog
