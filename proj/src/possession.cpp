#include "pitchlog/possession.hpp"

#include <algorithm>
#include <map>

namespace pitchlog {

std::string_view outcome_name(PossessionOutcome o) {
    switch (o) {
    case PossessionOutcome::Goal:
        return "goal";
    case PossessionOutcome::Shot:
        return "shot";
    case PossessionOutcome::Lost:
        return "lost";
    case PossessionOutcome::OutThenLost:
        return "out_then_lost";
    case PossessionOutcome::PeriodEnd:
        return "period_end";
    }
    return "lost";
}

std::optional<PossessionOutcome> parse_outcome(std::string_view s) {
    for (auto o : {PossessionOutcome::Goal, PossessionOutcome::Shot, PossessionOutcome::Lost,
                   PossessionOutcome::OutThenLost, PossessionOutcome::PeriodEnd}) {
        if (outcome_name(o) == s) {
            return o;
        }
    }
    return std::nullopt;
}

bool is_goal_subtype(const std::optional<std::string>& subtype) {
    if (!subtype) {
        return false;
    }
    std::string_view rest = *subtype;
    while (true) {
        const auto dash = rest.find('-');
        if (rest.substr(0, dash) == "GOAL") {
            return true;
        }
        if (dash == std::string_view::npos) {
            return false;
        }
        rest.remove_prefix(dash + 1);
    }
}

std::string match_prefix(std::size_t match_index) {
    const auto hi = static_cast<char>('A' + (match_index / 26) % 26);
    const auto lo = static_cast<char>('A' + match_index % 26);
    return std::string{hi, lo};
}

std::string possession_id(std::string_view prefix, std::size_t counter) {
    std::string digits = std::to_string(counter);
    if (digits.size() < 3) {
        digits.insert(0, 3 - digits.size(), '0');
    }
    return std::string(prefix) + digits;
}

namespace {

struct PeriodEnd {
    double time_s = 0.0;
    std::int64_t frame = 0;
};

struct OpenSpan {
    PossessionSpan span;
    bool has_goal = false;
    bool has_shot = false;
    bool out_pending = false;
};

PossessionOutcome decide_outcome(const OpenSpan& s) {
    if (s.has_goal) {
        return PossessionOutcome::Goal;
    }
    if (s.has_shot) {
        return PossessionOutcome::Shot;
    }
    if (s.span.last_in_period) {
        return PossessionOutcome::PeriodEnd;
    }
    return s.out_pending ? PossessionOutcome::OutThenLost : PossessionOutcome::Lost;
}

} // namespace

std::vector<PossessionSpan> segment_possessions(std::span<const RawEventRecord> events, std::string_view prefix,
                                                const ControlRules& rules) {
    std::map<int, PeriodEnd> period_end;
    for (const auto& e : events) {
        auto& pe = period_end[e.period];
        pe.time_s = std::max({pe.time_s, e.start_time_s, e.end_time_s});
        pe.frame = std::max({pe.frame, e.start_frame, e.end_frame});
    }

    std::vector<PossessionSpan> out;
    std::optional<OpenSpan> cur;

    const auto close = [&](double end_time, std::int64_t end_frame, bool last_in_period) {
        cur->span.end_time_s = std::max(end_time, cur->span.start_time_s);
        cur->span.end_frame = std::max(end_frame, cur->span.start_frame);
        cur->span.last_in_period = last_in_period;
        cur->span.outcome = decide_outcome(*cur);
        out.push_back(std::move(cur->span));
        cur.reset();
    };
    const auto close_at_period_end = [&]() {
        const auto& pe = period_end.at(cur->span.period);
        close(pe.time_s, pe.frame, true);
    };

    for (const auto& e : events) {
        if (cur && e.period != cur->span.period) {
            close_at_period_end();
        }
        if (rules.is_controlling(e.event_type)) {
            if (!cur || cur->span.team != e.team) {
                if (cur) {
                    close(e.start_time_s, e.start_frame, false);
                }
                OpenSpan next;
                next.span.id = possession_id(prefix, out.size() + 1);
                next.span.team = e.team;
                next.span.period = e.period;
                next.span.start_time_s = e.start_time_s;
                next.span.start_frame = e.start_frame;
                cur = std::move(next);
            } else {
                cur->out_pending = false;
            }
        }
        if (!cur) {
            continue; // nothing controls the ball yet
        }
        if (e.event_type == rules.shot_type) {
            cur->has_shot = true;
            cur->has_goal = cur->has_goal || is_goal_subtype(e.subtype);
        } else if (e.event_type == rules.ball_out_type) {
            cur->out_pending = true;
        }
    }
    if (cur) {
        close_at_period_end();
    }
    return out;
}

std::optional<std::size_t> possession_index_at(double t, int period, std::span<const PossessionSpan> spans) {
    // First span that starts strictly after (period, t); the candidate precedes it.
    const auto it = std::upper_bound(spans.begin(), spans.end(), std::pair{period, t},
                                     [](const std::pair<int, double>& key, const PossessionSpan& s) {
                                         return key.first < s.period ||
                                                (key.first == s.period && key.second < s.start_time_s);
                                     });
    if (it == spans.begin()) {
        return std::nullopt;
    }
    const auto idx = static_cast<std::size_t>(std::prev(it) - spans.begin());
    const auto& s = spans[idx];
    if (s.period != period) {
        return std::nullopt;
    }
    if (t < s.end_time_s || (s.last_in_period && t <= s.end_time_s)) {
        return idx;
    }
    return std::nullopt;
}

std::optional<PossessionSpan> possession_at(double t, int period, std::span<const PossessionSpan> spans) {
    const auto idx = possession_index_at(t, period, spans);
    if (!idx) {
        return std::nullopt;
    }
    return spans[*idx];
}

} // namespace pitchlog
