#include "pitchlog/ocel.hpp"

#include "pitchlog/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace pitchlog {

namespace ot = object_type;
namespace q = qualifier;

void OcelLog::sort_events() {
    std::stable_sort(events.begin(), events.end(), [](const OcelEvent& a, const OcelEvent& b) {
        return a.time != b.time ? a.time < b.time : a.id < b.id;
    });
}

namespace {

void collect_schema(std::map<std::string, std::map<std::string, std::string>>& out, const std::string& type,
                    const AttrMap& attrs) {
    auto& decls = out[type];
    for (const auto& [name, value] : attrs) {
        decls.emplace(name, std::string(attr_type_name(value)));
    }
}

std::vector<TypeSchema> to_schemas(const std::map<std::string, std::map<std::string, std::string>>& in) {
    std::vector<TypeSchema> out;
    for (const auto& [type, decls] : in) {
        TypeSchema s{type, {}};
        for (const auto& [name, t] : decls) {
            s.attributes.push_back({name, t});
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

void OcelLog::derive_schemas() {
    std::map<std::string, std::map<std::string, std::string>> obj;
    std::map<std::string, std::map<std::string, std::string>> ev;
    for (const auto& o : objects) {
        collect_schema(obj, o.type, o.attrs);
    }
    for (const auto& e : events) {
        collect_schema(ev, e.activity, e.attrs);
    }
    object_types = to_schemas(obj);
    event_types = to_schemas(ev);
}

ObjectIndex::ObjectIndex(const OcelLog& log) : log_(&log) {
    by_id_.reserve(log.objects.size());
    for (std::size_t i = 0; i < log.objects.size(); ++i) {
        by_id_.emplace(log.objects[i].id, i);
    }
}

const OcelObject* ObjectIndex::find(std::string_view id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &log_->objects[it->second];
}

std::string_view scope_name(IdentityScope s) {
    return s == IdentityScope::Global ? "global" : "per_match";
}

std::optional<IdentityScope> parse_scope(std::string_view s) {
    if (s == "global") {
        return IdentityScope::Global;
    }
    if (s == "per_match" || s == "per-match") {
        return IdentityScope::PerMatch;
    }
    return std::nullopt;
}

Timestamp default_match_epoch(std::size_t match_index) {
    using namespace std::chrono;
    // 2019-08-03 15:30 UTC, one week apart per match.
    const sys_days base = year{2019} / August / 3;
    return time_point_cast<milliseconds>(base + hours{15} + minutes{30} + days{7 * static_cast<int>(match_index)});
}

std::string ObjectIds::match(std::string_view match_id) const {
    return "match:" + std::string(match_id);
}

std::string ObjectIds::team(std::string_view match_id, Side side) const {
    if (scope == IdentityScope::Global) {
        return "team:" + std::string(side_name(side));
    }
    return "team:" + std::string(match_id) + "/" + std::string(side_name(side));
}

std::string ObjectIds::player(std::string_view match_id, std::string_view label) const {
    if (scope == IdentityScope::Global) {
        return "player:" + std::string(label);
    }
    return "player:" + std::string(match_id) + "/" + std::string(label);
}

std::string ObjectIds::ball(std::string_view match_id) const {
    if (scope == IdentityScope::Global) {
        return "ball";
    }
    return "ball:" + std::string(match_id);
}

std::string ObjectIds::grid(std::string_view match_id, GridCell cell) const {
    if (scope == IdentityScope::Global) {
        return "grid:" + cell_label(cell);
    }
    return "grid:" + std::string(match_id) + "/" + cell_label(cell);
}

std::string ObjectIds::possession(std::string_view span_id) const {
    return "possession:" + std::string(span_id);
}

std::vector<OcelObject> build_objects(std::span<const MatchSummary> matches, IdentityScope scope,
                                      const GridSpec& spec) {
    spec.validate();
    const ObjectIds ids{scope};
    std::vector<OcelObject> out;
    std::unordered_set<std::string> seen;

    const auto add_unique = [&](OcelObject o) {
        if (!seen.insert(o.id).second) {
            throw InvariantError("duplicate object id '" + o.id + "'");
        }
        out.push_back(std::move(o));
    };
    // Shared objects are created by the first match that needs them.
    const auto add_shared = [&](OcelObject o) {
        if (seen.insert(o.id).second) {
            out.push_back(std::move(o));
        }
    };
    const bool global = scope == IdentityScope::Global;

    for (const auto& m : matches) {
        std::int64_t goals[2] = {0, 0};
        for (const auto& s : m.spans) {
            if (s.outcome == PossessionOutcome::Goal) {
                ++goals[side_index(s.team)];
            }
        }
        add_unique({ids.match(m.match_id),
                    std::string(ot::kMatch),
                    {{"match_id", m.match_id},
                     {"kickoff", format_timestamp(m.epoch)},
                     {"possession_prefix", m.prefix},
                     {"home_goals", goals[0]},
                     {"away_goals", goals[1]}}});

        const auto add_scoped = [&](OcelObject o) {
            if (!global) {
                o.attrs["match_id"] = m.match_id;
            }
            global ? add_shared(std::move(o)) : add_unique(std::move(o));
        };
        for (const Side s : {Side::Home, Side::Away}) {
            add_scoped({ids.team(m.match_id, s), std::string(ot::kTeam), {{"side", std::string(side_name(s))}}});
        }
        for (const Side s : {Side::Home, Side::Away}) {
            for (const auto& label : m.rosters[side_index(s)]) {
                add_scoped({ids.player(m.match_id, label),
                            std::string(ot::kPlayer),
                            {{"label", label}, {"side", std::string(side_name(s))}}});
            }
        }
        add_scoped({ids.ball(m.match_id), std::string(ot::kBall), {}});
        for (int col = 0; col < spec.cols; ++col) {
            for (int row = 0; row < spec.rows; ++row) {
                const GridCell c{col, row};
                add_scoped({ids.grid(m.match_id, c),
                            std::string(ot::kGridPosition),
                            {{"label", cell_label(c)},
                             {"col", static_cast<std::int64_t>(col)},
                             {"row", static_cast<std::int64_t>(row)}}});
            }
        }
        for (const auto& s : m.spans) {
            add_unique({ids.possession(s.id),
                        std::string(ot::kPossession),
                        {{"match_id", m.match_id},
                         {"team", std::string(side_name(s.team))},
                         {"outcome", std::string(outcome_name(s.outcome))},
                         {"period", static_cast<std::int64_t>(s.period)},
                         {"start_s", s.start_time_s},
                         {"end_s", s.end_time_s},
                         {"start_frame", s.start_frame},
                         {"end_frame", s.end_frame}}});
        }
    }
    return out;
}

namespace {

Timestamp absolute_time(const MatchSummary& m, int period, double time_s) {
    double offset = 0.0;
    if (const auto it = m.period_offset_s.find(period); it != m.period_offset_s.end()) {
        offset = it->second;
    }
    const auto ms = static_cast<std::int64_t>(std::llround((offset + time_s) * 1000.0));
    return m.epoch + std::chrono::milliseconds{ms};
}

OcelEvent to_ocel_event(const ActivityEvent& e, const MatchSummary& m, const ObjectIds& ids, const GridSpec& spec) {
    OcelEvent out;
    out.id = e.event_id;
    out.activity = e.activity;
    out.time = absolute_time(m, e.period, e.time_s);
    out.attrs = e.attrs;
    out.attrs["event_class"] = std::string(event_class_name(e.event_class));
    out.attrs["period"] = static_cast<std::int64_t>(e.period);
    out.attrs["match_time_s"] = e.time_s;
    out.attrs["frame"] = e.frame;

    auto& rel = out.relations;
    rel.push_back({ids.match(m.match_id), std::string(q::kMatch)});
    if (e.team) {
        rel.push_back({ids.team(m.match_id, *e.team), std::string(q::kTeam)});
    }
    if (e.event_class == EventClass::PositionBased) {
        if (e.players.size() != 1) {
            throw InvariantError("event " + e.event_id + ": position-based event needs exactly one player");
        }
        rel.push_back({ids.player(m.match_id, e.players.front().label), std::string(q::kExecutingPlayer)});
    } else {
        for (const auto& p : e.players) {
            rel.push_back({ids.player(m.match_id, p.label), std::string(p.role == PlayerRole::Executing
                                                                             ? q::kExecutingPlayer
                                                                             : q::kReceivingPlayer)});
        }
    }
    if (const auto pid = attr_get<std::string>(e.attrs, "possession_id")) {
        rel.push_back({ids.possession(*pid), std::string(q::kPossession)});
    }
    if (e.event_class == EventClass::PositionBased) {
        const auto from = attr_get<std::string>(e.attrs, "from_cell");
        const auto to = attr_get<std::string>(e.attrs, "to_cell");
        const auto from_cell = from ? parse_cell_label(*from, spec) : std::nullopt;
        const auto to_cell = to ? parse_cell_label(*to, spec) : std::nullopt;
        if (!from_cell || !to_cell) {
            throw InvariantError("event " + e.event_id + ": position-based event without from/to cells");
        }
        rel.push_back({ids.grid(m.match_id, *from_cell), std::string(q::kFromCell)});
        rel.push_back({ids.grid(m.match_id, *to_cell), std::string(q::kToCell)});
    } else if (e.cell) {
        rel.push_back({ids.grid(m.match_id, *e.cell), std::string(q::kAtCell)});
    }
    if (e.event_class == EventClass::Ball) {
        rel.push_back({ids.ball(m.match_id), std::string(q::kBall)});
    }
    return out;
}

} // namespace

OcelLog build_log(std::span<const MatchSummary> matches, std::span<const std::vector<ActivityEvent>> streams,
                  std::vector<OcelObject> objects, IdentityScope scope, const GridSpec& spec) {
    if (matches.size() != streams.size()) {
        throw InvariantError("build_log: one event stream per match required");
    }
    OcelLog log;
    log.objects = std::move(objects);
    const ObjectIndex index(log);
    const ObjectIds ids{scope};
    std::unordered_set<std::string> event_ids;

    std::size_t total = 0;
    for (const auto& s : streams) {
        total += s.size();
    }
    log.events.reserve(total);
    for (std::size_t mi = 0; mi < matches.size(); ++mi) {
        for (const auto& e : streams[mi]) {
            auto ev = to_ocel_event(e, matches[mi], ids, spec);
            for (const auto& r : ev.relations) {
                if (index.find(r.object_id) == nullptr) {
                    throw InvariantError("event " + ev.id + " relates to unknown object '" + r.object_id + "'");
                }
            }
            if (!event_ids.insert(ev.id).second) {
                throw InvariantError("duplicate event id '" + ev.id + "'");
            }
            log.events.push_back(std::move(ev));
        }
    }
    log.sort_events();
    log.derive_schemas();
    return log;
}

std::vector<std::string> validate_log(const OcelLog& log) {
    std::vector<std::string> issues;
    const auto report = [&issues](std::string msg) {
        if (issues.size() < 50) {
            issues.push_back(std::move(msg));
        }
    };

    std::map<std::string, std::map<std::string, std::string>, std::less<>> obj_schema;
    for (const auto& t : log.object_types) {
        for (const auto& a : t.attributes) {
            obj_schema[t.name][a.name] = a.type;
        }
        obj_schema[t.name];
    }
    std::map<std::string, std::map<std::string, std::string>, std::less<>> ev_schema;
    for (const auto& t : log.event_types) {
        for (const auto& a : t.attributes) {
            ev_schema[t.name][a.name] = a.type;
        }
        ev_schema[t.name];
    }
    const auto check_attrs = [&](const auto& schema, const std::string& type, const AttrMap& attrs,
                                 const std::string& where) {
        const auto it = schema.find(type);
        if (it == schema.end()) {
            report(where + ": undeclared type '" + type + "'");
            return;
        }
        for (const auto& [name, value] : attrs) {
            const auto d = it->second.find(name);
            if (d == it->second.end()) {
                report(where + ": undeclared attribute '" + name + "'");
            } else if (d->second != attr_type_name(value)) {
                report(where + ": attribute '" + name + "' is not " + d->second);
            }
        }
    };

    std::unordered_set<std::string_view> object_ids;
    for (const auto& o : log.objects) {
        if (o.id.empty()) {
            report("object with empty id");
        }
        if (!object_ids.insert(o.id).second) {
            report("duplicate object id '" + o.id + "'");
        }
        check_attrs(obj_schema, o.type, o.attrs, "object " + o.id);
    }
    const ObjectIndex index(log);

    std::unordered_set<std::string_view> event_ids;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        const std::string where = "event " + e.id;
        if (!event_ids.insert(e.id).second) {
            report("duplicate event id '" + e.id + "'");
        }
        if (i > 0) {
            const auto& p = log.events[i - 1];
            if (e.time < p.time || (e.time == p.time && e.id < p.id)) {
                report(where + ": out of (time, id) order");
            }
        }
        check_attrs(ev_schema, e.activity, e.attrs, where);
        if (e.relations.empty()) {
            report(where + ": no relationships");
        }
        std::map<std::string_view, int> per_type;
        std::map<std::string_view, int> per_qualifier;
        for (const auto& r : e.relations) {
            const auto* o = index.find(r.object_id);
            if (o == nullptr) {
                report(where + ": unresolved object '" + r.object_id + "'");
                continue;
            }
            ++per_type[o->type];
            ++per_qualifier[r.qualifier];
        }
        const auto cls = attr_get<std::string>(e.attrs, "event_class");
        const bool has_possession = e.attrs.contains("possession_id");
        if (cls == event_class_name(EventClass::Ball)) {
            for (const auto t : {ot::kMatch, ot::kTeam, ot::kPlayer, ot::kGridPosition, ot::kBall}) {
                if (per_type[t] < 1) {
                    report(where + ": ball event without a " + std::string(t) + " relation");
                }
            }
            if (has_possession && per_type[ot::kPossession] < 1) {
                report(where + ": ball event without its possession relation");
            }
        } else if (cls == event_class_name(EventClass::PositionBased)) {
            if (per_type[ot::kPlayer] != 1) {
                report(where + ": position-based event must relate exactly one player");
            }
            if (per_type[ot::kGridPosition] != 2 || per_qualifier[q::kFromCell] != 1 ||
                per_qualifier[q::kToCell] != 1) {
                report(where + ": position-based event must relate from_cell and to_cell");
            }
        }
    }
    return issues;
}

LogStats stats(const OcelLog& log) {
    LogStats s;
    s.events = log.events.size();
    s.objects = log.objects.size();
    for (const auto& e : log.events) {
        ++s.per_activity[e.activity];
        const auto cls = attr_get<std::string>(e.attrs, "event_class");
        ++s.per_class[cls.value_or("unknown")];
        if (attr_get<std::string>(e.attrs, "record_part") != "end") {
            ++s.primary_events;
        }
        if (cls == event_class_name(EventClass::PositionBased)) {
            ++s.movement_events;
        }
    }
    for (const auto& o : log.objects) {
        ++s.per_object_type[o.type];
    }
    const auto count = [&s](std::string_view t) {
        const auto it = s.per_object_type.find(std::string(t));
        return it == s.per_object_type.end() ? std::size_t{0} : it->second;
    };
    s.possessions = count(ot::kPossession);
    s.matches = count(ot::kMatch);
    return s;
}

std::string format_stats(const LogStats& s) {
    std::ostringstream out;
    out << "events\t" << s.events << '\n'
        << "events_without_outcome_events\t" << s.primary_events << '\n'
        << "movement_events\t" << s.movement_events << '\n'
        << "game_events\t" << (s.events - s.movement_events) << '\n'
        << "objects\t" << s.objects << '\n'
        << "possessions\t" << s.possessions << '\n'
        << "matches\t" << s.matches << '\n';
    for (const auto& [k, v] : s.per_class) {
        out << "class." << k << '\t' << v << '\n';
    }
    for (const auto& [k, v] : s.per_object_type) {
        out << "object_type." << k << '\t' << v << '\n';
    }
    for (const auto& [k, v] : s.per_activity) {
        out << "activity." << k << '\t' << v << '\n';
    }
    return out.str();
}

} // namespace pitchlog
