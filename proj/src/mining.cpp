#include "pitchlog/mining.hpp"

#include "pitchlog/error.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace pitchlog {

AttrPredicate AttrPredicate::parse(std::string_view text) {
    const auto dot = text.find('.');
    const auto eq = text.find('=');
    if (dot == std::string_view::npos || eq == std::string_view::npos || dot == 0 || eq < dot + 2) {
        throw ConfigError("filter '" + std::string(text) + "' must look like <type>.<attribute>=<value>");
    }
    return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1, eq - dot - 1)),
            std::string(text.substr(eq + 1))};
}

namespace {

bool object_matches(const OcelObject& o, const std::vector<const AttrPredicate*>& preds) {
    return std::all_of(preds.begin(), preds.end(), [&o](const AttrPredicate* p) {
        const auto it = o.attrs.find(p->attribute);
        return it != o.attrs.end() && attr_to_string(it->second) == p->value;
    });
}

} // namespace

OcelLog filter_log(const OcelLog& log, const LogFilter& filter) {
    std::map<std::string, std::vector<const AttrPredicate*>> by_type;
    for (const auto& p : filter.predicates) {
        const auto schema = std::find_if(log.object_types.begin(), log.object_types.end(),
                                         [&p](const TypeSchema& t) { return t.name == p.object_type; });
        const bool known = schema != log.object_types.end() &&
                           std::any_of(schema->attributes.begin(), schema->attributes.end(),
                                       [&p](const AttrDecl& a) { return a.name == p.attribute; });
        if (!known) {
            throw LookupError("unknown filter attribute '" + p.object_type + "." + p.attribute + "'");
        }
        by_type[p.object_type].push_back(&p);
    }

    const ObjectIndex index(log);
    std::unordered_set<std::string_view> matching;
    for (const auto& o : log.objects) {
        const auto it = by_type.find(o.type);
        if (it != by_type.end() && object_matches(o, it->second)) {
            matching.insert(o.id);
        }
    }

    const auto retained = [&](const OcelObject* o) {
        return o != nullptr && (!filter.retained_types || filter.retained_types->contains(o->type));
    };

    OcelLog out;
    std::unordered_set<std::string_view> referenced_before;
    std::unordered_set<std::string> referenced_after;
    for (const auto& e : log.events) {
        std::set<std::string_view> satisfied;
        for (const auto& r : e.relations) {
            referenced_before.insert(r.object_id);
            if (matching.contains(r.object_id)) {
                satisfied.insert(index.find(r.object_id)->type);
            }
        }
        if (satisfied.size() != by_type.size()) {
            continue;
        }
        OcelEvent kept = e;
        std::erase_if(kept.relations, [&](const Relation& r) { return !retained(index.find(r.object_id)); });
        for (const auto& r : kept.relations) {
            referenced_after.insert(r.object_id);
        }
        out.events.push_back(std::move(kept));
    }
    for (const auto& o : log.objects) {
        const bool now_unreferenced = referenced_before.contains(o.id) && !referenced_after.contains(o.id);
        const bool type_dropped = filter.retained_types && !filter.retained_types->contains(o.type);
        if (!now_unreferenced && !type_dropped) {
            out.objects.push_back(o);
        }
    }
    out.object_types = log.object_types;
    out.event_types = log.event_types;
    if (filter.retained_types) {
        std::erase_if(out.object_types,
                      [&](const TypeSchema& t) { return !filter.retained_types->contains(t.name); });
    }
    return out;
}

bool OcDfg::empty() const {
    return std::all_of(types.begin(), types.end(), [](const auto& kv) { return kv.second.nodes.empty(); });
}

OcDfg discover_ocdfg(const OcelLog& log, const std::set<std::string>& types) {
    OcDfg g;
    const ObjectIndex index(log);
    // object id -> indices of its events, in log order
    std::unordered_map<std::string_view, std::vector<std::size_t>> traces;
    std::vector<std::string_view> object_order;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        for (const auto& r : log.events[i].relations) {
            const auto* o = index.find(r.object_id);
            if (o == nullptr || !types.contains(o->type)) {
                continue;
            }
            auto [it, inserted] = traces.try_emplace(o->id);
            if (inserted) {
                object_order.push_back(o->id);
            }
            if (it->second.empty() || it->second.back() != i) {
                it->second.push_back(i);
            }
        }
    }

    for (const auto& t : types) {
        g.types[t];
    }
    std::map<std::string, std::map<std::string, std::unordered_set<std::size_t>>> distinct_events;
    for (const auto id : object_order) {
        const auto& trace = traces.at(id);
        const auto* o = index.find(id);
        auto& dfg = g.types[o->type];
        ++dfg.objects;
        for (std::size_t k = 0; k < trace.size(); ++k) {
            const auto& activity = log.events[trace[k]].activity;
            ++dfg.nodes[activity].occurrences;
            distinct_events[o->type][activity].insert(trace[k]);
            if (k > 0) {
                ++dfg.edges[{log.events[trace[k - 1]].activity, activity}];
            }
        }
        ++dfg.starts[log.events[trace.front()].activity];
        ++dfg.ends[log.events[trace.back()].activity];
    }
    for (const auto& [type, acts] : distinct_events) {
        for (const auto& [activity, events] : acts) {
            g.types[type].nodes[activity].events = events.size();
        }
    }
    for (const auto& t : types) {
        if (g.types[t].objects == 0) {
            g.warnings.push_back("object type '" + t + "' has no events in the log");
        }
    }
    return g;
}

std::map<std::string, TypeDfgMetrics> dfg_metrics(const OcDfg& g) {
    std::map<std::string, TypeDfgMetrics> out;
    for (const auto& [type, dfg] : g.types) {
        auto& m = out[type];
        m.nodes = dfg.nodes.size();
        m.edges = dfg.edges.size();
        for (const auto& [pair, count] : dfg.edges) {
            if (count > m.max_edge_weight) {
                m.max_edge_weight = count;
                m.max_edge = pair;
            }
            if (pair.first == pair.second) {
                m.self_loop_total += count;
                if (count > m.max_self_loop_weight) {
                    m.max_self_loop_weight = count;
                    m.max_self_loop = pair.first;
                }
            }
        }
    }
    return out;
}

} // namespace pitchlog
