#include "pitchlog/activity_table.hpp"

#include "pitchlog/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace pitchlog {

std::string_view event_class_name(EventClass c) {
    switch (c) {
    case EventClass::GameBased:
        return "game_based";
    case EventClass::Ball:
        return "ball";
    case EventClass::PositionBased:
        return "position_based";
    }
    return "game_based";
}

std::optional<EventClass> parse_event_class(std::string_view s) {
    for (auto c : {EventClass::GameBased, EventClass::Ball, EventClass::PositionBased}) {
        if (event_class_name(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

ActivityTable ActivityTable::defaults() {
    ActivityTable t;
    const auto add = [&t](std::string type, std::string label, EventClass cls) -> ActivityRule& {
        auto& r = t.rules[std::move(type)];
        r.label = std::move(label);
        r.event_class = cls;
        return r;
    };
    add("SET PIECE", "Set piece", EventClass::Ball);
    add("PASS", "Pass", EventClass::Ball).end_event = EndEventRule{"Pass received", EndCondition::HasReceiver};
    add("SHOT", "Shot", EventClass::Ball).end_event = EndEventRule{"Goal", EndCondition::GoalSubtype};
    add("RECOVERY", "Recovery", EventClass::Ball);
    add("CARRY", "Carry", EventClass::Ball);
    add("BALL LOST", "Ball lost", EventClass::Ball);
    add("BALL OUT", "Ball out", EventClass::Ball).at_end = true;
    add("CHALLENGE", "Challenge", EventClass::GameBased);
    add("CARD", "Card", EventClass::GameBased);
    add("FAULT RECEIVED", "Fault received", EventClass::GameBased);
    return t;
}

namespace {

using nlohmann::json;

EndCondition parse_condition(const std::string& s, const std::string& where) {
    if (s == "always") {
        return EndCondition::Always;
    }
    if (s == "receiver") {
        return EndCondition::HasReceiver;
    }
    if (s == "goal") {
        return EndCondition::GoalSubtype;
    }
    throw ConfigError(where + ": unknown end condition '" + s + "'");
}

} // namespace

ActivityTable ActivityTable::from_json_text(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    ActivityTable t;
    try {
        const auto policy = doc.value("unknown", std::string("reject"));
        if (policy == "reject") {
            t.unknown = UnknownTypePolicy::Reject;
        } else if (policy == "pass_through") {
            t.unknown = UnknownTypePolicy::PassThrough;
        } else {
            throw ConfigError(source + ": /unknown must be 'reject' or 'pass_through'");
        }
        for (const auto& [type, spec] : doc.at("activities").items()) {
            const std::string where = source + ": /activities/" + type;
            ActivityRule r;
            r.label = spec.at("label").get<std::string>();
            const auto cls = parse_event_class(spec.value("class", std::string("ball")));
            if (!cls || *cls == EventClass::PositionBased) {
                throw ConfigError(where + "/class must be 'ball' or 'game_based'");
            }
            r.event_class = *cls;
            r.at_end = spec.value("at", std::string("start")) == "end";
            if (spec.contains("end")) {
                const auto& end = spec.at("end");
                r.end_event = EndEventRule{end.at("label").get<std::string>(),
                                           parse_condition(end.value("when", std::string("always")), where)};
            }
            t.rules.emplace(type, std::move(r));
        }
    } catch (const json::exception& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return t;
}

ActivityTable ActivityTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), path.string());
}

const ActivityRule* ActivityTable::find(std::string_view provider_type) const {
    const auto it = rules.find(provider_type);
    return it == rules.end() ? nullptr : &it->second;
}

} // namespace pitchlog
