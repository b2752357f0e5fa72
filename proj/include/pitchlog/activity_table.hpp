#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace pitchlog {

enum class EventClass { GameBased, Ball, PositionBased };

std::string_view event_class_name(EventClass c);
std::optional<EventClass> parse_event_class(std::string_view s);

/// When a provider record yields a second, outcome event.
enum class EndCondition {
    Always,
    HasReceiver, // only when the record names a receiving player
    GoalSubtype, // only when the subtype marks a goal
};

struct EndEventRule {
    std::string label;
    EndCondition when = EndCondition::Always;

    friend bool operator==(const EndEventRule&, const EndEventRule&) = default;
};

/// How one provider type token becomes canonical activities.
struct ActivityRule {
    std::string label;
    EventClass event_class = EventClass::Ball;
    /// Emit the primary event at the record's end instead of its start.
    bool at_end = false;
    std::optional<EndEventRule> end_event;

    friend bool operator==(const ActivityRule&, const ActivityRule&) = default;
};

enum class UnknownTypePolicy { Reject, PassThrough };

/// Provider type token -> activity mapping. Defaults cover the Metrica types.
struct ActivityTable {
    std::map<std::string, ActivityRule, std::less<>> rules;
    UnknownTypePolicy unknown = UnknownTypePolicy::Reject;

    static ActivityTable defaults();
    /// Reads the JSON mapping file; throws ConfigError / IoError.
    static ActivityTable load(const std::filesystem::path& path);
    static ActivityTable from_json_text(std::string_view text, const std::string& source = "<json>");

    const ActivityRule* find(std::string_view provider_type) const;

    friend bool operator==(const ActivityTable&, const ActivityTable&) = default;
};

inline constexpr std::string_view kMovementActivity = "Player changes position";

} // namespace pitchlog
