#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pitchlog {

/// Typed attribute value as stored on events and objects.
using AttrValue = std::variant<std::string, std::int64_t, double>;
using AttrMap = std::map<std::string, AttrValue, std::less<>>;

/// OCEL type name of a value: "string", "integer" or "float".
std::string_view attr_type_name(const AttrValue& v);

/// Plain text form used for filtering and display (doubles in shortest form).
std::string attr_to_string(const AttrValue& v);

template <typename T>
std::optional<T> attr_get(const AttrMap& attrs, std::string_view key) {
    const auto it = attrs.find(key);
    if (it == attrs.end()) {
        return std::nullopt;
    }
    if (const auto* v = std::get_if<T>(&it->second)) {
        return *v;
    }
    return std::nullopt;
}

} // namespace pitchlog
