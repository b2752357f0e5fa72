#include "pitchlog/attributes.hpp"

#include "text_util.hpp"

namespace pitchlog {

std::string_view attr_type_name(const AttrValue& v) {
    switch (v.index()) {
    case 0:
        return "string";
    case 1:
        return "integer";
    default:
        return "float";
    }
}

std::string attr_to_string(const AttrValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) {
        return *s;
    }
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return std::to_string(*i);
    }
    return detail::format_double(std::get<double>(v));
}

} // namespace pitchlog
