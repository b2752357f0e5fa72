// OCEL 2.0 JSON interchange.

#include "pitchlog/error.hpp"
#include "pitchlog/ocel.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>

namespace pitchlog {

using nlohmann::ordered_json;

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const auto in_day = t - day;
    const auto h = duration_cast<hours>(in_day);
    const auto m = duration_cast<minutes>(in_day - h);
    const auto s = duration_cast<seconds>(in_day - h - m);
    const auto ms = duration_cast<milliseconds>(in_day - h - m - s);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()), static_cast<int>(ms.count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS[.fff...](Z|+00:00)
    const auto digits = [&s](std::size_t pos, std::size_t n) -> std::optional<int> {
        if (pos + n > s.size()) {
            return std::nullopt;
        }
        int v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (s[i] < '0' || s[i] > '9') {
                return std::nullopt;
            }
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    if (s.size() < 20 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        s[16] != ':') {
        return std::nullopt;
    }
    const auto Y = digits(0, 4);
    const auto M = digits(5, 2);
    const auto D = digits(8, 2);
    const auto hh = digits(11, 2);
    const auto mm = digits(14, 2);
    const auto ss = digits(17, 2);
    if (!Y || !M || !D || !hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{*Y}, month{static_cast<unsigned>(*M)}, day{static_cast<unsigned>(*D)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    int millis = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        int scale = 100;
        const std::size_t begin = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            millis += (s[pos] - '0') * scale;
            scale /= 10;
            ++pos;
        }
        if (pos == begin) {
            return std::nullopt;
        }
    }
    const auto zone = s.substr(pos);
    if (zone != "Z" && zone != "+00:00") {
        return std::nullopt;
    }
    return time_point_cast<milliseconds>(sys_days{ymd}) + hours{*hh} + minutes{*mm} + seconds{*ss} +
           milliseconds{millis};
}

namespace {

constexpr std::string_view kObjectAttrTime = "1970-01-01T00:00:00.000Z";

ordered_json value_json(const AttrValue& v) {
    return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

ordered_json schema_json(const TypeSchema& t) {
    ordered_json attrs = ordered_json::array();
    for (const auto& a : t.attributes) {
        attrs.push_back({{"name", a.name}, {"type", a.type}});
    }
    return {{"name", t.name}, {"attributes", std::move(attrs)}};
}

ordered_json object_json(const OcelObject& o) {
    ordered_json attrs = ordered_json::array();
    for (const auto& [name, value] : o.attrs) {
        attrs.push_back({{"name", name}, {"time", kObjectAttrTime}, {"value", value_json(value)}});
    }
    return {{"id", o.id}, {"type", o.type}, {"attributes", std::move(attrs)}};
}

ordered_json event_json(const OcelEvent& e) {
    ordered_json attrs = ordered_json::array();
    for (const auto& [name, value] : e.attrs) {
        attrs.push_back({{"name", name}, {"value", value_json(value)}});
    }
    ordered_json rels = ordered_json::array();
    for (const auto& r : e.relations) {
        rels.push_back({{"objectId", r.object_id}, {"qualifier", r.qualifier}});
    }
    return {{"id", e.id},
            {"type", e.activity},
            {"time", format_timestamp(e.time)},
            {"attributes", std::move(attrs)},
            {"relationships", std::move(rels)}};
}

template <typename T, typename F>
void write_array(std::ostream& out, std::string_view key, const std::vector<T>& items, F&& to_json, bool last) {
    out << "  \"" << key << "\": [";
    for (std::size_t i = 0; i < items.size(); ++i) {
        out << (i ? ",\n    " : "\n    ") << to_json(items[i]).dump();
    }
    out << (items.empty() ? "]" : "\n  ]") << (last ? "\n" : ",\n");
}

} // namespace

void write_ocel_json(const OcelLog& log, std::ostream& out) {
    out << "{\n";
    write_array(out, "objectTypes", log.object_types, schema_json, false);
    write_array(out, "eventTypes", log.event_types, schema_json, false);
    write_array(out, "objects", log.objects, object_json, false);
    write_array(out, "events", log.events, event_json, true);
    out << "}\n";
}

void write_ocel_json(const OcelLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_ocel_json(log, out);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

namespace {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ParseError(source_, 0, path + ": " + what);
    }

    const json& member(const json& obj, const char* key, const std::string& path) const {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        const auto it = obj.find(key);
        if (it == obj.end()) {
            fail(path + "/" + key, "missing required field");
        }
        return *it;
    }

    std::string text(const json& obj, const char* key, const std::string& path) const {
        const auto& v = member(obj, key, path);
        if (!v.is_string()) {
            fail(path + "/" + key, "expected a string");
        }
        return v.get<std::string>();
    }

    const json& array(const json& obj, const char* key, const std::string& path) const {
        const auto& v = member(obj, key, path);
        if (!v.is_array()) {
            fail(path + "/" + key, "expected an array");
        }
        return v;
    }

    AttrValue value(const json& v, const std::string* declared, const std::string& path) const {
        const std::string type = declared ? *declared : (v.is_string()           ? "string"
                                                         : v.is_number_integer() ? "integer"
                                                                                 : "float");
        if (type == "string") {
            if (!v.is_string()) {
                fail(path, "expected a string value");
            }
            return v.get<std::string>();
        }
        if (type == "integer") {
            if (!v.is_number_integer()) {
                fail(path, "expected an integer value");
            }
            return v.get<std::int64_t>();
        }
        if (type == "float") {
            if (!v.is_number()) {
                fail(path, "expected a numeric value");
            }
            return v.get<double>();
        }
        fail(path, "unsupported attribute type '" + type + "'");
    }

    std::vector<TypeSchema> schemas(const json& doc, const char* key) const {
        std::vector<TypeSchema> out;
        const std::string base = std::string("/") + key;
        const auto& arr = array(doc, key, "");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = base + "/" + std::to_string(i);
            TypeSchema t{text(arr[i], "name", p), {}};
            const auto& attrs = array(arr[i], "attributes", p);
            for (std::size_t j = 0; j < attrs.size(); ++j) {
                const std::string ap = p + "/attributes/" + std::to_string(j);
                t.attributes.push_back({text(attrs[j], "name", ap), text(attrs[j], "type", ap)});
            }
            out.push_back(std::move(t));
        }
        return out;
    }

private:
    std::string source_;
};

using DeclMap = std::map<std::string, std::map<std::string, std::string>>;

DeclMap decl_map(const std::vector<TypeSchema>& schemas) {
    DeclMap out;
    for (const auto& t : schemas) {
        auto& m = out[t.name];
        for (const auto& a : t.attributes) {
            m[a.name] = a.type;
        }
    }
    return out;
}

const std::string* declared_type(const DeclMap& decls, const std::string& type, const std::string& attr) {
    const auto t = decls.find(type);
    if (t == decls.end()) {
        return nullptr;
    }
    const auto a = t->second.find(attr);
    return a == t->second.end() ? nullptr : &a->second;
}

} // namespace

OcelLog read_ocel_json(std::istream& in, const std::string& source) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return {}; // a zero-byte file is read as the empty log
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
    }
    const Reader rd(source);
    if (!doc.is_object()) {
        rd.fail("", "top level must be an object");
    }
    OcelLog log;
    log.object_types = rd.schemas(doc, "objectTypes");
    log.event_types = rd.schemas(doc, "eventTypes");
    const auto obj_decls = decl_map(log.object_types);
    const auto ev_decls = decl_map(log.event_types);

    const auto& objects = rd.array(doc, "objects", "");
    log.objects.reserve(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const std::string p = "/objects/" + std::to_string(i);
        OcelObject o;
        o.id = rd.text(objects[i], "id", p);
        o.type = rd.text(objects[i], "type", p);
        if (objects[i].contains("attributes")) {
            const auto& attrs = rd.array(objects[i], "attributes", p);
            for (std::size_t j = 0; j < attrs.size(); ++j) {
                const std::string ap = p + "/attributes/" + std::to_string(j);
                auto name = rd.text(attrs[j], "name", ap);
                const auto& v = rd.member(attrs[j], "value", ap);
                o.attrs[name] = rd.value(v, declared_type(obj_decls, o.type, name), ap + "/value");
            }
        }
        log.objects.push_back(std::move(o));
    }

    const auto& events = rd.array(doc, "events", "");
    log.events.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string p = "/events/" + std::to_string(i);
        OcelEvent e;
        e.id = rd.text(events[i], "id", p);
        e.activity = rd.text(events[i], "type", p);
        const auto when = rd.text(events[i], "time", p);
        const auto ts = parse_timestamp(when);
        if (!ts) {
            rd.fail(p + "/time", "not an ISO-8601 UTC timestamp: '" + when + "'");
        }
        e.time = *ts;
        if (events[i].contains("attributes")) {
            const auto& attrs = rd.array(events[i], "attributes", p);
            for (std::size_t j = 0; j < attrs.size(); ++j) {
                const std::string ap = p + "/attributes/" + std::to_string(j);
                auto name = rd.text(attrs[j], "name", ap);
                const auto& v = rd.member(attrs[j], "value", ap);
                e.attrs[name] = rd.value(v, declared_type(ev_decls, e.activity, name), ap + "/value");
            }
        }
        if (events[i].contains("relationships")) {
            const auto& rels = rd.array(events[i], "relationships", p);
            for (std::size_t j = 0; j < rels.size(); ++j) {
                const std::string rp = p + "/relationships/" + std::to_string(j);
                e.relations.push_back({rd.text(rels[j], "objectId", rp), rd.text(rels[j], "qualifier", rp)});
            }
        }
        log.events.push_back(std::move(e));
    }
    return log;
}

OcelLog read_ocel_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_ocel_json(in, path.string());
}

} // namespace pitchlog
