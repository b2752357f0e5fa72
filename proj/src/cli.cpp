#include "pitchlog/cli.hpp"

#include "pitchlog/error.hpp"
#include "pitchlog/mining.hpp"
#include "pitchlog/ocel.hpp"
#include "pitchlog/render.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace pitchlog {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <typename T>
T config_value(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

MatchInput parse_match_spec(const std::string& spec, const std::string& fallback_id) {
    std::string id = fallback_id;
    std::string rest = spec;
    if (const auto eq = spec.find('='); eq != std::string::npos) {
        id = spec.substr(0, eq);
        rest = spec.substr(eq + 1);
    }
    const auto parts = split_list(rest);
    if (parts.size() != 3 || id.empty()) {
        throw ConfigError("match '" + spec + "' must look like [ID=]HOME.csv,AWAY.csv,EVENTS.csv");
    }
    return {id, parts[0], parts[1], parts[2]};
}

RunConfig apply_config_file(RunConfig base, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(path.string() + ": top level must be an object");
    }
    static const std::set<std::string> known = {
        "matches",        "metrica_dir", "games",      "grid_cols",   "grid_rows",           "pitch_length_m",
        "pitch_width_m",  "sample_rate", "scope",      "min_dwell_s", "normalize_direction", "activity_map",
        "controlling_types", "jobs",
    };
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw ConfigError(path.string() + ": unknown config key '" + key + "'");
        }
    }
    const auto dir = path.parent_path();
    auto& p = base.pipeline;
    if (doc.contains("metrica_dir")) {
        const auto games = doc.contains("games") ? config_value<std::vector<int>>(doc, "games") : std::vector<int>{1, 2};
        base.matches = metrica_inputs(resolve(dir, config_value<std::string>(doc, "metrica_dir")), games);
    }
    if (doc.contains("matches")) {
        base.matches.clear();
        for (const auto& m : doc["matches"]) {
            try {
                base.matches.push_back({m.at("id").get<std::string>(), resolve(dir, m.at("home").get<std::string>()),
                                        resolve(dir, m.at("away").get<std::string>()),
                                        resolve(dir, m.at("events").get<std::string>())});
            } catch (const json::exception&) {
                throw ConfigError(path.string() + ": each match needs string keys id, home, away, events");
            }
        }
    }
    if (doc.contains("grid_cols")) p.grid.cols = config_value<int>(doc, "grid_cols");
    if (doc.contains("grid_rows")) p.grid.rows = config_value<int>(doc, "grid_rows");
    if (doc.contains("pitch_length_m")) p.grid.pitch_length_m = config_value<double>(doc, "pitch_length_m");
    if (doc.contains("pitch_width_m")) p.grid.pitch_width_m = config_value<double>(doc, "pitch_width_m");
    if (doc.contains("sample_rate")) p.sample_rate = config_value<double>(doc, "sample_rate");
    if (doc.contains("min_dwell_s")) p.min_dwell_s = config_value<double>(doc, "min_dwell_s");
    if (doc.contains("normalize_direction")) p.normalize_direction = config_value<bool>(doc, "normalize_direction");
    if (doc.contains("jobs")) p.jobs = config_value<int>(doc, "jobs");
    if (doc.contains("activity_map")) {
        p.activity_map = resolve(dir, config_value<std::string>(doc, "activity_map"));
    }
    if (doc.contains("controlling_types")) {
        const auto types = config_value<std::vector<std::string>>(doc, "controlling_types");
        p.control.controlling = {types.begin(), types.end()};
    }
    if (doc.contains("scope")) {
        const auto s = parse_scope(config_value<std::string>(doc, "scope"));
        if (!s) {
            throw ConfigError(path.string() + ": scope must be 'global' or 'per_match'");
        }
        p.scope = *s;
    }
    return base;
}

namespace {

// Flags shared by every subcommand that can build a log from raw inputs.
struct InputFlags {
    std::string config;
    std::vector<std::string> matches;
    std::string metrica_dir;
    std::vector<int> games{1, 2};
    std::string ocel;
    PipelineConfig defaults;
    int grid_cols = defaults.grid.cols;
    int grid_rows = defaults.grid.rows;
    double pitch_length = defaults.grid.pitch_length_m;
    double pitch_width = defaults.grid.pitch_width_m;
    double sample_rate = defaults.sample_rate;
    std::string scope{scope_name(defaults.scope)};
    double min_dwell = defaults.min_dwell_s;
    bool normalize = false;
    std::string activity_map;
    int jobs = 1;
    std::map<std::string, CLI::Option*> opts;

    void attach(CLI::App* app, bool allow_ocel) {
        opts["config"] = app->add_option("--config", config, "JSON run configuration (flags override it)");
        opts["match"] = app->add_option("--match", matches, "Match inputs as [ID=]HOME.csv,AWAY.csv,EVENTS.csv (repeatable)");
        opts["metrica-dir"] = app->add_option("--metrica-dir", metrica_dir, "Root of the Metrica sample-data layout");
        opts["games"] = app->add_option("--games", games, "Sample game numbers under --metrica-dir")
                            ->delimiter(',')
                            ->capture_default_str();
        if (allow_ocel) {
            opts["ocel"] = app->add_option("--ocel", ocel, "Read an existing OCEL 2.0 JSON log instead of converting");
        }
        opts["grid-cols"] = app->add_option("--grid-cols", grid_cols, "Grid columns along the pitch length")->capture_default_str();
        opts["grid-rows"] = app->add_option("--grid-rows", grid_rows, "Grid rows along the pitch width")->capture_default_str();
        opts["pitch-length"] = app->add_option("--pitch-length", pitch_length, "Pitch length in metres")->capture_default_str();
        opts["pitch-width"] = app->add_option("--pitch-width", pitch_width, "Pitch width in metres")->capture_default_str();
        opts["sample-rate"] = app->add_option("--sample-rate", sample_rate, "Tracking frames per second")->capture_default_str();
        opts["scope"] = app->add_option("--scope", scope, "Object identity scope: global or per_match")
                            ->check(CLI::IsMember({"global", "per_match"}))
                            ->capture_default_str();
        opts["min-dwell"] = app->add_option("--min-dwell", min_dwell, "Seconds a player must stay in a cell before a move counts")
                                ->capture_default_str();
        opts["normalize-direction"] = app->add_flag("--normalize-direction", normalize, "Mirror second-half coordinates");
        opts["activity-map"] = app->add_option("--activity-map", activity_map, "JSON activity mapping (built-in defaults otherwise)");
        opts["jobs"] = app->add_option("--jobs,-j", jobs, "Matches converted in parallel")->capture_default_str();
    }

    bool given(const std::string& name) const {
        const auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }

    RunConfig resolve_config() const {
        RunConfig rc;
        if (given("config")) {
            rc = apply_config_file(rc, config);
        }
        auto& p = rc.pipeline;
        if (given("metrica-dir")) {
            rc.matches = metrica_inputs(metrica_dir, games);
        }
        if (given("match")) {
            rc.matches.clear();
            for (std::size_t i = 0; i < matches.size(); ++i) {
                rc.matches.push_back(parse_match_spec(matches[i], "match" + std::to_string(i + 1)));
            }
        }
        if (given("grid-cols")) p.grid.cols = grid_cols;
        if (given("grid-rows")) p.grid.rows = grid_rows;
        if (given("pitch-length")) p.grid.pitch_length_m = pitch_length;
        if (given("pitch-width")) p.grid.pitch_width_m = pitch_width;
        if (given("sample-rate")) p.sample_rate = sample_rate;
        if (given("scope")) p.scope = *parse_scope(scope);
        if (given("min-dwell")) p.min_dwell_s = min_dwell;
        if (given("normalize-direction")) p.normalize_direction = normalize;
        if (given("activity-map")) p.activity_map = activity_map;
        if (given("jobs")) p.jobs = jobs;
        p.validate();
        return rc;
    }
};

struct Loaded {
    OcelLog log;
    GridSpec grid;
    std::vector<MatchResult> matches;
};

Loaded load_log(const InputFlags& f) {
    if (f.given("ocel")) {
        Loaded l;
        l.log = read_ocel_json(std::filesystem::path(f.ocel));
        l.grid = f.resolve_config().pipeline.grid;
        return l;
    }
    const auto rc = f.resolve_config();
    if (rc.matches.empty()) {
        throw ConfigError("no input: give --ocel, --match, --metrica-dir or a --config with matches");
    }
    auto result = run_pipeline(rc.matches, rc.pipeline);
    return {std::move(result.log), rc.pipeline.grid, std::move(result.matches)};
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write '" + path + "'");
    }
    f << text;
}

std::set<std::string> type_set(const std::vector<std::string>& types) {
    return {types.begin(), types.end()};
}

int cmd_convert(const InputFlags& f, const std::string& output, std::ostream& out, std::ostream& err) {
    const auto loaded = load_log(f);
    const auto issues = validate_log(loaded.log);
    for (const auto& m : loaded.matches) {
        out << fmt::format("match\t{}\tprefix={}\traw_events={}\tframes={}\tgame_events={}\tmovement_events={}\tpossessions={}\n",
                           m.summary.match_id, m.summary.prefix, m.raw_events, m.frames, m.game_events,
                           m.movement_events, m.summary.spans.size());
        for (const auto& w : m.warnings) {
            err << "warning: " << m.summary.match_id << ": " << w << '\n';
        }
    }
    if (!issues.empty()) {
        for (const auto& i : issues) {
            err << "invalid log: " << i << '\n';
        }
        return 2;
    }
    if (output == "-") {
        write_ocel_json(loaded.log, out);
    } else {
        write_ocel_json(loaded.log, std::filesystem::path(output));
        out << format_stats(stats(loaded.log));
    }
    return 0;
}

int cmd_possessions(const InputFlags& f, std::ostream& out) {
    const auto loaded = load_log(f);
    std::vector<const OcelObject*> spans;
    for (const auto& o : loaded.log.objects) {
        if (o.type == object_type::kPossession) {
            spans.push_back(&o);
        }
    }
    const auto field = [](const OcelObject* o, const char* key) {
        const auto it = o->attrs.find(key);
        return it == o->attrs.end() ? std::string() : attr_to_string(it->second);
    };
    out << "id\tteam\tstart_s\tend_s\toutcome\n";
    for (const auto* o : spans) {
        std::string_view id = o->id;
        if (const auto colon = id.find(':'); colon != std::string_view::npos) {
            id.remove_prefix(colon + 1);
        }
        out << id << '\t' << field(o, "team") << '\t' << field(o, "start_s") << '\t' << field(o, "end_s") << '\t'
            << field(o, "outcome") << '\n';
    }
    return 0;
}

int cmd_dfg(const InputFlags& f, const std::vector<std::string>& types, const std::vector<std::string>& where,
            const std::string& output, std::ostream& out, std::ostream& err) {
    const auto loaded = load_log(f);
    LogFilter filter;
    for (const auto& w : where) {
        filter.predicates.push_back(AttrPredicate::parse(w));
    }
    const auto filtered = filter.predicates.empty() ? loaded.log : filter_log(loaded.log, filter);
    const auto g = discover_ocdfg(filtered, type_set(types));
    for (const auto& w : g.warnings) {
        err << "warning: " << w << '\n';
    }
    write_text(output, dfg_to_dot(g), out);
    if (!output.empty() && output != "-") {
        out << fmt::format("events\t{}\n", filtered.events.size());
        for (const auto& [type, m] : dfg_metrics(g)) {
            out << fmt::format("{}\tnodes={}\tedges={}\tself_loops={}\tmax_self_loop={}\n", type, m.nodes, m.edges,
                               m.self_loop_total, m.max_self_loop.value_or("-"));
        }
    }
    return 0;
}

int cmd_spatial(const InputFlags& f, const std::string& possession, const std::vector<std::string>& types,
                bool team_only, const std::string& output, std::ostream& out) {
    const auto loaded = load_log(f);
    RenderOptions opts;
    opts.team_only = team_only;
    write_text(output, spatial_instance_svg(loaded.log, possession, type_set(types), loaded.grid, opts), out);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Football tracking and event data to object-centric event logs", "pitchlog"};
    app.require_subcommand(1);

    InputFlags convert_flags;
    std::string convert_output;
    auto* convert = app.add_subcommand("convert", "Convert matches to an OCEL 2.0 JSON log and print its statistics");
    convert_flags.attach(convert, false);
    convert->add_option("--output,-o", convert_output, "OCEL JSON output path ('-' for standard output)")->required();

    std::string stats_path;
    auto* stats_cmd = app.add_subcommand("stats", "Summarise an OCEL 2.0 JSON log");
    stats_cmd->add_option("ocel,--ocel", stats_path, "OCEL JSON log")->required();

    InputFlags poss_flags;
    auto* poss = app.add_subcommand("possessions", "List possession spans as tab-separated rows");
    poss_flags.attach(poss, true);

    InputFlags dfg_flags;
    std::vector<std::string> dfg_types{"ball"};
    std::vector<std::string> dfg_where;
    std::string dfg_output;
    auto* dfg = app.add_subcommand("dfg", "Discover an object-centric directly-follows graph as Graphviz DOT");
    dfg_flags.attach(dfg, true);
    dfg->add_option("--types", dfg_types, "Object types to follow")->delimiter(',')->capture_default_str();
    dfg->add_option("--where", dfg_where, "Keep events related to an object with <type>.<attribute>=<value> (repeatable)");
    dfg->add_option("--out,-o", dfg_output, "DOT output path (standard output when omitted)");

    InputFlags sp_flags;
    std::string sp_possession;
    std::vector<std::string> sp_types{"ball", "player"};
    bool sp_team_only = false;
    std::string sp_output;
    auto* spatial = app.add_subcommand("spatial", "Plot the object traces of one possession on the pitch grid as SVG");
    sp_flags.attach(spatial, true);
    spatial->add_option("--possession", sp_possession, "Possession id, e.g. AA156")->required();
    spatial->add_option("--types", sp_types, "Object types to plot")->delimiter(',')->capture_default_str();
    spatial->add_flag("--team-only", sp_team_only, "Only plot players of the team in possession");
    spatial->add_option("--out,-o", sp_output, "SVG output path (standard output when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*convert) {
            return cmd_convert(convert_flags, convert_output, out, err);
        }
        if (*stats_cmd) {
            out << format_stats(stats(read_ocel_json(std::filesystem::path(stats_path))));
            return 0;
        }
        if (*poss) {
            return cmd_possessions(poss_flags, out);
        }
        if (*dfg) {
            return cmd_dfg(dfg_flags, dfg_types, dfg_where, dfg_output, out, err);
        }
        if (*spatial) {
            return cmd_spatial(sp_flags, sp_possession, sp_types, sp_team_only, sp_output, out);
        }
    } catch (const InvariantError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"pitchlog"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace pitchlog
