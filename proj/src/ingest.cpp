#include "pitchlog/ingest.hpp"

#include "pitchlog/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

namespace pitchlog {

using detail::is_missing;
using detail::parse_double;
using detail::parse_int;
using detail::split_csv;

std::string_view side_name(Side s) {
    return s == Side::Home ? "Home" : "Away";
}

std::optional<Side> parse_side(std::string_view token) {
    if (token == "Home") {
        return Side::Home;
    }
    if (token == "Away") {
        return Side::Away;
    }
    return std::nullopt;
}

std::optional<std::size_t> TrackingTable::index_of(std::string_view label) const {
    const auto it = std::find(players.begin(), players.end(), label);
    if (it == players.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - players.begin());
}

MaybePoint TrackingTable::position(std::size_t frame_index, std::string_view label) const {
    const auto idx = index_of(label);
    if (!idx || frame_index >= frames.size()) {
        return std::nullopt;
    }
    return frames[frame_index].positions[*idx];
}

MaybePoint mirrored(const MaybePoint& p) {
    if (!p) {
        return p;
    }
    return NormalizedPoint{1.0 - p->x, 1.0 - p->y};
}

namespace {

constexpr double kTimeTolerance = 1e-6;

MaybePoint read_point(std::string_view xs, std::string_view ys, const std::string& source, std::size_t line) {
    if (is_missing(xs) || is_missing(ys)) {
        return std::nullopt;
    }
    const auto x = parse_double(xs);
    const auto y = parse_double(ys);
    if (!x || !y) {
        throw ParseError(source, line, "non-numeric coordinate '" + std::string(xs) + "," + std::string(ys) + "'");
    }
    return NormalizedPoint{*x, *y};
}

bool starts_with_period_header(std::string_view line) {
    return detail::trim(line).starts_with("Period,");
}

} // namespace

TrackingFragment parse_tracking(std::istream& in, Side side, double sample_rate, const std::string& source) {
    if (!(sample_rate > 0.0)) {
        throw ConfigError("sample rate must be positive");
    }
    TrackingFragment out;
    out.side = side;

    std::string line;
    std::vector<std::string_view> cells;
    std::size_t line_no = 0;

    // Header: team row, jersey row, column-title row.
    for (int h = 0; h < 3; ++h) {
        if (!std::getline(in, line)) {
            throw ParseError(source, line_no, "tracking header needs 3 lines, found " + std::to_string(h));
        }
        ++line_no;
        if (h < 2 && starts_with_period_header(line)) {
            throw ParseError(source, line_no, "tracking header needs 3 lines, column titles found on line " +
                                                  std::to_string(line_no));
        }
    }
    split_csv(line, cells);
    if (cells.size() < 3 || cells[0] != "Period" || cells[1] != "Frame" || cells[2] != "Time [s]") {
        throw ParseError(source, line_no, "expected column titles 'Period,Frame,Time [s],...'");
    }
    const std::size_t coord_cols = cells.size() - 3;
    if (coord_cols % 2 != 0 || coord_cols < 2) {
        throw ParseError(source, line_no, "odd coordinate column count (" + std::to_string(coord_cols) + ")");
    }
    const std::size_t pairs = coord_cols / 2;
    if (cells[3 + 2 * (pairs - 1)] != "Ball") {
        throw ParseError(source, line_no, "last coordinate pair must be 'Ball'");
    }
    const std::string prefix(side_name(side));
    for (std::size_t i = 0; i + 1 < pairs; ++i) {
        const auto label = cells[3 + 2 * i];
        if (label.empty()) {
            throw ParseError(source, line_no, "empty player label in column " + std::to_string(4 + 2 * i));
        }
        out.players.push_back(prefix + std::string(label));
    }
    const std::size_t expected_cols = cells.size();
    const std::size_t n_players = out.players.size();

    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        split_csv(line, cells);
        if (cells.size() != expected_cols) {
            // A trailing comma on data rows is tolerated.
            if (!(cells.size() == expected_cols + 1 && cells.back().empty()) &&
                !(cells.size() + 1 == expected_cols)) {
                throw ParseError(source, line_no, "expected " + std::to_string(expected_cols) + " columns, found " +
                                                      std::to_string(cells.size()));
            }
        }
        const auto period = parse_int(cells[0]);
        const auto frame = parse_int(cells[1]);
        const auto time = parse_double(cells[2]);
        if (!period) {
            throw ParseError(source, line_no, "non-numeric period '" + std::string(cells[0]) + "'");
        }
        if (!frame) {
            throw ParseError(source, line_no, "non-numeric frame '" + std::string(cells[1]) + "'");
        }
        if (!time) {
            throw ParseError(source, line_no, "non-numeric time '" + std::string(cells[2]) + "'");
        }
        if (!out.frames.empty() && *frame <= out.frames.back().frame) {
            throw ParseError(source, line_no, "non-increasing frame " + std::to_string(*frame));
        }
        if (std::abs(*time - static_cast<double>(*frame) / sample_rate) > kTimeTolerance) {
            throw ParseError(source, line_no, "time " + std::string(cells[2]) + " does not match frame " +
                                                  std::to_string(*frame) + " at the sample rate");
        }
        TrackingFrame f;
        f.period = static_cast<int>(*period);
        f.frame = *frame;
        f.time_s = *time;
        f.positions.reserve(n_players);
        for (std::size_t i = 0; i < n_players; ++i) {
            f.positions.push_back(read_point(cells[3 + 2 * i], cells[4 + 2 * i], source, line_no));
        }
        const std::size_t bx = 3 + 2 * n_players;
        f.ball = bx + 1 < cells.size() ? read_point(cells[bx], cells[bx + 1], source, line_no) : std::nullopt;
        out.frames.push_back(std::move(f));
    }
    return out;
}

TrackingTable merge_tracking(const TrackingFragment& home, const TrackingFragment& away) {
    TrackingTable out;
    out.players = home.players;
    out.players.insert(out.players.end(), away.players.begin(), away.players.end());
    out.sides.assign(home.players.size(), home.side);
    out.sides.insert(out.sides.end(), away.players.size(), away.side);

    const auto n = std::min(home.frames.size(), away.frames.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto hf = home.frames[i].frame;
        const auto af = away.frames[i].frame;
        if (hf < af) {
            throw InvariantError("frame " + std::to_string(hf) + " missing in away stream");
        }
        if (af < hf) {
            throw InvariantError("frame " + std::to_string(af) + " missing in home stream");
        }
    }
    if (home.frames.size() > n) {
        throw InvariantError("frame " + std::to_string(home.frames[n].frame) + " missing in away stream");
    }
    if (away.frames.size() > n) {
        throw InvariantError("frame " + std::to_string(away.frames[n].frame) + " missing in home stream");
    }

    out.frames.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& h = home.frames[i];
        const auto& a = away.frames[i];
        TrackingFrame f;
        f.period = h.period;
        f.frame = h.frame;
        f.time_s = h.time_s;
        f.positions.reserve(out.players.size());
        f.positions.insert(f.positions.end(), h.positions.begin(), h.positions.end());
        f.positions.insert(f.positions.end(), a.positions.begin(), a.positions.end());
        if (h.ball && a.ball) {
            if (std::abs(h.ball->x - a.ball->x) > kTimeTolerance || std::abs(h.ball->y - a.ball->y) > kTimeTolerance) {
                throw InvariantError("ball position disagrees between streams at frame " + std::to_string(h.frame));
            }
        }
        f.ball = h.ball ? h.ball : a.ball;
        out.frames.push_back(std::move(f));
    }
    return out;
}

namespace {

constexpr std::string_view kEventHeader[] = {"Team",       "Type",          "Subtype",   "Period",
                                             "Start Frame", "Start Time [s]", "End Frame", "End Time [s]",
                                             "From",       "To",            "Start X",   "Start Y",
                                             "End X",      "End Y"};
constexpr std::size_t kEventCols = std::size(kEventHeader);

std::optional<std::string> optional_text(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::string(s);
}

} // namespace

std::vector<RawEventRecord> parse_events(std::istream& in, const std::string& source) {
    std::string line;
    std::vector<std::string_view> cells;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(source, 0, "empty event file");
    }
    ++line_no;
    split_csv(line, cells);
    if (cells.size() != kEventCols || !std::equal(cells.begin(), cells.end(), std::begin(kEventHeader))) {
        throw ParseError(source, line_no, "unexpected event header; expected 14 columns starting with 'Team,Type'");
    }

    std::vector<RawEventRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        split_csv(line, cells);
        if (cells.size() != kEventCols) {
            throw ParseError(source, line_no, "expected 14 columns, found " + std::to_string(cells.size()));
        }
        RawEventRecord r;
        const auto team = parse_side(cells[0]);
        if (!team) {
            throw ParseError(source, line_no, "unknown team '" + std::string(cells[0]) + "'");
        }
        r.team = *team;
        if (cells[1].empty()) {
            throw ParseError(source, line_no, "empty event type");
        }
        r.event_type = std::string(cells[1]);
        r.subtype = optional_text(cells[2]);

        const auto period = parse_int(cells[3]);
        const auto start_frame = parse_int(cells[4]);
        const auto start_time = parse_double(cells[5]);
        if (!period || !start_frame || !start_time) {
            throw ParseError(source, line_no, "non-numeric period, start frame or start time");
        }
        r.period = static_cast<int>(*period);
        r.start_frame = *start_frame;
        r.start_time_s = *start_time;
        // Blank end columns mean an instantaneous event.
        if (is_missing(cells[6]) && is_missing(cells[7])) {
            r.end_frame = r.start_frame;
            r.end_time_s = r.start_time_s;
        } else {
            const auto end_frame = parse_int(cells[6]);
            const auto end_time = parse_double(cells[7]);
            if (!end_frame || !end_time) {
                throw ParseError(source, line_no, "non-numeric end frame or end time");
            }
            r.end_frame = *end_frame;
            r.end_time_s = *end_time;
        }
        if (r.end_time_s < r.start_time_s) {
            throw ParseError(source, line_no, "end time before start time");
        }
        if (r.end_frame < r.start_frame) {
            throw ParseError(source, line_no, "end frame before start frame");
        }
        r.from_player = optional_text(cells[8]);
        r.to_player = optional_text(cells[9]);
        r.start_pos = read_point(cells[10], cells[11], source, line_no);
        r.end_pos = read_point(cells[12], cells[13], source, line_no);
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RawEventRecord& a, const RawEventRecord& b) { return a.start_time_s < b.start_time_s; });
    return out;
}

void write_events(std::ostream& out, const std::vector<RawEventRecord>& records) {
    for (std::size_t i = 0; i < kEventCols; ++i) {
        out << (i ? "," : "") << kEventHeader[i];
    }
    out << '\n';
    const auto coord = [](const MaybePoint& p, bool x) {
        return p ? detail::format_double(x ? p->x : p->y) : std::string("NaN");
    };
    for (const auto& r : records) {
        out << side_name(r.team) << ',' << r.event_type << ',' << r.subtype.value_or("") << ',' << r.period << ','
            << r.start_frame << ',' << detail::format_double(r.start_time_s) << ',' << r.end_frame << ','
            << detail::format_double(r.end_time_s) << ',' << r.from_player.value_or("") << ','
            << r.to_player.value_or("") << ',' << coord(r.start_pos, true) << ',' << coord(r.start_pos, false) << ','
            << coord(r.end_pos, true) << ',' << coord(r.end_pos, false) << '\n';
    }
}

std::optional<Side> MatchBundle::side_of(std::string_view label) const {
    for (const Side s : {Side::Home, Side::Away}) {
        if (roster(s).contains(std::string(label))) {
            return s;
        }
    }
    return std::nullopt;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return in;
}

void mirror_period_two(MatchBundle& b) {
    for (auto& f : b.tracking.frames) {
        if (f.period != 2) {
            continue;
        }
        for (auto& p : f.positions) {
            p = mirrored(p);
        }
        f.ball = mirrored(f.ball);
    }
    for (auto& e : b.events) {
        if (e.period == 2) {
            e.start_pos = mirrored(e.start_pos);
            e.end_pos = mirrored(e.end_pos);
        }
    }
}

} // namespace

MatchBundle load_match(const std::filesystem::path& tracking_home, const std::filesystem::path& tracking_away,
                       const std::filesystem::path& events, std::string match_id, const LoadOptions& options) {
    options.pitch.validate();
    MatchBundle b;
    b.match_id = std::move(match_id);
    b.pitch = options.pitch;

    auto home_in = open_input(tracking_home);
    auto away_in = open_input(tracking_away);
    auto events_in = open_input(events);

    const auto home = parse_tracking(home_in, Side::Home, options.sample_rate, tracking_home.string());
    const auto away = parse_tracking(away_in, Side::Away, options.sample_rate, tracking_away.string());
    try {
        b.tracking = merge_tracking(home, away);
    } catch (const InvariantError& e) {
        throw InvariantError(tracking_home.string() + " / " + tracking_away.string() + ": " + e.what());
    }
    b.events = parse_events(events_in, events.string());

    b.rosters[side_index(Side::Home)].insert(home.players.begin(), home.players.end());
    b.rosters[side_index(Side::Away)].insert(away.players.begin(), away.players.end());
    for (const auto& label : b.rosters[0]) {
        if (b.rosters[1].contains(label)) {
            throw InvariantError("player '" + label + "' appears in both rosters");
        }
    }

    // Rewrite provider labels ("Player7") to side-prefixed roster labels.
    const auto qualify = [&b](const std::string& raw, Side preferred) {
        for (const Side s : {preferred, other_side(preferred)}) {
            std::string label = std::string(side_name(s)) + raw;
            if (b.roster(s).contains(label)) {
                return label;
            }
        }
        std::string label = std::string(side_name(preferred)) + raw;
        b.warnings.push_back("player '" + raw + "' not in tracking headers; added to " +
                             std::string(side_name(preferred)) + " roster");
        b.rosters[side_index(preferred)].insert(label);
        return label;
    };
    for (auto& e : b.events) {
        if (e.from_player) {
            e.from_player = qualify(*e.from_player, e.team);
        }
        if (e.to_player) {
            e.to_player = qualify(*e.to_player, e.team);
        }
    }
    if (options.normalize_direction) {
        mirror_period_two(b);
    }
    return b;
}

} // namespace pitchlog
