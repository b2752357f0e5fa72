// Acceptance suite. `acceptance N` checks one criterion and exits 0 (pass),
// 1 (fail) or 77 (skipped: the inputs it needs are not present). Without an
// argument every criterion runs and the worst outcome is returned.
//
// Criteria that need the public Metrica sample games look for them under
// $METRICA_DATA_DIR or data/metrica in the source tree.

#include "pitchlog/mining.hpp"
#include "pitchlog/pipeline.hpp"
#include "pitchlog/render.hpp"

#include "dfg_oracle.hpp"
#include "output_checks.hpp"
#include "synthetic_match.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

using namespace pitchlog;

namespace {

// Tolerances and targets.
constexpr double kPossessionTarget = 747;
constexpr double kObjectTarget = 813;
constexpr double kEventTarget = 37358;
constexpr double kPossessionTol = 0.10;
constexpr double kObjectTol = 0.10;
constexpr double kEventTol = 0.15;
constexpr double kRuntimeLimitS = 60.0;
constexpr int kGridPoints = 10000;
constexpr int kGeneratedMatches = 12;
constexpr int kRandomMicroLogs = 100;
constexpr double kDistanceSlackM = 1e-6;

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Verdict::Skip, std::move(d)}; }

void info(const std::string& s) { fmt::print("  {}\n", s); }

std::optional<std::filesystem::path> metrica_dir() {
    std::filesystem::path dir = PITCHLOG_DEFAULT_DATA_DIR;
    if (const char* env = std::getenv("METRICA_DATA_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    const std::vector<int> games{1, 2};
    for (const auto& in : metrica_inputs(dir, games)) {
        for (const auto& p : {in.tracking_home, in.tracking_away, in.events}) {
            if (!std::filesystem::is_regular_file(p)) {
                return std::nullopt;
            }
        }
    }
    return dir;
}

std::string missing_data_note() {
    return "Metrica sample games not found (set METRICA_DATA_DIR or place them under data/metrica)";
}

struct RealRun {
    PipelineResult result;
    double seconds = 0.0;
};

const RealRun& real_run(const std::filesystem::path& dir) {
    static std::optional<RealRun> cached;
    if (!cached) {
        const std::vector<int> games{1, 2};
        const auto t0 = std::chrono::steady_clock::now();
        auto r = run_pipeline(metrica_inputs(dir, games), PipelineConfig{});
        const auto t1 = std::chrono::steady_clock::now();
        cached = RealRun{std::move(r), std::chrono::duration<double>(t1 - t0).count()};
    }
    return *cached;
}

// A fixed family of synthetic matches shared by the generated-log criteria.
struct Generated {
    synth::TempDir dir{"acceptance"};
    std::vector<synth::Match> matches;
    std::vector<MatchInput> inputs;
};

const Generated& generated() {
    static Generated g;
    static const bool filled = [] {
        for (int i = 0; i < kGeneratedMatches; ++i) {
            synth::Options o;
            o.seed = 1000 + static_cast<std::uint64_t>(i);
            o.period_s = 240 + 30 * (i % 4);
            o.dropout = i % 3 != 2;
            g.matches.push_back(synth::generate(o));
            g.inputs.push_back(synth::write(g.matches.back(), g.dir.path(), fmt::format("gen{}", i + 1)));
        }
        return true;
    }();
    (void)filled;
    return g;
}

const OcelLog& generated_log() {
    static const OcelLog log = run_pipeline(generated().inputs, PipelineConfig{}).log;
    return log;
}

bool within(double got, double target, double tol) { return std::abs(got - target) <= tol * target; }

// ---------------------------------------------------------------------------

Outcome criterion1() {
    const auto dir = metrica_dir();
    if (!dir) {
        // Runtime only, on a synthetic pair of full-length matches.
        synth::TempDir tmp("c1");
        std::vector<MatchInput> in;
        for (int i = 0; i < 2; ++i) {
            synth::Options o;
            o.seed = 7 + static_cast<std::uint64_t>(i);
            o.period_s = 45 * 60;
            in.push_back(synth::write(synth::generate(o), tmp.path(), fmt::format("full{}", i + 1)));
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = run_pipeline(in, PipelineConfig{});
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto st = stats(r.log);
        info(fmt::format("synthetic 2x90 min: {} events, {} objects, {} possessions in {:.2f} s (not a calibration)",
                         st.events, st.objects, st.possessions, s));
        return skip(missing_data_note());
    }
    const auto& run = real_run(*dir);
    const auto st = stats(run.result.log);
    for (const auto& m : run.result.matches) {
        info(fmt::format("{}: raw_events={} frames={} game_events={} movement_events={} possessions={}",
                         m.summary.match_id, m.raw_events, m.frames, m.game_events, m.movement_events,
                         m.summary.spans.size()));
    }
    for (const auto& [type, n] : st.per_object_type) {
        info(fmt::format("objects of type {}: {}", type, n));
    }
    const bool ok = within(static_cast<double>(st.possessions), kPossessionTarget, kPossessionTol) &&
                    within(static_cast<double>(st.objects), kObjectTarget, kObjectTol) &&
                    within(static_cast<double>(st.events), kEventTarget, kEventTol) && run.seconds < kRuntimeLimitS;
    const auto d = fmt::format("possessions {} (747±10%), objects {} (813±10%), events {} (37358±15%), {:.2f} s",
                               st.possessions, st.objects, st.events, run.seconds);
    return ok ? pass(d) : fail(d);
}

// Cell found by testing every rectangle; the top row and right column are closed.
std::optional<GridCell> scan_cell(double x, double y, const GridSpec& g) {
    std::optional<GridCell> hit;
    int hits = 0;
    const double up = 1.0 - y;
    for (int c = 0; c < g.cols; ++c) {
        for (int r = 0; r < g.rows; ++r) {
            const double x0 = static_cast<double>(c) / g.cols;
            const double x1 = static_cast<double>(c + 1) / g.cols;
            const double y0 = static_cast<double>(r) / g.rows;
            const double y1 = static_cast<double>(r + 1) / g.rows;
            const bool in_x = x >= x0 && (x < x1 || (c == g.cols - 1 && x <= x1));
            const bool in_y = up >= y0 && (up < y1 || (r == g.rows - 1 && up <= y1));
            if (in_x && in_y) {
                hit = GridCell{c, r};
                ++hits;
            }
        }
    }
    return hits == 1 ? hit : std::nullopt;
}

Outcome criterion2() {
    const GridSpec g;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        const auto want = scan_cell(x, y, g);
        const auto got = cell_of(NormalizedPoint{x, y}, g);
        if (!want || want->col != got.col || want->row != got.row) {
            ++mismatches;
        }
    }
    const std::vector<std::pair<NormalizedPoint, std::string>> corners{
        {{0, 1}, "A1"}, {{0, 0}, "A4"}, {{1, 1}, "F1"}, {{1, 0}, "F4"}};
    int corner_errors = 0;
    for (const auto& [p, label] : corners) {
        if (cell_label(cell_of(p, g)) != label) {
            ++corner_errors;
        }
    }
    const auto d = fmt::format("{} random points, {} mismatches; corner errors {}", kGridPoints, mismatches,
                               corner_errors);
    return mismatches == 0 && corner_errors == 0 ? pass(d) : fail(d);
}

Outcome criterion3() {
    const ControlRules rules;
    std::size_t spans_total = 0;
    std::size_t controlling = 0;
    std::vector<std::string> problems;
    for (std::size_t m = 0; m < generated().matches.size(); ++m) {
        const auto& records = generated().matches[m].records;
        const auto spans = segment_possessions(records, match_prefix(m), rules);
        spans_total += spans.size();
        for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
            if (spans[i].period == spans[i + 1].period && spans[i].team == spans[i + 1].team) {
                problems.push_back(fmt::format("{} and {} share a team", spans[i].id, spans[i + 1].id));
            }
        }
        for (const auto& e : records) {
            if (!rules.is_controlling(e.event_type)) {
                continue;
            }
            ++controlling;
            int containing = 0;
            for (const auto& s : spans) {
                const bool inside = s.period == e.period && e.start_time_s >= s.start_time_s &&
                                    (e.start_time_s < s.end_time_s ||
                                     (s.last_in_period && e.start_time_s <= s.end_time_s));
                containing += inside ? 1 : 0;
            }
            if (containing != 1) {
                problems.push_back(fmt::format("{} at {:.2f}s lies in {} spans", e.event_type, e.start_time_s,
                                               containing));
            }
        }
        std::size_t goal_spans = 0;
        std::size_t goal_shots = 0;
        for (const auto& s : spans) {
            goal_spans += s.outcome == PossessionOutcome::Goal ? 1 : 0;
        }
        for (const auto& e : records) {
            goal_shots += e.event_type == rules.shot_type && is_goal_subtype(e.subtype) ? 1 : 0;
        }
        if (goal_spans != goal_shots) {
            problems.push_back(fmt::format("match {}: {} goal spans vs {} goal shots", m + 1, goal_spans, goal_shots));
        }
    }
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) {
        info(problems[i]);
    }
    const auto d = fmt::format("{} generated matches, {} spans, {} controlling events, {} violations",
                               generated().matches.size(), spans_total, controlling, problems.size());
    return problems.empty() ? pass(d) : fail(d);
}

Outcome criterion4() {
    const auto& log = generated_log();
    const auto issues = validate_log(log);
    for (std::size_t i = 0; i < issues.size() && i < 10; ++i) {
        info(issues[i]);
    }
    std::stringstream buf;
    write_ocel_json(log, buf);
    const auto text = buf.str();
    const auto back = read_ocel_json(buf, "round-trip");
    std::stringstream again;
    write_ocel_json(back, again);
    const bool round_trip = back == log && again.str() == text;

    std::map<std::string, std::string> type_of;
    for (const auto& o : log.objects) {
        type_of[o.id] = o.type;
    }
    std::size_t ball_events = 0;
    std::size_t ball_ok = 0;
    std::size_t pos_events = 0;
    std::size_t pos_ok = 0;
    for (const auto& e : log.events) {
        std::map<std::string, int> per_type;
        for (const auto& r : e.relations) {
            ++per_type[type_of[r.object_id]];
        }
        const auto cls = attr_get<std::string>(e.attrs, "event_class");
        if (cls == event_class_name(EventClass::Ball)) {
            ++ball_events;
            ball_ok += per_type[std::string(object_type::kBall)] >= 1 ? 1 : 0;
        } else if (cls == event_class_name(EventClass::PositionBased)) {
            ++pos_events;
            pos_ok += per_type[std::string(object_type::kPlayer)] == 1 &&
                              per_type[std::string(object_type::kGridPosition)] == 2
                          ? 1
                          : 0;
        }
    }
    const auto d = fmt::format("{} events; {} validation issues; round-trip {}; ball events {}/{} with ball; "
                               "position events {}/{} with 1 player + 2 cells",
                               log.events.size(), issues.size(), round_trip ? "identical" : "DIFFERS", ball_ok,
                               ball_events, pos_ok, pos_events);
    const bool ok = issues.empty() && round_trip && ball_events > 0 && ball_ok == ball_events && pos_events > 0 &&
                    pos_ok == pos_events;
    return ok ? pass(d) : fail(d);
}

Outcome criterion5() {
    const std::set<std::string> all{"x", "y"};
    std::size_t mismatches = 0;
    const auto visited = oracle::for_each_micro_log(6, 4, [&](const OcelLog& log) {
        const auto diff = oracle::compare(discover_ocdfg(log, all), oracle::trace_pair_count(log, all));
        if (!diff.empty()) {
            if (mismatches < 5) {
                info(diff);
            }
            ++mismatches;
        }
    });
    std::mt19937_64 rng(5);
    std::size_t random_mismatches = 0;
    for (int i = 0; i < kRandomMicroLogs; ++i) {
        const auto log = oracle::random_micro_log(rng);
        if (!oracle::compare(discover_ocdfg(log, all), oracle::trace_pair_count(log, all)).empty()) {
            ++random_mismatches;
        }
    }
    const auto d = fmt::format("{} exhaustive micro-logs, {} mismatches; {} random, {} mismatches", visited,
                               mismatches, kRandomMicroLogs, random_mismatches);
    return mismatches == 0 && random_mismatches == 0 ? pass(d) : fail(d);
}

struct Qualitative {
    bool set_piece_to_pass = true;
    std::vector<std::string> set_piece_targets;
    std::optional<std::string> max_self_loop;
};

Qualitative qualitative(const OcelLog& log) {
    Qualitative q;
    LogFilter f;
    f.predicates = {AttrPredicate::parse("possession.team=Home"), AttrPredicate::parse("possession.outcome=goal")};
    const auto ball = discover_ocdfg(filter_log(log, f), {std::string(object_type::kBall)});
    if (const auto it = ball.types.find(std::string(object_type::kBall)); it != ball.types.end()) {
        for (const auto& [edge, n] : it->second.edges) {
            if (edge.first == "Set piece") {
                q.set_piece_targets.push_back(edge.second);
                q.set_piece_to_pass = q.set_piece_to_pass && edge.second == "Pass";
            }
        }
    }
    std::set<std::string> types;
    for (const auto& t : log.object_types) {
        types.insert(t.name);
    }
    const auto all = discover_ocdfg(log, types);
    std::size_t best = 0;
    std::map<std::string, std::size_t> loops;
    for (const auto& [type, d] : all.types) {
        for (const auto& [edge, n] : d.edges) {
            if (edge.first == edge.second) {
                loops[edge.first] += n;
            }
        }
    }
    for (const auto& [activity, n] : loops) {
        if (n > best) {
            best = n;
            q.max_self_loop = activity;
        }
    }
    return q;
}

Outcome criterion6() {
    const auto dir = metrica_dir();
    if (!dir) {
        const auto q = qualitative(generated_log());
        info(fmt::format("synthetic logs (structure is built into the generator, not evidence): set piece -> pass "
                         "only: {}; max self-loop: {}",
                         q.set_piece_to_pass, q.max_self_loop.value_or("none")));
        return skip(missing_data_note());
    }
    const auto q = qualitative(real_run(*dir).result.log);
    std::string targets;
    for (const auto& t : q.set_piece_targets) {
        targets += (targets.empty() ? "" : ", ") + t;
    }
    const bool ok = q.set_piece_to_pass && !q.set_piece_targets.empty() &&
                    q.max_self_loop == std::string(kMovementActivity);
    const auto d = fmt::format("home goal possessions: Set piece -> {{{}}}; max self-loop: {}", targets,
                               q.max_self_loop.value_or("none"));
    return ok ? pass(d) : fail(d);
}

// True when `want` occurs in `cells` as a subsequence.
bool visits_in_order(const std::vector<std::string>& cells, const std::vector<std::string>& want) {
    std::size_t k = 0;
    for (const auto& c : cells) {
        if (k < want.size() && c == want[k]) {
            ++k;
        }
    }
    return k == want.size();
}

Outcome criterion7() {
    // Rendering well-formedness and stability, on generated data.
    const auto& log = generated_log();
    std::vector<std::string> problems;
    std::set<std::string> types;
    for (const auto& t : log.object_types) {
        types.insert(t.name);
    }
    for (const auto& sel : {std::set<std::string>{"ball"}, std::set<std::string>{"ball", "player"}, types}) {
        const auto dot = dfg_to_dot(discover_ocdfg(log, sel));
        const auto check = checks::check_dot(dot);
        if (!check.ok) {
            problems.push_back("DOT: " + check.error);
        }
        if (dot != dfg_to_dot(discover_ocdfg(log, sel))) {
            problems.push_back("DOT output differs between runs");
        }
    }
    std::size_t svgs = 0;
    for (const auto& o : log.objects) {
        if (o.type != object_type::kPossession || svgs >= 40) {
            continue;
        }
        const auto svg = spatial_instance_svg(log, o.id, {"ball", "player"});
        if (const auto err = checks::xml_error(svg); !err.empty()) {
            problems.push_back(o.id + ": " + err);
        }
        if (svg != spatial_instance_svg(log, o.id, {"ball", "player"})) {
            problems.push_back(o.id + ": SVG differs between runs");
        }
        ++svgs;
    }
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) {
        info(problems[i]);
    }
    info(fmt::format("3 DOT graphs and {} SVG maps from generated logs: {} problems", svgs, problems.size()));
    if (!problems.empty()) {
        return fail("rendered output is malformed or unstable");
    }

    const auto dir = metrica_dir();
    if (!dir) {
        return skip("ball trace of AA156 needs the real data; " + missing_data_note());
    }
    const auto traces = instance_traces(real_run(*dir).result.log, "AA156", {"ball"});
    std::vector<std::string> cells;
    for (const auto& t : traces) {
        for (const auto& e : t.events) {
            cells.push_back(cell_label(e.cell));
        }
    }
    std::string path;
    for (const auto& c : cells) {
        path += (path.empty() ? "" : " ") + c;
    }
    const bool ok = visits_in_order(cells, {"B3", "B4", "B3", "E1", "F2"});
    const auto d = fmt::format("AA156 ball trace: {}", path);
    return ok ? pass(d) : fail(d);
}

Outcome criterion8() {
    const GridSpec spec;
    std::size_t players = 0;
    std::size_t pairs = 0;
    std::vector<std::string> problems;
    for (std::size_t m = 0; m < generated().inputs.size(); ++m) {
        const auto& in = generated().inputs[m];
        const auto bundle = load_match(in.tracking_home, in.tracking_away, in.events, in.match_id);
        const auto events = detect_movement_events(bundle.tracking, spec, MovementOptions{});
        std::map<std::string, std::vector<const ActivityEvent*>> by_player;
        for (const auto& e : events) {
            by_player[e.players.front().label].push_back(&e);
        }
        for (const auto& [label, chain] : by_player) {
            ++players;
            const auto idx = *bundle.tracking.index_of(label);
            std::vector<MaybePoint> track;
            std::vector<std::int64_t> gaps; // frames where the player is untracked
            for (const auto& f : bundle.tracking.frames) {
                track.push_back(f.positions[idx]);
                if (!f.positions[idx]) {
                    gaps.push_back(f.frame);
                }
            }
            double total = 0.0;
            for (std::size_t k = 0; k < chain.size(); ++k) {
                total += attr_get<double>(chain[k]->attrs, "distance_m").value_or(0.0);
                if (k == 0 || chain[k - 1]->period != chain[k]->period) {
                    continue;
                }
                const auto gap = std::lower_bound(gaps.begin(), gaps.end(), chain[k - 1]->frame);
                if (gap != gaps.end() && *gap < chain[k]->frame) {
                    continue;
                }
                ++pairs;
                const auto to = attr_get<std::string>(chain[k - 1]->attrs, "to_cell");
                const auto from = attr_get<std::string>(chain[k]->attrs, "from_cell");
                if (!to || to != from) {
                    problems.push_back(fmt::format("{} {}: {} then {}", in.match_id, label, to.value_or("?"),
                                                   from.value_or("?")));
                }
            }
            if (m == 0 && total > path_length(track, spec) + kDistanceSlackM) {
                problems.push_back(fmt::format("{} {}: event distance {:.3f} exceeds path {:.3f}", in.match_id, label,
                                               total, path_length(track, spec)));
            }
        }
    }
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) {
        info(problems[i]);
    }
    const auto d = fmt::format("{} player chains, {} consecutive pairs checked, {} violations", players, pairs,
                               problems.size());
    return problems.empty() ? pass(d) : fail(d);
}

int report(int n, const Outcome& o) {
    static constexpr const char* kNames[] = {"PASS", "FAIL", "SKIP"};
    fmt::print("{} criterion {}: {}\n", kNames[static_cast<int>(o.verdict)], n, o.detail);
    std::fflush(stdout);
    switch (o.verdict) {
    case Verdict::Pass:
        return 0;
    case Verdict::Fail:
        return 1;
    case Verdict::Skip:
        return 77;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8};
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            fmt::print(stderr, "usage: acceptance [1-{}]\n", criteria.size());
            return 2;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
            which.push_back(n);
        }
    }
    int worst = 0;
    for (const int n : which) {
        int code = 1;
        try {
            code = report(n, criteria[static_cast<std::size_t>(n - 1)]());
        } catch (const std::exception& e) {
            code = report(n, fail(fmt::format("exception: {}", e.what())));
        }
        if (code == 1 || (code == 77 && worst == 0)) {
            worst = code;
        }
    }
    return worst;
}
