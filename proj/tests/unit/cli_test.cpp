#include "pitchlog/cli.hpp"
#include "pitchlog/error.hpp"

#include "output_checks.hpp"
#include "synthetic_match.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace pitchlog;

namespace {

const std::filesystem::path kFixtures = PITCHLOG_FIXTURES;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string mini_match() {
    return "mini=" + (kFixtures / "mini_home.csv").string() + "," + (kFixtures / "mini_away.csv").string() + "," +
           (kFixtures / "mini_events.csv").string();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string stat_line(const std::string& stats, const std::string& key) {
    std::istringstream in(stats);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "\t", 0) == 0) {
            return line.substr(key.size() + 1);
        }
    }
    return {};
}

} // namespace

TEST(Cli, ConvertWritesLogAndSummary) {
    synth::TempDir dir("cli");
    const auto out1 = (dir.path() / "a.json").string();
    const auto out2 = (dir.path() / "b.json").string();
    const auto r = run({"convert", "--match", mini_match(), "-o", out1});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(stat_line(r.out, "possessions"), "4");
    EXPECT_EQ(stat_line(r.out, "objects"), "36");
    EXPECT_NE(r.out.find("match\tmini\tprefix=AA\traw_events=11"), std::string::npos) << r.out;
    ASSERT_EQ(run({"convert", "--match", mini_match(), "-o", out2, "--jobs", "2"}).code, 0);
    EXPECT_EQ(slurp(out1), slurp(out2));

    const auto s = run({"stats", out1});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(stat_line(s.out, "events"), stat_line(r.out, "events"));
}

TEST(Cli, MissingInputNamesPath) {
    synth::TempDir dir("cli");
    const auto r = run({"convert", "--match", "x=/no/such/home.csv,/no/away.csv,/no/events.csv", "-o",
                        (dir.path() / "o.json").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("/no/such/home.csv"), std::string::npos);
}

TEST(Cli, InvariantViolationExitsTwo) {
    synth::TempDir dir("cli");
    // away stream lacks its last frame
    std::ifstream src(kFixtures / "mini_away.csv");
    std::ofstream dst(dir.path() / "away.csv");
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(src, line)) {
        lines.push_back(line);
    }
    lines.pop_back();
    for (const auto& l : lines) {
        dst << l << '\n';
    }
    dst.close();
    const auto spec = "m=" + (kFixtures / "mini_home.csv").string() + "," + (dir.path() / "away.csv").string() + "," +
                      (kFixtures / "mini_events.csv").string();
    const auto r = run({"convert", "--match", spec, "-o", (dir.path() / "o.json").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("frame 14 missing in away stream"), std::string::npos) << r.err;
}

TEST(Cli, StatsOnEmptyFile) {
    synth::TempDir dir("cli");
    const auto empty = dir.path() / "empty.json";
    std::ofstream(empty).close();
    const auto r = run({"stats", empty.string()});
    EXPECT_EQ(r.code, 0);
    for (const char* k : {"events", "objects", "possessions", "matches", "movement_events"}) {
        EXPECT_EQ(stat_line(r.out, k), "0") << k;
    }
    std::ofstream(empty) << R"({"objectTypes":[],"eventTypes":[],"objects":[],"events":[]})";
    EXPECT_EQ(stat_line(run({"stats", empty.string()}).out, "events"), "0");
    EXPECT_EQ(run({"stats", (dir.path() / "nope.json").string()}).code, 1);
}

TEST(Cli, Possessions) {
    const auto r = run({"possessions", "--match", mini_match()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "id\tteam\tstart_s\tend_s\toutcome");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        rows.push_back(line);
    }
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "AA001\tHome\t0.04\t0.24\tlost");
    EXPECT_EQ(rows[1], "AA002\tAway\t0.24\t0.32\tgoal");
}

TEST(Cli, DfgFromConvertedLog) {
    synth::TempDir dir("cli");
    const auto log = (dir.path() / "log.json").string();
    ASSERT_EQ(run({"convert", "--match", mini_match(), "-o", log}).code, 0);
    const auto r = run({"dfg", "--ocel", log, "--types", "ball,player"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(checks::check_dot(r.out).ok);

    const auto dot = (dir.path() / "g.dot").string();
    const auto f = run({"dfg", "--ocel", log, "--types", "ball", "--where", "possession.outcome=goal", "--where",
                        "possession.team=Away", "-o", dot});
    ASSERT_EQ(f.code, 0) << f.err;
    const auto text = slurp(dot);
    EXPECT_TRUE(checks::check_dot(text).ok);
    EXPECT_NE(text.find("\"Recovery\" -> \"Shot\""), std::string::npos) << text;
    EXPECT_EQ(text.find("\"Pass\""), std::string::npos) << text; // home passes filtered out

    const auto bad = run({"dfg", "--ocel", log, "--where", "possession.colour=red"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("possession.colour"), std::string::npos);
    EXPECT_EQ(run({"dfg", "--ocel", log, "--where", "nonsense"}).code, 1);
}

TEST(Cli, Spatial) {
    synth::TempDir dir("cli");
    const auto svg = (dir.path() / "p.svg").string();
    const auto r = run({"spatial", "--match", mini_match(), "--possession", "AA001", "--types", "ball,player", "-o", svg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(checks::xml_error(slurp(svg)), "");
    const auto missing = run({"spatial", "--match", mini_match(), "--possession", "AA999"});
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("AA999"), std::string::npos);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    synth::TempDir dir("cli");
    const auto cfg = dir.path() / "run.json";
    std::ofstream(cfg) << R"({"grid_cols": 3, "grid_rows": 2, "matches": [{"id": "mini", "home": ")"
                       << (kFixtures / "mini_home.csv").string() << R"(", "away": ")"
                       << (kFixtures / "mini_away.csv").string() << R"(", "events": ")"
                       << (kFixtures / "mini_events.csv").string() << R"("}]})";
    const auto out = (dir.path() / "o.json").string();
    const auto from_file = run({"convert", "--config", cfg.string(), "-o", out});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_EQ(stat_line(from_file.out, "object_type.grid_position"), "6");
    const auto flag_wins = run({"convert", "--config", cfg.string(), "--grid-cols", "4", "-o", out});
    ASSERT_EQ(flag_wins.code, 0) << flag_wins.err;
    EXPECT_EQ(stat_line(flag_wins.out, "object_type.grid_position"), "8");
    const auto defaults = run({"convert", "--match", mini_match(), "-o", out});
    EXPECT_EQ(stat_line(defaults.out, "object_type.grid_position"), "24");

    std::ofstream(cfg) << R"({"grid_colz": 3})";
    EXPECT_EQ(run({"convert", "--config", cfg.string(), "-o", out}).code, 1);
}

TEST(Cli, RejectsNonPositiveNumbers) {
    synth::TempDir dir("cli");
    const auto out = (dir.path() / "o.json").string();
    EXPECT_EQ(run({"convert", "--match", mini_match(), "--grid-cols", "0", "-o", out}).code, 1);
    EXPECT_EQ(run({"convert", "--match", mini_match(), "--sample-rate", "-25", "-o", out}).code, 1);
    EXPECT_EQ(run({"convert", "--match", mini_match(), "--scope", "local", "-o", out}).code, 1);
    EXPECT_EQ(run({"convert", "--match", "only,two", "-o", out}).code, 1);
    EXPECT_EQ(run({"convert", "-o", out}).code, 1); // no inputs
    EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, HelpDocumentsFlagsAndDefaults) {
    for (const char* sub : {"convert", "stats", "possessions", "dfg", "spatial"}) {
        const auto r = run({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_FALSE(r.out.empty()) << sub;
    }
    const auto convert = run({"convert", "--help"}).out;
    for (const char* flag : {"--grid-cols", "--grid-rows", "--pitch-length", "--pitch-width", "--sample-rate",
                             "--scope", "--min-dwell", "--normalize-direction", "--activity-map", "--jobs",
                             "--config", "--match", "--metrica-dir", "--output"}) {
        EXPECT_NE(convert.find(flag), std::string::npos) << flag;
    }
    EXPECT_NE(convert.find("105"), std::string::npos);
    EXPECT_NE(convert.find("global"), std::string::npos);
    const auto dfg = run({"dfg", "--help"}).out;
    EXPECT_NE(dfg.find("--where"), std::string::npos);
    EXPECT_NE(dfg.find("--types"), std::string::npos);
    EXPECT_NE(run({"spatial", "--help"}).out.find("--team-only"), std::string::npos);
}
