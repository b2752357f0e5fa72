#include "pitchlog/error.hpp"
#include "pitchlog/pipeline.hpp"

#include "synthetic_match.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace pitchlog;

namespace {

const std::filesystem::path kFixtures = PITCHLOG_FIXTURES;

std::string as_json(const OcelLog& log) {
    std::ostringstream out;
    write_ocel_json(log, out);
    return out.str();
}

} // namespace

TEST(Pipeline, MetricaLayout) {
    const std::vector<int> games{1, 2};
    const auto in = metrica_inputs("/data", games);
    ASSERT_EQ(in.size(), 2u);
    EXPECT_EQ(in[0].match_id, "Sample_Game_1");
    EXPECT_EQ(in[1].tracking_away, "/data/Sample_Game_2/Sample_Game_2_RawTrackingData_Away_Team.csv");
    EXPECT_EQ(in[0].events, "/data/Sample_Game_1/Sample_Game_1_RawEventsData.csv");
}

TEST(Pipeline, ConfigValidation) {
    PipelineConfig c;
    EXPECT_NO_THROW(c.validate());
    c.sample_rate = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.min_dwell_s = -1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.jobs = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.grid.rows = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Pipeline, ParallelRunsMatchSequential) {
    synth::TempDir dir("pipe");
    std::vector<MatchInput> inputs;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        synth::Options o;
        o.seed = seed;
        o.period_s = 60;
        inputs.push_back(synth::write(synth::generate(o), dir.path(), "g" + std::to_string(seed)));
    }
    PipelineConfig seq;
    PipelineConfig par;
    par.jobs = 3;
    const auto a = run_pipeline(inputs, seq);
    const auto b = run_pipeline(inputs, par);
    EXPECT_EQ(as_json(a.log), as_json(b.log));
    ASSERT_EQ(b.matches.size(), 3u);
    EXPECT_EQ(b.matches[2].summary.prefix, "AC");
    EXPECT_TRUE(validate_log(b.log).empty());
}

TEST(Pipeline, BreakdownAddsUp) {
    const std::vector<MatchInput> in{
        {"mini", kFixtures / "mini_home.csv", kFixtures / "mini_away.csv", kFixtures / "mini_events.csv"}};
    const auto r = run_pipeline(in, PipelineConfig{});
    const auto& m = r.matches[0];
    EXPECT_EQ(m.raw_events, 11u);
    EXPECT_EQ(m.frames, 14u);
    EXPECT_EQ(m.game_events + m.movement_events, r.log.events.size());
    EXPECT_EQ(stats(r.log).movement_events, m.movement_events);
    EXPECT_TRUE(m.events.empty()); // moved into the log
}

TEST(Pipeline, FirstFailureInInputOrderIsReported) {
    std::vector<MatchInput> in{
        {"ok", kFixtures / "mini_home.csv", kFixtures / "mini_away.csv", kFixtures / "mini_events.csv"},
        {"bad1", kFixtures / "missing1.csv", kFixtures / "mini_away.csv", kFixtures / "mini_events.csv"},
        {"bad2", kFixtures / "missing2.csv", kFixtures / "mini_away.csv", kFixtures / "mini_events.csv"}};
    PipelineConfig cfg;
    cfg.jobs = 3;
    try {
        run_pipeline(in, cfg);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("missing1.csv"), std::string::npos);
    }
}

TEST(Pipeline, DwellReducesMovementEvents) {
    synth::TempDir dir("dwell");
    synth::Options o;
    o.period_s = 120;
    const std::vector<MatchInput> in{synth::write(synth::generate(o), dir.path(), "g")};
    PipelineConfig cfg;
    std::size_t previous = SIZE_MAX;
    for (const double dwell : {0.0, 0.2, 1.0, 3.0}) {
        cfg.min_dwell_s = dwell;
        const auto n = run_pipeline(in, cfg).matches[0].movement_events;
        EXPECT_LE(n, previous) << dwell;
        previous = n;
    }
}
