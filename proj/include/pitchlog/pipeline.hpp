#pragma once

#include "pitchlog/activity_table.hpp"
#include "pitchlog/derive.hpp"
#include "pitchlog/ingest.hpp"
#include "pitchlog/ocel.hpp"
#include "pitchlog/possession.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pitchlog {

struct MatchInput {
    std::string match_id;
    std::filesystem::path tracking_home;
    std::filesystem::path tracking_away;
    std::filesystem::path events;
};

/// Inputs for games of the public Metrica sample-data layout:
/// <root>/Sample_Game_N/Sample_Game_N_RawTrackingData_{Home,Away}_Team.csv and
/// <root>/Sample_Game_N/Sample_Game_N_RawEventsData.csv.
std::vector<MatchInput> metrica_inputs(const std::filesystem::path& root, std::span<const int> games);

/// Every tunable of a conversion run. Defaults reproduce the reference setup:
/// 6x4 grid, 105x68 m pitch, 25 Hz, global identities, no dwell filter.
struct PipelineConfig {
    GridSpec grid{};
    double sample_rate = 25.0;
    IdentityScope scope = IdentityScope::Global;
    double min_dwell_s = 0.0;
    bool normalize_direction = false;
    std::optional<std::filesystem::path> activity_map;
    ControlRules control{};
    int jobs = 1;

    /// Throws ConfigError for non-positive values.
    void validate() const;
};

struct MatchResult {
    MatchSummary summary;
    std::vector<ActivityEvent> events; // merged and enriched
    std::vector<std::string> warnings;
    std::size_t raw_events = 0;
    std::size_t frames = 0;
    std::size_t game_events = 0;
    std::size_t movement_events = 0;
};

/// Full per-match chain: load, segment, decompose, detect movement, merge, enrich.
MatchResult process_match(const MatchInput& input, std::size_t match_index, const PipelineConfig& config,
                          const ActivityTable& table);

struct PipelineResult {
    OcelLog log;
    std::vector<MatchResult> matches; // events moved into the log; summaries kept
};

/// Processes matches (up to config.jobs at a time) and assembles one log.
PipelineResult run_pipeline(std::span<const MatchInput> inputs, const PipelineConfig& config);

} // namespace pitchlog
