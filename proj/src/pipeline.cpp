#include "pitchlog/pipeline.hpp"

#include "pitchlog/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace pitchlog {

std::vector<MatchInput> metrica_inputs(const std::filesystem::path& root, std::span<const int> games) {
    std::vector<MatchInput> out;
    for (const int g : games) {
        const std::string name = "Sample_Game_" + std::to_string(g);
        const auto dir = root / name;
        out.push_back({name, dir / (name + "_RawTrackingData_Home_Team.csv"),
                       dir / (name + "_RawTrackingData_Away_Team.csv"), dir / (name + "_RawEventsData.csv")});
    }
    return out;
}

void PipelineConfig::validate() const {
    grid.validate();
    if (!(sample_rate > 0.0)) {
        throw ConfigError("sample rate must be positive");
    }
    if (!(min_dwell_s >= 0.0)) {
        throw ConfigError("minimum dwell must be zero or positive");
    }
    if (jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
}

MatchResult process_match(const MatchInput& input, std::size_t match_index, const PipelineConfig& config,
                          const ActivityTable& table) {
    LoadOptions load;
    load.sample_rate = config.sample_rate;
    load.normalize_direction = config.normalize_direction;
    load.pitch = config.grid;
    auto bundle = load_match(input.tracking_home, input.tracking_away, input.events, input.match_id, load);

    MatchResult r;
    r.warnings = std::move(bundle.warnings);
    r.raw_events = bundle.events.size();
    r.frames = bundle.tracking.frames.size();
    r.summary.match_id = bundle.match_id;
    r.summary.prefix = match_prefix(match_index);
    r.summary.rosters = bundle.rosters;
    r.summary.epoch = default_match_epoch(match_index);
    r.summary.spans = segment_possessions(bundle.events, r.summary.prefix, config.control);

    auto game = decompose_events(bundle.events, config.grid, table, &bundle.tracking);
    auto movement = detect_movement_events(bundle.tracking, config.grid, MovementOptions{config.min_dwell_s});
    r.game_events = game.size();
    r.movement_events = movement.size();
    auto merged = merge_streams(std::move(game), std::move(movement), r.summary.prefix);
    r.events = enrich(std::move(merged), r.summary.spans, bundle.rosters);
    return r;
}

PipelineResult run_pipeline(std::span<const MatchInput> inputs, const PipelineConfig& config) {
    config.validate();
    const auto table = config.activity_map ? ActivityTable::load(*config.activity_map) : ActivityTable::defaults();

    PipelineResult result;
    result.matches.resize(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                result.matches[i] = process_match(inputs[i], i, config, table);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), inputs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    // Report the first failure in input order so reruns fail identically.
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<MatchSummary> summaries;
    std::vector<std::vector<ActivityEvent>> streams;
    for (auto& m : result.matches) {
        summaries.push_back(m.summary);
        streams.push_back(std::move(m.events));
        m.events.clear();
    }
    auto objects = build_objects(summaries, config.scope, config.grid);
    result.log = build_log(summaries, streams, std::move(objects), config.scope, config.grid);
    return result;
}

} // namespace pitchlog
