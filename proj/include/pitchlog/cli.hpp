#pragma once

#include "pitchlog/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pitchlog {

/// Everything a run needs: the matches and the pipeline tunables.
struct RunConfig {
    std::vector<MatchInput> matches;
    PipelineConfig pipeline;
};

/// Reads a JSON run configuration on top of `base`. Keys: matches
/// [{id, home, away, events}], metrica_dir, games, grid_cols, grid_rows,
/// pitch_length_m, pitch_width_m, sample_rate, scope, min_dwell_s,
/// normalize_direction, activity_map, controlling_types, jobs. Relative paths
/// resolve against the file's directory. Throws ConfigError.
RunConfig apply_config_file(RunConfig base, const std::filesystem::path& path);

/// "[ID=]HOME,AWAY,EVENTS"; `fallback_id` is used when no ID is given.
MatchInput parse_match_spec(const std::string& spec, const std::string& fallback_id);

/// Entry point of the `pitchlog` binary. Exit codes: 0 success, 1 parse / IO /
/// lookup / usage errors, 2 invariant violations.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pitchlog
