#pragma once
// Stage orchestration: each subcommand reads declared inputs, writes its
// stage directory under paths.output_dir and records a manifest with input
// digests, config echo and seed. A re-run whose manifest digest matches and
// whose outputs exist is skipped.

#include <string>
#include <vector>

#include "cflow/config.hpp"

namespace cflow {

// FNV-1a over the file bytes; throws MissingArtifact when unreadable.
uint64_t fnv1a_file(const std::string& path);
uint64_t fnv1a_bytes(const void* data, size_t len, uint64_t seed = 14695981039346656037ULL);

extern const std::vector<std::string> kStageNames;  // excludes "all"

// Runs a single stage (or "all" for the core chain). Throws ConfigError /
// MissingArtifact / std::runtime_error; returns true when work was done,
// false when the cached result was reused.
bool run_stage(const std::string& name, const PipelineConfig& cfg, bool force = false);

// Full command line: subcommand + options. Returns the process exit code
// (0 ok, 2 config error, 3 missing artifact, 1 runtime failure).
int run_cli(const std::vector<std::string>& args);

}  // namespace cflow
