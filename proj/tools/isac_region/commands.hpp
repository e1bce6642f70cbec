#pragma once

#include "spec_file.hpp"

#include "isac/parallel.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace isac::cli {

struct OutputFile {
    std::string name;
    std::string content;
};

/// Files produced by one subcommand. `failure` is non-empty when the run
/// finished but a numerical check did not hold (exit code 1).
struct CommandOutput {
    std::vector<OutputFile> files;
    std::string failure;
};

/// p_db,design,op,std_err,reference  +  op.json (diversity fits).
CommandOutput cmd_op(const ExperimentSpec& spec, const RunOptions& opts);
/// p_db,design,ecr,std_err,closed_form,asymptote  +  ecr.json (slopes).
CommandOutput cmd_ecr(const ExperimentSpec& spec, const RunOptions& opts);
/// p_db,design,sr,asymptote  +  sr.json (slopes).
CommandOutput cmd_sr(const ExperimentSpec& spec, const RunOptions& opts);
/// Boundary CSVs and region.json (endpoints, containment, sandwich).
CommandOutput cmd_region(const ExperimentSpec& spec, const RunOptions& opts);

void write_outputs(const CommandOutput& out, const std::filesystem::path& dir);

}  // namespace isac::cli
