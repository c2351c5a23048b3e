#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "pseudopoisson/estimation.hpp"
#include "pseudopoisson/model.hpp"
#include "pseudopoisson/sampler.hpp"

namespace pseudopoisson::cli {

enum class Command { Simulate, Fit, Test, Compare, Diagnose };
enum class OutputFormat { Json, Table };

enum ExitCode : int {
    kOk = 0,
    kDomainError = 2,
    kInfeasible = 3,
    kNoConvergence = 4,
};

Command parse_command(std::string_view text);
std::string_view to_string(Command command) noexcept;

struct CliConfig {
    Command command = Command::Fit;
    std::optional<std::filesystem::path> input_path;
    std::optional<std::filesystem::path> output_path;
    OutputFormat output_format = OutputFormat::Json;
    std::optional<Seed> seed;
    std::optional<Submodel> model;
    std::optional<Method> method;
    std::optional<std::size_t> bootstrap_b;
    std::optional<ModelParams> params;
    std::optional<std::size_t> n;
    bool header = false;

    /// Throws DomainError when a required option for the command is missing.
    void validate() const;
};

/// Parses "l1,l2,l3".
ModelParams parse_params(std::string_view text);

/// Two comma-separated nonnegative integers per line, optional header line,
/// LF or CRLF endings, whitespace around fields ignored, blank lines skipped.
/// ParseError reports 1-based line numbers.
Sample parse_csv(std::istream& in, bool header);
Sample read_csv(const std::filesystem::path& path, bool header);

/// Writes "x1,x2" rows, preceded by a header line when requested.
void write_csv(std::ostream& out, const Sample& s, bool header);

/// Executes one command. The report goes to `out` (or to config.output_path),
/// diagnostics to `err`. Returns an ExitCode.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pseudopoisson::cli
