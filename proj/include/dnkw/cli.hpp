#ifndef DNKW_CLI_HPP
#define DNKW_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

namespace dnkw
{

enum class OutputFormat
{
    json,
    csv,
    text,
};

struct RunConfig
{
    int n = 4;
    int degree = 8;
    int y_degree = 4;
    double tolerance = 1e-8;
    std::uint64_t seed = 42;
    OutputFormat format = OutputFormat::text;
    /// Empty means standard output.
    std::string output;
    double inject_beta_error = 0.0;
    /// Adds elapsed seconds to the verify report (makes output nondeterministic).
    bool timing = false;
};

/// Throws Error(out_of_range) naming the first violated bound.
void validate(const RunConfig &config);

// Each command writes to `out` and returns 0 on success, 1 on a failed check.
int cmd_realization(const RunConfig &config, std::ostream &out);
int cmd_coeffs(const RunConfig &config, std::ostream &out);
int cmd_equations(const RunConfig &config, std::ostream &out);
int cmd_verify(const RunConfig &config, std::ostream &out);

/// Full command line: 0 pass, 1 verification failure, 2 usage error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace dnkw

#endif
