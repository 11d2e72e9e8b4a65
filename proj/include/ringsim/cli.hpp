#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ringsim {

inline constexpr const char* kToolName = "ringsim";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,       // I/O and other unexpected errors
    kExitInvalid = 2,       // invalid arguments or configuration
    kExitNoConvergence = 3, // numerical non-convergence, failed self-test
    kExitDimensionCap = 4,
};

/// Runs one command line (without the program name). Data goes to `out`
/// unless redirected with --output, diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

/// Angle in radians from "3.14", "pi", "0.9pi", "-pi/2" style text.
double parse_angle(const std::string& text);

/// Atom mass in kg from "mass=7u", "mass=1.2e-26kg", "1.2e-26" or an
/// isotope name such as "Li7" / "7Li".
double parse_species_mass(const std::string& text);

}  // namespace ringsim
