/**
 * config.hpp
 *
 * Run configuration: JSON parsing with field-path error messages, canonical
 * serialization that round-trips losslessly, and the CSV/JSON report
 * emitters shared by the command-line tool and the tests.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdim/dimension.hpp"
#include "hdim/family.hpp"
#include "hdim/psi.hpp"

namespace hdim {

struct RunConfig {
    MatrixFamily family;
    PsiSpec psi;
    std::vector<Rat> tau_grid;  // optional sweep rates; strictly increasing
    long n_lo = 1;
    long n_hi = 40;
    BoundsMode mode = BoundsMode::Numeric;
    bool rational = false;      // emit exact "p/q" strings alongside floats
    long long budget = 10'000'000;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

/// Parses a schema-1 JSON document.  Structural and semantic violations
/// throw InvalidConfig with the offending field path in the message.
RunConfig parse_config(const std::string& text);

/// parse_config applied to the contents of a file.
RunConfig load_config(const std::string& path);

/// Canonical JSON for the config; parse_config(serialize_config(c)) is
/// field-for-field identical to c, and the bytes are deterministic.
std::string serialize_config(const RunConfig& cfg);

/// Value formatted to nine significant digits, deterministically.
std::string format_sig9(double v);

/// Per-n rows and the aggregate row as CSV with nine significant digits.
std::string bounds_csv(const BoundsReport& rep);

/// The full report as deterministic JSON.
std::string bounds_json(const BoundsReport& rep);

/// Inverse of bounds_json; throws InvalidConfig on schema violations.
BoundsReport bounds_from_json(const std::string& text);

}  // namespace hdim
