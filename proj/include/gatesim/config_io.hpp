// Scenario file format: INI-style named sections mirroring ScenarioConfig.
//
//   [scenario]                 counts, rates, scheduler, seed
//   [gate]                     geometry and AP placement
//   [mobility] [channel] [energy]
//
// Rules: '#' starts a comment; keys are snake_case and match the field
// names; unknown sections or keys are an error (typo protection); numbers
// use '.' as the decimal separator regardless of locale; points are
// "x, y"; AP positions are semicolon-separated "x y z" triples. Keys may
// be omitted, in which case the documented default applies.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gatesim/model.hpp"

namespace gatesim {

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);

// Canonical serialization; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace gatesim
