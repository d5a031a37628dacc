#pragma once

#include <string>
#include <vector>

#include "psa/system.hpp"

namespace psa {

struct ParseResult {
  SystemSpec spec;
  std::vector<Diagnostic> diagnostics;  // parse + semantic
  bool ok() const { return !has_errors(diagnostics); }
};

/// Parses the textual problem format:
///
///   processing NAME { period NUM [in NAME...] [out NAME...] }
///   wcet NAME NUM
///   thread NAME { period NUM offset (NUM|?) deadline (NUM|?) maf NUM
///                 priority INT (run NAME when INT mod INT)+ }
///   reactivity NAME { path NAME (-> NAME)+ bound NUM }
///
/// Numeric literals accept integers, decimals and fractions (1, 0.5, 1/2).
/// `?` marks offsets/deadlines as synthesis parameters. `#` starts a
/// line comment.
ParseResult parse(const std::string& text, const std::string& filename = "<input>");

/// Canonical, round-trippable rendering: parse(serialize(s)) == s and
/// serialize is deterministic (byte-identical on repeated calls).
std::string serialize(const SystemSpec& spec);

std::string format_diagnostic(const Diagnostic& d, const std::string& filename);

}  // namespace psa
