#pragma once

#include <string>

#include "psa/region.hpp"
#include "psa/synthesis.hpp"

namespace psa {

/// JSON rendering of a region: array of disjuncts, each an array of
/// {coeffs, constant, rel} objects over parameter names.
std::string region_json(const Region& r, const VarRegistry& reg);

std::string synthesis_json(const std::string& mode, const SynthesisResult& r,
                           const VarRegistry& reg);

std::string verdict_json(const std::string& mode, Verdict v, double seconds);

}  // namespace psa
