#include "psa/render.hpp"

#include "json.hpp"

namespace psa {

namespace {

nlohmann::json region_to_json(const Region& r, const VarRegistry& reg) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : r.disjuncts()) {
    nlohmann::json dj = nlohmann::json::array();
    for (const auto& c : d.constraints()) {
      nlohmann::json cj;
      cj["coeffs"] = nlohmann::json::object();
      for (uint32_t i = 0; i < d.dims(); ++i)
        if (c.coeff(i) != 0) cj["coeffs"][reg.name(i)] = c.coeff(i).get_str();
      cj["constant"] = c.constant().get_str();
      cj["rel"] = rel_str(c.rel());
      dj.push_back(cj);
    }
    out.push_back(dj);
  }
  return out;
}

}  // namespace

std::string region_json(const Region& r, const VarRegistry& reg) {
  return region_to_json(r, reg).dump(2);
}

std::string synthesis_json(const std::string& mode, const SynthesisResult& r,
                           const VarRegistry& reg) {
  nlohmann::json j;
  j["mode"] = mode;
  j["exact"] = r.exact;
  j["bad_region"] = region_to_json(r.bad_region, reg);
  j["good_region"] = region_to_json(r.good_region, reg);
  j["stats"] = {{"states_explored", r.stats.states_explored},
                {"max_depth_reached", r.stats.max_depth_reached},
                {"duration_seconds", r.stats.duration_seconds}};
  return j.dump(2);
}

std::string verdict_json(const std::string& mode, Verdict v, double seconds) {
  nlohmann::json j;
  j["mode"] = mode;
  j["verdict"] = verdict_str(v);
  j["duration_seconds"] = seconds;
  return j.dump(2);
}

}  // namespace psa
