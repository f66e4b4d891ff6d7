#pragma once

#include <gtube/grauert_geometry.hpp>
#include <gtube/rate_fit.hpp>
#include <gtube/scaling.hpp>
#include <gtube/stationary_phase.hpp>

#include <json.hpp>

#include <string>

namespace gtube {

using json = nlohmann::ordered_json;

json to_json(const PhaseReport& r);
json to_json(const HeisenbergChart& c);
HeisenbergChart chart_from_json(const json& j);
json to_json(const LogLogFit& f);
json to_json(const RemainderFit& f);
json to_json(const ScalingReport& r);
json to_json(const CrossConsistency& c);

// Non-finite values become null.
json number(double v);

void write_text(const std::string& path, const std::string& content);

}  // namespace gtube
