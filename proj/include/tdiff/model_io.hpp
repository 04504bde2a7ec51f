#pragma once

#include <string>

#include "tdiff/model.hpp"

namespace tdiff {

// JSON object with exactly the keys "thresholds", "drifts", "vols", each an array of numbers.
// Unknown keys, missing keys, and non-numeric entries raise ValidationError.
ThresholdModel parse_model_json(const std::string& text);
ThresholdModel load_model_file(const std::string& path);

// Round-trips through parse_model_json; numbers are written with 17 significant digits.
std::string model_to_json(const ThresholdModel& model);

}  // namespace tdiff
