#pragma once

#include <vector>

#include "wii/dataset.hpp"
#include "wii/features.hpp"

namespace wii {

// Records of `split` recorded at exactly snr_db. Throws an empty-selection
// error when nothing matches.
std::vector<SampleRecord> snr_filter(const Dataset& d, int snr_db, Split split);
std::vector<LabeledFeatures> snr_filter(const FeatureSet& set, int snr_db, Split split);

}  // namespace wii
