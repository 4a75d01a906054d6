#include "wii/snr_select.hpp"

#include <string>

#include "wii/error.hpp"

namespace wii {

namespace {

template <typename Item, typename Range>
std::vector<Item> select(const Range& items, int snr_db, Split split) {
  std::vector<Item> out;
  for (const auto& item : items) {
    if (item.snr_db == snr_db && item.split == split) out.push_back(item);
  }
  if (out.empty()) {
    throw Error(ErrorCode::empty_selection, "no " + std::string(split == Split::train ? "train" : "val") +
                                                " records at " + std::to_string(snr_db) + " dB");
  }
  return out;
}

}  // namespace

std::vector<SampleRecord> snr_filter(const Dataset& d, int snr_db, Split split) {
  return select<SampleRecord>(d.records, snr_db, split);
}

std::vector<LabeledFeatures> snr_filter(const FeatureSet& set, int snr_db, Split split) {
  return select<LabeledFeatures>(set.items, snr_db, split);
}

}  // namespace wii
