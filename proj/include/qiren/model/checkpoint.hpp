#pragma once
#include <cstdint>
#include <string>

#include "qiren/model/model.hpp"
#include "qiren/nn/adam.hpp"

namespace qiren {

// Model container, written little-endian:
//   "QIRN" | u32 version=1 | u32 header_len | header (canonical JSON)
//   | u64 value_count | value_count f64
//   | [optimizer: u64 step, then m and v arrays per block]  (header flag)
//   | u32 crc32 of everything before it
// The f64 run is every trainable block in stack order followed by every
// persistent state vector (batch-norm running stats) in stack order.
// Identical training runs produce byte-identical files.

uint32_t crc32_ieee(const uint8_t* data, size_t len);

void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     LayerStack& model, const Adam* opt = nullptr);

struct LoadedCheckpoint {
  ModelConfig config;
  LayerStack model;
  Adam opt;
  bool has_optimizer = false;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);

}  // namespace qiren
