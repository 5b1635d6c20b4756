#pragma once
#include <string>
#include <vector>

#include "qiren/task/train.hpp"

namespace qiren {

// One-axis-at-a-time study around a base configuration: batch norm on/off,
// encoding repetitions 1..4, measurement noise levels, entangler choice,
// and hybrid vs pure-circuit family.
struct AblationCell {
  std::string axis;
  std::string value;
  ModelConfig config;
};

std::vector<AblationCell> ablation_cells(const ModelConfig& base);

struct AblationResult {
  AblationCell cell;
  bool ok = false;
  std::string error;  // set when the cell failed; the sweep keeps going
  TrainReport report;
};

std::vector<AblationResult> run_ablation(const ModelConfig& base,
                                         const Dataset& ds,
                                         const TrainOptions& opt);

void write_ablation_csv(const std::string& path,
                        const std::vector<AblationResult>& rows);

}  // namespace qiren
