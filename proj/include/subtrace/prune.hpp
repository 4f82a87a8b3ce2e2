#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subtrace/model.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// Language-specific subnetwork identification: iteratively disable the
// lowest-importance heads until the candidate mask drops below a fraction of
// the unpruned dev accuracy. Head importance is the mean absolute gate
// gradient over a language's training slice; no retraining happens inside
// the loop.
// ---------------------------------------------------------------------------

struct HeadImportanceMap {
    HeadGrid scores;       // >= 0; disabled heads carry 0
    int sample_count = 0;  // evaluation set size the estimate was taken on
};

HeadImportanceMap head_importance(const Parameters& params, std::span<const Example> slice,
                                  const HeadMask& mask);

// Disables k = max(1, floor(rate * total_heads)) enabled heads of lowest
// importance; ties broken by (layer, head) lexicographic order.
HeadMask prune_step(const HeadMask& mask, const HeadImportanceMap& importance, double rate);

struct PruneIteration {
    HeadMask mask;
    double dev_accuracy = 0.0;
};

struct PruneTrace {
    double base_accuracy = 0.0;
    std::string stop_reason;  // threshold / exhausted / none-prunable
    std::vector<PruneIteration> iterations;

    std::string to_json_string() const;
};

struct PruneResult {
    HeadMask mask;
    PruneTrace trace;
};

PruneResult find_subnetwork(const Parameters& params, std::span<const Example> train_slice,
                            std::span<const Example> dev_slice, double threshold = 0.95,
                            double rate = 0.10);

// Uniformly random permutation of all mask bits; sparsity preserved exactly.
HeadMask shuffle_mask(const HeadMask& mask, std::uint64_t seed);

}  // namespace subtrace
