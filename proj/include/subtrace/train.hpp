#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subtrace/data.hpp"
#include "subtrace/model.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// Full-model fine-tuning and sparse fine-tuning (SFT). SFT draws
// language-homogeneous batches in random order with equal counts per
// language; each batch applies its language's head mask in the forward pass
// and multiplies the gradient by the mask expansion before the optimizer
// step. Coordinates frozen by the expansion are not touched at all: no
// gradient, no decay, no moment update.
// ---------------------------------------------------------------------------

enum class TrainMode { Full, Sft };

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 0.01;
    int batch_size = 16;
    int epochs = 4;
    std::uint64_t seed = 0;
    TrainMode mode = TrainMode::Full;
    std::map<int, HeadMask> language_masks;  // required per training language for SFT
};

struct AdamWState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    double learning_rate = 1e-3;
    std::int64_t step = 0;
    std::vector<double> m;
    std::vector<double> v;

    static AdamWState init(std::size_t size, double learning_rate, double weight_decay);
    void save(const std::string& path) const;
    static AdamWState load(const std::string& path);
};

// One decoupled-weight-decay update in place. Coordinates with
// update_mask == 0 are left untouched (parameters, moments, and decay).
void adamw_step(AdamWState& state, std::vector<double>& params, const std::vector<double>& grad,
                const std::vector<std::uint8_t>* update_mask = nullptr);

// Per-coordinate update mask for a head mask: rows of the q/k/v projections
// (weights and biases) and columns of the output projection belonging to
// disabled heads are frozen; everything else updates.
std::vector<std::uint8_t> head_update_mask(const Parameters& params, const HeadMask& mask);

struct Snapshot {
    int epoch = 0;  // 1-based
    Parameters params;
    std::map<int, double> dev_accuracy;  // per language id
};

struct CheckpointStore {
    std::vector<Snapshot> snapshots;
    std::string config_hash;
    std::string corpus_hash;

    int epochs() const { return static_cast<int>(snapshots.size()); }
    const Snapshot& at_epoch(int epoch) const;  // 1-based
    const Parameters& final_params() const;
    std::string content_hash() const;

    void save(const std::string& dir) const;
    static CheckpointStore load(const std::string& dir);
};

CheckpointStore train_full(const Parameters& init, const Corpus& train, const Corpus& dev,
                           const TrainConfig& config);

CheckpointStore train_sft(const Parameters& init, const Corpus& train, const Corpus& dev,
                          const TrainConfig& config);

}  // namespace subtrace
