#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "subtrace/common.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// Transformer encoder classifier with per-head gates.
//
// Architecture: learned token + position embeddings, post-LN encoder blocks
// (multi-head self-attention with a scalar gate per head applied to the head
// context before the output projection, then GELU feed-forward), and a
// classifier that reads the leading-token representation through one hidden
// tanh layer. All arithmetic is IEEE double; every operation is a pure
// function of (params, example, mask).
// ---------------------------------------------------------------------------

struct ModelConfig {
    int num_layers = 2;
    int heads_per_layer = 4;
    int model_dim = 32;
    int ffn_dim = 64;
    int vocab_size = 64;
    int max_seq_len = 16;
    int num_classes = 2;
    int classifier_hidden_dim = 16;

    int head_dim() const { return model_dim / heads_per_layer; }
    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

// One named block of the flat parameter vector. Vector-shaped blocks
// (biases, layer-norm terms) have cols == 1.
struct ParamSegment {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::size_t offset = 0;
    std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

class ParamLayout {
  public:
    ParamLayout() = default;
    explicit ParamLayout(const ModelConfig& config);

    const std::vector<ParamSegment>& segments() const { return segments_; }
    const ParamSegment& seg(const std::string& name) const;
    std::size_t total() const { return total_; }

  private:
    std::vector<ParamSegment> segments_;
    std::unordered_map<std::string, int> index_;
    std::size_t total_ = 0;
};

struct Parameters {
    ModelConfig config;
    ParamLayout layout;
    std::vector<double> values;

    double* seg(const std::string& name) { return values.data() + layout.seg(name).offset; }
    const double* seg(const std::string& name) const {
        return values.data() + layout.seg(name).offset;
    }
    std::size_t size() const { return values.size(); }
    std::string content_hash() const;
};

// Closed-form flat parameter count for a config.
std::size_t parameter_count(const ModelConfig& config);

Parameters init_model(const ModelConfig& config, std::uint64_t seed);

// Binary parameter file: magic, config block, flat f64 array (little-endian).
void save_parameters(const Parameters& params, const std::string& path);
Parameters load_parameters(const std::string& path);

// ---------------------------------------------------------------------------
// Binary head-gate matrix xi, indexed (head, layer).
// ---------------------------------------------------------------------------

struct HeadMask {
    int heads = 0;
    int layers = 0;
    std::vector<std::uint8_t> bits;  // layer-major: bits[layer * heads + head]

    static HeadMask ones(int heads, int layers) {
        HeadMask m;
        m.heads = heads;
        m.layers = layers;
        m.bits.assign(static_cast<std::size_t>(heads) * layers, 1);
        return m;
    }

    std::uint8_t at(int head, int layer) const {
        return bits[static_cast<std::size_t>(layer) * heads + head];
    }
    void set(int head, int layer, std::uint8_t v) {
        bits[static_cast<std::size_t>(layer) * heads + head] = v;
    }
    int total() const { return heads * layers; }
    int enabled_count() const;
    int disabled_count() const { return total() - enabled_count(); }
    bool operator==(const HeadMask&) const = default;

    std::string to_json_string() const;
    static HeadMask from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static HeadMask load(const std::string& path);
    std::string content_hash() const;
};

// H x L grid of reals indexed like HeadMask; used for gate gradients and
// head importance scores.
struct HeadGrid {
    int heads = 0;
    int layers = 0;
    std::vector<double> values;  // layer-major

    static HeadGrid zeros(int heads, int layers) {
        HeadGrid g;
        g.heads = heads;
        g.layers = layers;
        g.values.assign(static_cast<std::size_t>(heads) * layers, 0.0);
        return g;
    }
    double& at(int head, int layer) {
        return values[static_cast<std::size_t>(layer) * heads + head];
    }
    double at(int head, int layer) const {
        return values[static_cast<std::size_t>(layer) * heads + head];
    }
};

// ---------------------------------------------------------------------------
// Examples: [CLS] segment-a [SEP] segment-b (pair tasks) or [CLS] body.
// ---------------------------------------------------------------------------

struct Example {
    std::vector<int> tokens;
    int label = 0;
    int language = 0;
    std::int64_t latent_id = -1;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;  // aligned to the Parameters flat layout
};

std::vector<double> forward(const Parameters& params, const Example& example,
                            const HeadMask& mask);
// Ungated forward pass (no gate multiplies anywhere).
std::vector<double> forward(const Parameters& params, const Example& example);

LossGrad loss_and_grad(const Parameters& params, const Example& example,
                       const HeadMask& mask);

// Exact derivative of the loss w.r.t. a continuous relaxation of each gate,
// evaluated at the current gate values. Entries for disabled heads are the
// derivatives at gate 0.
HeadGrid gate_grad(const Parameters& params, const Example& example, const HeadMask& mask);

// Loss and gate gradient without materializing the parameter gradient.
double gate_grad_with_loss(const Parameters& params, const Example& example,
                           const HeadMask& mask, HeadGrid& out);

int predict(const Parameters& params, const Example& example, const HeadMask& mask);

double evaluate(const Parameters& params, std::span<const Example> dataset,
                const HeadMask& mask);

}  // namespace subtrace
