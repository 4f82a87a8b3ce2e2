#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subtrace/data.hpp"
#include "subtrace/model.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// TracIn influence over per-epoch checkpoints, scored on random-projection
// gradient sketches (or exact gradients) with optional cosine normalization.
// Sketches are stored as float32 rows; scoring always consumes the rounded
// values so cached and freshly computed runs agree byte for byte.
// ---------------------------------------------------------------------------

enum class SketchScheme { DenseFull, FactoredPerMatrix };

std::string sketch_scheme_name(SketchScheme scheme);
SketchScheme sketch_scheme_from_name(const std::string& name);

struct SketchProjector {
    SketchScheme scheme = SketchScheme::DenseFull;
    std::uint64_t seed = 0;
    int d = 0;
    int sqrt_d = 0;  // factored scheme only
    std::size_t p = 0;
    std::vector<ParamSegment> segments;  // layout binding
    std::vector<double> dense;           // d x p, row-major
    std::vector<double> fact;            // per segment: G1 (sqrt_d x rows), G2 (sqrt_d x cols)
    std::vector<std::pair<std::size_t, std::size_t>> fact_off;
};

// Dense entries are N(0, 1/d); factored pairs use N(0, 1/sqrt(d)) per factor
// so that the expected Gram matrix of the combined projector is the
// identity. The factored scheme requires d to be a perfect square.
SketchProjector build_projector(std::uint64_t seed, int d, const ParamLayout& layout,
                                SketchScheme scheme);

std::vector<double> sketch_gradient(const SketchProjector& projector,
                                    std::span<const double> grad);

std::vector<float> to_f32(std::span<const double> values);

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

struct InfluenceScore {
    int train_id = -1;
    int test_id = -1;
    double score = 0.0;
};

namespace detail {

template <typename T>
double dot_span(std::span<const T> a, std::span<const T> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

template <typename T>
double tracin_sum(const std::vector<std::span<const T>>& train_checkpoints,
                  const std::vector<std::span<const T>>& test_checkpoints, bool normalize) {
    if (train_checkpoints.size() != test_checkpoints.size()) {
        throw ContractViolation("tracin_score: checkpoint counts differ");
    }
    double total = 0.0;
    for (std::size_t e = 0; e < train_checkpoints.size(); ++e) {
        const auto& u = train_checkpoints[e];
        const auto& v = test_checkpoints[e];
        if (u.size() != v.size()) {
            throw ContractViolation("tracin_score: sketch dimensions differ");
        }
        const double dot = dot_span(u, v);
        if (!normalize) {
            total += dot;
            continue;
        }
        const double nu = std::sqrt(dot_span(u, u));
        const double nv = std::sqrt(dot_span(v, v));
        if (nu == 0.0 || nv == 0.0) continue;  // cos(., 0) = 0
        total += dot / (nu * nv);
    }
    return total;
}

}  // namespace detail

inline double tracin_score(const std::vector<std::span<const float>>& train_checkpoints,
                           const std::vector<std::span<const float>>& test_checkpoints,
                           bool normalize) {
    return detail::tracin_sum(train_checkpoints, test_checkpoints, normalize);
}

inline double tracin_score(const std::vector<std::span<const double>>& train_checkpoints,
                           const std::vector<std::span<const double>>& test_checkpoints,
                           bool normalize) {
    return detail::tracin_sum(train_checkpoints, test_checkpoints, normalize);
}

// ---------------------------------------------------------------------------
// Eligibility and ranking
// ---------------------------------------------------------------------------

struct ModelVariant {
    const Parameters* params = nullptr;
    const HeadMask* mask = nullptr;
};

// Test ids whose argmax prediction is correct under every listed variant.
std::vector<int> eligible_tests(const Corpus& test_corpus,
                                std::span<const ModelVariant> variants);

struct RankEntry {
    int train_id = -1;
    double score = 0.0;
};

struct InfluenceRanking {
    int test_id = -1;
    int m = 0;
    std::vector<RankEntry> positive;  // descending score, ties by train id
    std::vector<RankEntry> negative;  // ascending score, ties by train id
};

InfluenceRanking rank_top_m(std::span<const double> scores, int m, int test_id = -1);

// ---------------------------------------------------------------------------
// Sketch store: one binary file per checkpoint, float32 rows in train-id
// order, keyed by (corpus, checkpoint params, projector seed, mask) hashes.
// ---------------------------------------------------------------------------

struct SketchFileMeta {
    int d = 0;
    std::uint64_t count = 0;
    std::uint64_t projector_seed = 0;
    std::string scheme;
    std::string corpus_hash;
    std::string params_hash;
    std::string mask_hash;

    bool operator==(const SketchFileMeta&) const = default;
};

void write_sketch_file(const std::string& path, const SketchFileMeta& meta,
                       std::span<const float> rows);

std::pair<SketchFileMeta, std::vector<float>> read_sketch_file(const std::string& path);

// Loads and verifies the key; throws ContractViolation on mismatch.
std::vector<float> read_sketch_file_checked(const std::string& path,
                                            const SketchFileMeta& expected);

}  // namespace subtrace
