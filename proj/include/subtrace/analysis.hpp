#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subtrace/influence.hpp"
#include "subtrace/model.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// Cross-language influence analysis: contribution matrices over top-m
// rankings, deltas against a baseline, specialization, mask similarity,
// Pearson correlations, per-epoch trajectories, and mask composition.
// ---------------------------------------------------------------------------

struct ContributionMatrix {
    std::vector<int> languages;  // row (test) and column (train) label order
    int m = 0;
    std::string sign;     // "positive" or "negative"
    std::string variant;  // full / subnetwork / random / composed / ...
    std::vector<double> values;  // row-major, percentages

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * languages.size() +
                      static_cast<std::size_t>(col)];
    }
    int index_of(int language) const;
};

struct DeltaMatrix {
    std::vector<int> languages;
    int m = 0;
    std::string sign;
    std::string variant;
    std::string baseline;
    std::vector<double> values;

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * languages.size() +
                      static_cast<std::size_t>(col)];
    }
};

struct SimilarityMatrix {
    std::vector<int> languages;
    int layer = -1;  // -1: all layers (flattened masks)
    std::vector<double> values;

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * languages.size() +
                      static_cast<std::size_t>(col)];
    }
};

struct CorrelationResult {
    double r = 0.0;
    int count = 0;
    std::vector<double> x;
    std::vector<double> y;
};

// Rankings grouped by test language; train_language_of maps a train example
// id to its language id. Every ranking must share the same m and contain
// eligible tests only.
ContributionMatrix contribution_matrix(
    const std::map<int, std::vector<const InfluenceRanking*>>& rankings_by_language,
    const std::function<int(int)>& train_language_of, const std::vector<int>& languages,
    const std::string& sign, const std::string& variant);

DeltaMatrix delta_matrix(const ContributionMatrix& variant, const ContributionMatrix& baseline);

// Diagonal of a square contribution matrix (in-language percentages).
std::vector<double> specialization(const ContributionMatrix& matrix);

// Cosine similarity of flattened masks, or of a single layer's bits.
double mask_cosine(const HeadMask& a, const HeadMask& b, std::optional<int> layer = {});

SimilarityMatrix similarity_matrix(const std::vector<std::pair<int, const HeadMask*>>& masks,
                                   std::optional<int> layer = {});

CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Per-epoch specialization series per language, from per-checkpoint
// contribution matrices (index e -> epoch e+1).
std::map<int, std::vector<double>> epoch_trajectory(
    const std::vector<ContributionMatrix>& per_epoch);

enum class MaskOp { Union, Intersect };

HeadMask compose(const HeadMask& a, const HeadMask& b, MaskOp op);

// ---------------------------------------------------------------------------
// CSV emission (deterministic formatting; one JSON sidecar per file)
// ---------------------------------------------------------------------------

void write_matrix_csv(const std::string& path, const std::vector<int>& row_languages,
                      const std::vector<int>& col_languages, std::span<const double> values);
void write_series_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);
void write_sidecar(const std::string& csv_path, const std::string& kind,
                   const std::map<std::string, std::string>& metadata);

}  // namespace subtrace
