#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subtrace/analysis.hpp"
#include "subtrace/data.hpp"
#include "subtrace/influence.hpp"
#include "subtrace/model.hpp"
#include "subtrace/prune.hpp"
#include "subtrace/train.hpp"

namespace subtrace {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Declarative experiment configuration (one JSON file drives every stage).
// ---------------------------------------------------------------------------

struct InfluenceConfig {
    int d = 64;
    int m = 20;
    bool normalize = true;
    std::uint64_t projector_seed = 99;
    std::string scheme = "dense-full";  // dense-full | factored-per-matrix | exact
    bool include_classifier = true;
    std::string cosine_space = "sketch";  // sketch | exact
};

struct PruneConfig {
    double threshold = 0.95;
    double rate = 0.10;
    std::string entry = "multilingual";  // multilingual | monolingual
};

struct ExperimentConfig {
    std::string name;
    std::string output_dir;
    CorpusConfig corpus;
    ModelConfig model;
    std::uint64_t model_seed = 7;
    TrainConfig full_train;
    TrainConfig sft_train;
    std::string sft_init_from = "init";  // init | full-final
    PruneConfig prune;
    InfluenceConfig influence;
    std::vector<std::string> variants;
    std::vector<std::string> per_epoch_rankings;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_string(const std::string& text);
    std::string to_json_string() const;
    void validate() const;

    std::vector<int> language_ids() const;
};

// Variant grammar:
//   full                 full run, no mask
//   subnet               full run, each test language under its own mask
//   random:S             full run, shuffled own masks (seed S)
//   suboptimal:L         full run, language L's mask applied to every test language
//   sft                  sft run, own masks
//   sft-random:S         sft run trained and tested with shuffled masks (seed S)
//   compose:A+B:OP       sft run, union/intersect of A and B applied to their tests
struct VariantSpec {
    enum class MaskRule { None, Own, Shuffled, Fixed, Composed };

    std::string name;
    std::string run;  // full | sft | sft-random:S
    MaskRule rule = MaskRule::None;
    std::uint64_t shuffle_seed = 0;
    int fixed_language = -1;
    int compose_a = -1;
    int compose_b = -1;
    MaskOp compose_op = MaskOp::Intersect;
    std::vector<int> test_language_filter;  // empty: all test languages

    std::string dir_name() const;  // influence artifact directory stem
};

VariantSpec parse_variant(const std::string& name);

// ---------------------------------------------------------------------------
// Pipeline: stage commands over a content-addressed artifact directory.
// Every stage writes a manifest; reruns with identical hashes are no-ops and
// hash mismatches raise an explicit invalidation error.
// ---------------------------------------------------------------------------

class Pipeline {
  public:
    Pipeline(ExperimentConfig config, std::string out_dir);

    const ExperimentConfig& config() const { return config_; }
    const std::string& out_dir() const { return out_dir_; }

    void cmd_gen_data();
    void cmd_train(const std::string& run);  // full | sft | sft-random:S | mono:L
    void cmd_prune(std::optional<int> language = {});
    void cmd_influence(const std::string& variant);
    void cmd_analyze();
    void cmd_report();
    int cmd_verify(std::ostream& out);  // returns number of failed checks

    // Artifact access (loads lazily; throws DependencyError when missing).
    const GeneratedCorpora& corpora();
    const CheckpointStore& checkpoints(const std::string& run);
    const std::map<int, HeadMask>& identified_masks();
    HeadMask shuffled_mask(int language, std::uint64_t seed);
    HeadMask mask_for(const VariantSpec& spec, int language);

    std::string corpus_dir() const;
    std::string train_dir(const std::string& run) const;
    std::string prune_dir() const;
    std::string influence_dir(const VariantSpec& spec) const;
    std::string analysis_dir() const;
    std::string report_dir() const;

  private:
    ExperimentConfig config_;
    std::string out_dir_;
    std::optional<GeneratedCorpora> corpora_;
    std::map<std::string, CheckpointStore> checkpoints_;
    std::optional<std::map<int, HeadMask>> masks_;
};

// Per-test-example influence rankings persisted as CSV
// (test_id, rank, train_id, score, sign).
void write_rankings_csv(const std::string& path,
                        const std::vector<InfluenceRanking>& rankings);
std::vector<InfluenceRanking> read_rankings_csv(const std::string& path);

}  // namespace subtrace
