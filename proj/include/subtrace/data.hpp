#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subtrace/model.hpp"

namespace subtrace {

// ---------------------------------------------------------------------------
// Synthetic multilingual corpora. A latent example is a sequence of abstract
// symbols plus a label; each language renders symbols to tokens through its
// own vocabulary range. Language similarity is controlled purely by the
// fraction of latent symbols a language maps onto the base language's tokens.
// ---------------------------------------------------------------------------

enum class TaskKind {
    PairParaphrase,
    PairInferenceBinary,
    SingleSentimentBinary,
};

std::string task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(const std::string& name);
bool task_is_pair(TaskKind kind);

struct LanguageSpec {
    int id = 0;
    int token_offset = -1;  // -1: assigned automatically
    double overlap = 1.0;   // fraction of latent symbols shared with the base language
};

struct CorpusConfig {
    TaskKind task = TaskKind::PairParaphrase;
    std::vector<LanguageSpec> languages;
    int latent_symbols = 16;
    int body_len = 6;
    int train_per_language = 200;
    int test_per_language = 50;
    double dev_fraction = 0.1;
    bool parallel = true;
    std::uint64_t seed = 1;
    int vocab_size = 64;   // must cover all language token ranges
    int max_seq_len = 16;

    void validate() const;
};

// Maps (language index, latent symbol) -> token id. Token 0 is the leading
// classifier token, token 1 the segment separator.
struct TokenMap {
    static constexpr int kCls = 0;
    static constexpr int kSep = 1;

    int latent_symbols = 0;
    std::vector<int> offsets;        // per language index
    std::vector<int> shared_counts;  // per language index; symbols below map to base tokens

    int token_for(int lang_index, int symbol) const {
        if (symbol < shared_counts[static_cast<std::size_t>(lang_index)]) {
            return offsets[0] + symbol;
        }
        return offsets[static_cast<std::size_t>(lang_index)] + symbol;
    }
};

TokenMap build_token_map(const CorpusConfig& config);

struct Corpus {
    std::string split;  // train / dev / test
    std::vector<Example> examples;
    std::vector<int> language_ids;               // distinct ids, config order
    std::map<int, std::vector<int>> by_language;  // id -> example indices
    std::vector<std::string> token_names;         // only for CSV-loaded corpora

    std::size_t size() const { return examples.size(); }
    void rebuild_index();
    std::string content_hash() const;
};

struct GeneratedCorpora {
    Corpus train;
    Corpus dev;
    Corpus test;
};

GeneratedCorpora generate(const CorpusConfig& config);

// Order-preserving filter to a single language.
Corpus language_slice(const Corpus& corpus, int language);

// CSV ingestion: header row with columns text_a[,text_b],label,language
// [,latent_id]; whitespace tokenization against a corpus-local vocabulary.
struct CsvSchema {
    int vocab_size = 0;
    int max_seq_len = 0;
    int num_classes = 2;
    std::vector<int> allowed_languages;  // empty: accept any id >= 0
};

Corpus load_csv(const std::string& path, const CsvSchema& schema);
void save_csv(const Corpus& corpus, const std::string& path);

// JSON-lines persistence, one example per line (native token-id format).
void save_jsonl(const Corpus& corpus, const std::string& path);
Corpus load_jsonl(const std::string& path, const std::string& split);

}  // namespace subtrace
