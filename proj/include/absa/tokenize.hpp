#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace absa {

struct MergeRule {
    std::string left;
    std::string right;
};

/// Byte-pair-encoding subword vocabulary with word-boundary markers.
/// Pieces are ordered: specials, then the single-character alphabet, then
/// merged pieces in merge-rank order. Immutable once trained or loaded.
class SubwordVocab {
public:
    static constexpr std::string_view kUnk = "<unk>";
    static constexpr std::string_view kMask = "<mask>";
    static constexpr std::string_view kBoundary = "\xE2\x96\x81";  // U+2581

    const std::vector<std::string>& pieces() const { return pieces_; }
    const std::vector<MergeRule>& merges() const { return merges_; }
    int requested_vocab_size() const { return requested_vocab_size_; }
    double coverage() const { return coverage_; }

    /// Id of a piece string, or -1 when absent.
    int piece_id(std::string_view piece) const;
    int unk_id() const { return 0; }
    int mask_id() const { return 1; }

    /// Rank of the merge (left, right), or -1 when the pair never merges.
    int merge_rank(std::string_view left, std::string_view right) const;

    bool trained() const { return !pieces_.empty(); }

private:
    friend SubwordVocab train_subword(const std::vector<std::string>&, int, double);
    friend SubwordVocab load_vocab(const std::filesystem::path&);

    void add_piece(const std::string& piece);
    void index_merges();

    std::vector<std::string> pieces_;
    std::vector<MergeRule> merges_;
    std::unordered_map<std::string, int> piece_ids_;
    std::unordered_map<std::string, int> merge_ranks_;
    int requested_vocab_size_ = 0;
    double coverage_ = 1.0;
};

struct TokenizedText {
    std::vector<std::string> tokens;
    std::vector<int> ids;
    std::vector<std::pair<std::size_t, std::size_t>> offsets;  // byte spans, non-overlapping

    std::size_t size() const { return tokens.size(); }
};

/// Trains a BPE vocabulary: characters above the coverage threshold form the
/// alphabet, then the highest-frequency adjacent pair merges repeatedly until
/// `vocab_size` pieces exist or no pair repeats. Ties break on the
/// lexicographically smallest merged string. Deterministic.
SubwordVocab train_subword(const std::vector<std::string>& texts, int vocab_size,
                           double coverage);

/// Greedy merge application in rank order within word boundaries. Word-initial
/// pieces carry the boundary marker; characters outside the vocabulary map to
/// the UNK piece. Special literals ("<unk>", "<mask>") encode to their pieces.
TokenizedText encode(const SubwordVocab& vocab, std::string_view normalized_text);

/// Inverse of encode for UNK-free input: boundary markers become spaces.
/// Throws when a token is not a known piece.
std::string decode(const SubwordVocab& vocab, const std::vector<std::string>& tokens);

/// Versioned plain-text vocab file; save and reload are bit-exact.
void save_vocab(const SubwordVocab& vocab, const std::filesystem::path& path);
SubwordVocab load_vocab(const std::filesystem::path& path);

}  // namespace absa
