#include "absa/tokenize.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "absa/textprep.hpp"
#include "absa/utf8.hpp"

namespace absa {

namespace {

std::string merge_key(std::string_view left, std::string_view right) {
    std::string key;
    key.reserve(left.size() + right.size() + 1);
    key.append(left);
    key.push_back('\x01');
    key.append(right);
    return key;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

int SubwordVocab::piece_id(std::string_view piece) const {
    auto it = piece_ids_.find(std::string(piece));
    return it == piece_ids_.end() ? -1 : it->second;
}

int SubwordVocab::merge_rank(std::string_view left, std::string_view right) const {
    auto it = merge_ranks_.find(merge_key(left, right));
    return it == merge_ranks_.end() ? -1 : it->second;
}

void SubwordVocab::add_piece(const std::string& piece) {
    if (piece_ids_.count(piece)) return;
    piece_ids_.emplace(piece, static_cast<int>(pieces_.size()));
    pieces_.push_back(piece);
}

void SubwordVocab::index_merges() {
    merge_ranks_.clear();
    for (std::size_t r = 0; r < merges_.size(); ++r) {
        merge_ranks_.emplace(merge_key(merges_[r].left, merges_[r].right),
                             static_cast<int>(r));
    }
}

SubwordVocab train_subword(const std::vector<std::string>& texts, int vocab_size,
                           double coverage) {
    if (coverage < 0.9 || coverage > 1.0) {
        throw std::runtime_error("tokenizer coverage must be in [0.9, 1.0]");
    }

    // Collapse the corpus into unique whitespace chunks with counts.
    std::map<std::string, long long> word_counts;
    for (const auto& text : texts) {
        for (const auto& chunk : split_whitespace(text)) {
            ++word_counts[chunk.text];
        }
    }
    if (word_counts.empty()) {
        throw std::runtime_error("tokenizer training corpus is empty");
    }

    // Character frequencies decide the alphabet under the coverage threshold.
    std::map<char32_t, long long> char_counts;
    long long total_chars = 0;
    for (const auto& [word, count] : word_counts) {
        std::size_t pos = 0;
        while (pos < word.size()) {
            char32_t cp = utf8::decode(word, pos);
            char_counts[cp] += count;
            total_chars += count;
        }
    }
    std::vector<std::pair<char32_t, long long>> by_freq(char_counts.begin(), char_counts.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<char32_t> kept;
    long long covered = 0;
    for (const auto& [cp, count] : by_freq) {
        if (static_cast<double>(covered) >= coverage * static_cast<double>(total_chars) &&
            !kept.empty()) {
            break;
        }
        if (cp == 0x2581) continue;  // reserved boundary marker
        kept.push_back(cp);
        covered += count;
    }

    SubwordVocab vocab;
    vocab.requested_vocab_size_ = vocab_size;
    vocab.coverage_ = coverage;
    vocab.add_piece(std::string(SubwordVocab::kUnk));
    vocab.add_piece(std::string(SubwordVocab::kMask));
    vocab.add_piece(std::string(SubwordVocab::kBoundary));
    std::vector<std::string> alphabet;
    for (char32_t cp : kept) {
        std::string s;
        utf8::append(s, cp);
        alphabet.push_back(std::move(s));
    }
    std::sort(alphabet.begin(), alphabet.end());
    for (const auto& s : alphabet) vocab.add_piece(s);

    if (vocab_size < static_cast<int>(vocab.pieces_.size())) {
        throw std::runtime_error(
            "vocab_size " + std::to_string(vocab_size) + " is below alphabet size " +
            std::to_string(vocab.pieces_.size() - 2) + " plus specials");
    }

    // Words as sequences of piece ids: boundary marker, then characters
    // (below-coverage characters become UNK, which never merges).
    const int unk = vocab.unk_id();
    const int mask = vocab.mask_id();
    struct Word {
        std::vector<int> symbols;
        long long count;
    };
    std::vector<Word> words;
    words.reserve(word_counts.size());
    for (const auto& [word, count] : word_counts) {
        Word w;
        w.count = count;
        w.symbols.push_back(vocab.piece_id(SubwordVocab::kBoundary));
        std::size_t pos = 0;
        while (pos < word.size()) {
            std::size_t at = pos;
            char32_t cp = utf8::decode(word, pos);
            if (cp == 0x2581) {
                w.symbols.push_back(unk);
                continue;
            }
            std::string s(word, at, pos - at);
            int id = vocab.piece_id(s);
            w.symbols.push_back(id >= 0 ? id : unk);
        }
        words.push_back(std::move(w));
    }

    auto pack = [](int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };

    while (static_cast<int>(vocab.pieces_.size()) < vocab_size) {
        std::unordered_map<std::uint64_t, long long> pair_counts;
        for (const auto& w : words) {
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
                int a = w.symbols[i], b = w.symbols[i + 1];
                if (a == unk || b == unk || a == mask || b == mask) continue;
                pair_counts[pack(a, b)] += w.count;
            }
        }
        if (pair_counts.empty()) break;

        // Highest count wins; ties break on the lexicographically smallest
        // merged string, then on the left piece.
        std::uint64_t best_key = 0;
        long long best_count = 0;
        std::string best_merged, best_left;
        for (const auto& [key, count] : pair_counts) {
            if (count < best_count) continue;
            int a = static_cast<int>(key >> 32);
            int b = static_cast<int>(key & 0xFFFFFFFFu);
            std::string merged = vocab.pieces_[a] + vocab.pieces_[b];
            if (merged == SubwordVocab::kUnk || merged == SubwordVocab::kMask) continue;
            if (count > best_count || best_merged.empty() || merged < best_merged ||
                (merged == best_merged && vocab.pieces_[a] < best_left)) {
                best_key = key;
                best_count = count;
                best_merged = std::move(merged);
                best_left = vocab.pieces_[a];
            }
        }
        if (best_count < 1 || best_merged.empty()) break;

        int left_id = static_cast<int>(best_key >> 32);
        int right_id = static_cast<int>(best_key & 0xFFFFFFFFu);
        vocab.merges_.push_back({vocab.pieces_[left_id], vocab.pieces_[right_id]});
        int merged_id = vocab.piece_id(best_merged);
        if (merged_id < 0) {
            vocab.add_piece(best_merged);
            merged_id = vocab.piece_id(best_merged);
        }

        // Leftmost, non-overlapping application.
        for (auto& w : words) {
            auto& sym = w.symbols;
            std::size_t write = 0;
            for (std::size_t read = 0; read < sym.size();) {
                if (read + 1 < sym.size() && sym[read] == left_id && sym[read + 1] == right_id) {
                    sym[write++] = merged_id;
                    read += 2;
                } else {
                    sym[write++] = sym[read++];
                }
            }
            sym.resize(write);
        }
    }

    vocab.index_merges();
    return vocab;
}

namespace {

struct Symbol {
    std::string text;
    std::size_t start;
    std::size_t end;
    int prev;
    int next;
    bool alive;
};

// Applies merges by repeatedly taking the lowest-rank pair, leftmost first.
// Equivalent to running the rules in rank order over the word.
void apply_merges(const SubwordVocab& vocab, std::vector<Symbol>& symbols) {
    struct Candidate {
        int rank;
        int pos;
        bool operator>(const Candidate& o) const {
            if (rank != o.rank) return rank > o.rank;
            return pos > o.pos;
        }
    };
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;

    auto push_pair = [&](int i) {
        if (i < 0) return;
        int j = symbols[i].next;
        if (j < 0) return;
        int rank = vocab.merge_rank(symbols[i].text, symbols[j].text);
        if (rank >= 0) heap.push({rank, i});
    };
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) push_pair(static_cast<int>(i));

    while (!heap.empty()) {
        Candidate c = heap.top();
        heap.pop();
        int i = c.pos;
        if (!symbols[i].alive) continue;
        int j = symbols[i].next;
        if (j < 0 || !symbols[j].alive) continue;
        if (vocab.merge_rank(symbols[i].text, symbols[j].text) != c.rank) continue;

        symbols[i].text += symbols[j].text;
        symbols[i].end = symbols[j].end;
        symbols[j].alive = false;
        symbols[i].next = symbols[j].next;
        if (symbols[j].next >= 0) symbols[symbols[j].next].prev = i;
        push_pair(symbols[i].prev);
        push_pair(i);
    }
}

// Segments a whitespace chunk around embedded special literals.
struct Segment {
    std::string text;
    std::size_t start;
    bool is_special;
};

std::vector<Segment> split_specials(const std::string& chunk) {
    static const std::string kSpecials[] = {std::string(SubwordVocab::kUnk),
                                            std::string(SubwordVocab::kMask)};
    std::vector<Segment> segments;
    std::size_t pos = 0;
    while (pos < chunk.size()) {
        std::size_t next = std::string::npos;
        std::size_t next_len = 0;
        for (const auto& sp : kSpecials) {
            std::size_t at = chunk.find(sp, pos);
            if (at != std::string::npos && (next == std::string::npos || at < next)) {
                next = at;
                next_len = sp.size();
            }
        }
        if (next == std::string::npos) {
            segments.push_back({chunk.substr(pos), pos, false});
            break;
        }
        if (next > pos) segments.push_back({chunk.substr(pos, next - pos), pos, false});
        segments.push_back({chunk.substr(next, next_len), next, true});
        pos = next + next_len;
    }
    return segments;
}

}  // namespace

TokenizedText encode(const SubwordVocab& vocab, std::string_view normalized_text) {
    if (!vocab.trained()) throw std::runtime_error("encode called with an untrained vocab");
    TokenizedText out;
    const std::string boundary(SubwordVocab::kBoundary);
    const std::string unk_text(SubwordVocab::kUnk);

    for (const auto& chunk : split_whitespace(normalized_text)) {
        bool word_initial = true;
        for (const auto& seg : split_specials(chunk.text)) {
            std::size_t seg_base = chunk.start + seg.start;
            if (seg.is_special) {
                if (word_initial) {
                    // Bare marker keeps the word boundary recoverable on decode.
                    out.tokens.push_back(boundary);
                    out.ids.push_back(vocab.piece_id(boundary));
                    out.offsets.emplace_back(seg_base, seg_base);
                }
                out.tokens.push_back(seg.text);
                out.ids.push_back(vocab.piece_id(seg.text));
                out.offsets.emplace_back(seg_base, seg_base + seg.text.size());
                word_initial = false;
                continue;
            }
            std::vector<Symbol> symbols;
            if (word_initial) {
                symbols.push_back({boundary, seg_base, seg_base, -1, -1, true});
            }
            std::size_t pos = 0;
            while (pos < seg.text.size()) {
                std::size_t at = pos;
                char32_t cp = utf8::decode(seg.text, pos);
                std::string piece(seg.text, at, pos - at);
                if (cp == 0x2581 || vocab.piece_id(piece) < 0) piece = unk_text;
                symbols.push_back({piece, seg_base + at, seg_base + pos, -1, -1, true});
            }
            for (std::size_t k = 0; k < symbols.size(); ++k) {
                symbols[k].prev = static_cast<int>(k) - 1;
                symbols[k].next = k + 1 < symbols.size() ? static_cast<int>(k) + 1 : -1;
            }
            apply_merges(vocab, symbols);
            for (const auto& sym : symbols) {
                if (!sym.alive) continue;
                int id = vocab.piece_id(sym.text);
                if (id < 0) {  // unseen merge result; fall back to UNK
                    id = vocab.unk_id();
                    out.tokens.push_back(unk_text);
                } else {
                    out.tokens.push_back(sym.text);
                }
                out.ids.push_back(id);
                out.offsets.emplace_back(sym.start, sym.end);
            }
            word_initial = false;
        }
    }
    return out;
}

std::string decode(const SubwordVocab& vocab, const std::vector<std::string>& tokens) {
    const std::string boundary(SubwordVocab::kBoundary);
    std::string out;
    for (const auto& token : tokens) {
        if (vocab.piece_id(token) < 0) {
            throw std::runtime_error("decode: unknown piece \"" + token + "\"");
        }
        std::string_view body = token;
        if (body.substr(0, boundary.size()) == boundary) {
            out.push_back(' ');
            body.remove_prefix(boundary.size());
        }
        out.append(body);
    }
    if (!out.empty() && out.front() == ' ') out.erase(out.begin());
    return out;
}

void save_vocab(const SubwordVocab& vocab, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write vocab file " + path.string());
    file << "absa-vocab 1 " << vocab.requested_vocab_size() << ' '
         << format_double(vocab.coverage()) << ' ' << vocab.pieces().size() << ' '
         << vocab.merges().size() << '\n';
    for (const auto& piece : vocab.pieces()) file << piece << '\n';
    for (std::size_t r = 0; r < vocab.merges().size(); ++r) {
        file << vocab.merges()[r].left << ' ' << vocab.merges()[r].right << ' ' << r << '\n';
    }
    if (!file.good()) throw std::runtime_error("write failed for vocab file " + path.string());
}

SubwordVocab load_vocab(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot read vocab file " + path.string());
    std::string line;
    if (!std::getline(file, line)) throw std::runtime_error("empty vocab file " + path.string());
    std::istringstream header(line);
    std::string magic;
    int version = 0, vocab_size = 0;
    double coverage = 0.0;
    std::size_t n_pieces = 0, n_merges = 0;
    header >> magic >> version >> vocab_size >> coverage >> n_pieces >> n_merges;
    if (magic != "absa-vocab" || version != 1 || header.fail()) {
        throw std::runtime_error("bad vocab header in " + path.string());
    }
    SubwordVocab vocab;
    vocab.requested_vocab_size_ = vocab_size;
    vocab.coverage_ = coverage;
    for (std::size_t i = 0; i < n_pieces; ++i) {
        if (!std::getline(file, line)) {
            throw std::runtime_error("vocab file truncated in pieces: " + path.string());
        }
        vocab.add_piece(line);
    }
    for (std::size_t i = 0; i < n_merges; ++i) {
        if (!std::getline(file, line)) {
            throw std::runtime_error("vocab file truncated in merges: " + path.string());
        }
        std::istringstream row(line);
        std::string left, right;
        std::size_t rank = 0;
        row >> left >> right >> rank;
        if (row.fail() || rank != i) {
            throw std::runtime_error("bad merge line in " + path.string() + ": " + line);
        }
        vocab.merges_.push_back({left, right});
    }
    vocab.index_merges();
    return vocab;
}

}  // namespace absa
