#pragma once
// Shared tokenization. Every consumer (mining, segmentation, feature
// counting, the synthetic generator) must agree on this rule, so it lives
// in one place.
//
// Rule: lowercase, split on any non-alphanumeric byte, drop tokens that
// are pure digits. Sentences split on . ! ? before tokenizing; the title
// is its own block ahead of the abstract.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cflow {

struct TokenizedText {
    std::vector<std::string> tokens;        // all sentences concatenated
    std::vector<uint32_t> sentence_starts;  // offset of each sentence's first token
    size_t sentence_count() const { return sentence_starts.size(); }
    // [begin, end) token range of sentence i
    std::pair<uint32_t, uint32_t> sentence(size_t i) const {
        uint32_t b = sentence_starts[i];
        uint32_t e = (i + 1 < sentence_starts.size())
                         ? sentence_starts[i + 1]
                         : static_cast<uint32_t>(tokens.size());
        return {b, e};
    }
};

std::vector<std::string> tokenize(std::string_view text);

// Splits into sentences on [.!?], tokenizes each, drops empty sentences.
TokenizedText tokenize_sentences(std::string_view text);

// Title as one block, then the abstract. Token offsets are global across
// the whole document.
TokenizedText tokenize_document(std::string_view title, std::string_view abstract);

std::string join_tokens(const std::vector<std::string>& tokens, size_t begin, size_t count);

}  // namespace cflow
