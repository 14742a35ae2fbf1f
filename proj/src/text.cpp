#include "cflow/text.hpp"

#include <cctype>

namespace cflow {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0; }

bool all_digits(const std::string& t) {
    for (unsigned char c : t)
        if (!std::isdigit(c)) return false;
    return true;
}

void tokenize_into(std::string_view text, std::vector<std::string>& out) {
    std::string cur;
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            if (!all_digits(cur)) out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty() && !all_digits(cur)) out.push_back(cur);
}

void append_sentences(std::string_view text, TokenizedText& doc) {
    size_t start = 0;
    auto flush = [&](size_t end) {
        std::string_view piece = text.substr(start, end - start);
        size_t before = doc.tokens.size();
        tokenize_into(piece, doc.tokens);
        if (doc.tokens.size() > before)
            doc.sentence_starts.push_back(static_cast<uint32_t>(before));
    };
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            flush(i);
            start = i + 1;
        }
    }
    flush(text.size());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    tokenize_into(text, out);
    return out;
}

TokenizedText tokenize_sentences(std::string_view text) {
    TokenizedText doc;
    append_sentences(text, doc);
    return doc;
}

TokenizedText tokenize_document(std::string_view title, std::string_view abstract) {
    TokenizedText doc;
    append_sentences(title, doc);
    append_sentences(abstract, doc);
    return doc;
}

std::string join_tokens(const std::vector<std::string>& tokens, size_t begin, size_t count) {
    std::string out;
    for (size_t i = 0; i < count; ++i) {
        if (i) out.push_back(' ');
        out += tokens[begin + i];
    }
    return out;
}

}  // namespace cflow
