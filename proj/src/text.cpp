#include "trumor/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace trumor::text {

namespace {

constexpr std::array<std::string_view, 58> kStopwords = {
    "a",     "an",    "and",   "are",   "as",    "at",    "be",    "been",
    "but",   "by",    "can",   "could", "did",   "do",    "does",  "for",
    "from",  "had",   "has",   "have",  "he",    "her",   "his",   "if",
    "in",    "into",  "is",    "it",    "its",   "may",   "might", "must",
    "no",    "not",   "of",    "on",    "or",    "our",   "she",   "should",
    "so",    "than",  "that",  "the",   "their", "them",  "they",  "this",
    "to",    "was",   "we",    "were",  "which", "will",  "with",  "would",
    "you",   "your"};

constexpr std::array<std::string_view, 16> kAbbreviations = {
    "dr", "mr", "mrs", "ms", "prof", "st", "vs", "etc", "e.g", "i.e",
    "inc", "ltd", "jr", "sr", "no", "fig"};

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> split_alnum(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (is_alnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Word immediately preceding position `dot` (exclusive), lowercased.
std::string word_before(std::string_view text, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(text[b - 1])) --b;
    std::string w = to_lower(text.substr(b, dot - b));
    while (!w.empty() && !is_alnum(w.front())) w.erase(w.begin());
    return w;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string normalize_label(std::string_view s) {
    std::string t = trim(s);
    while (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') ||
                             (t.front() == '\'' && t.back() == '\''))) {
        t = trim(std::string_view(t).substr(1, t.size() - 2));
    }
    std::string out;
    out.reserve(t.size());
    bool pending_space = false;
    for (char c : t) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool is_stopword(std::string_view lowered) {
    return std::find(kStopwords.begin(), kStopwords.end(), lowered) != kStopwords.end();
}

std::vector<std::string> raw_tokens(std::string_view s) { return split_alnum(s); }

std::vector<std::string> tokenize(std::string_view s) {
    auto toks = split_alnum(s);
    std::erase_if(toks, [](const std::string& t) { return t.size() < 2 || is_stopword(t); });
    return toks;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // absorb runs of terminators and closing quotes
        std::size_t end = i + 1;
        while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
                                     text[end] == '"' || text[end] == '\'' || text[end] == ')'))
            ++end;
        std::size_t j = end;
        while (j < text.size() && is_space(text[j])) ++j;
        const bool at_end = j >= text.size();
        if (!at_end) {
            if (j == end) continue;  // no whitespace: "A.Z." or "3.5"
            if (!std::isupper(static_cast<unsigned char>(text[j])) &&
                !std::isdigit(static_cast<unsigned char>(text[j])))
                continue;
        }
        if (c == '.') {
            const std::string w = word_before(text, i);
            const bool initial = w.size() == 1 && std::isalpha(static_cast<unsigned char>(w[0]));
            const bool abbrev =
                std::find(kAbbreviations.begin(), kAbbreviations.end(), w) != kAbbreviations.end();
            if (!at_end && (initial || abbrev)) continue;
        }
        std::string s = trim(text.substr(start, end - start));
        if (!s.empty()) out.push_back(std::move(s));
        start = end;
        i = end - 1;
    }
    std::string tail = trim(text.substr(std::min(start, text.size())));
    if (!tail.empty()) out.push_back(std::move(tail));
    // drop fragments without any word characters
    std::erase_if(out, [](const std::string& s) { return split_alnum(s).empty(); });
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace trumor::text
