#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

/// \brief Small text utilities shared by the extraction, topic and embedding stages.
namespace trumor::text {

std::string to_lower(std::string_view s);

/// Canonical form of an entity or relation label: surrounding quotes
/// stripped, lowercased, trimmed, internal whitespace collapsed to one space.
/// Idempotent.
std::string normalize_label(std::string_view s);

/// Lowercase, split on non-alphanumerics, drop tokens shorter than 2
/// characters and stopwords.
std::vector<std::string> tokenize(std::string_view s);

/// Same split as tokenize() but keeps every alphanumeric token.
std::vector<std::string> raw_tokens(std::string_view s);

bool is_stopword(std::string_view lowered);

/// Splits on '.', '!' or '?' followed by whitespace and an uppercase letter
/// (or end of input). Known abbreviations ("Dr.", "e.g.", ...) and
/// single-letter initials do not end a sentence.
std::vector<std::string> split_sentences(std::string_view text);

std::string trim(std::string_view s);

std::uint64_t fnv1a(std::string_view s);

}  // namespace trumor::text
