#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phishscope/ratio.hpp"

namespace phishscope {

class EmptyCorpus : public std::runtime_error {
public:
    EmptyCorpus() : std::runtime_error("corpus is empty") {}
};

/// A named, ordered list of suggestive words.
struct WordList {
    std::string name;
    std::vector<std::string> words;

    /// Throws std::invalid_argument unless words are non-empty, lowercase
    /// and unique.
    void validate() const;

    friend bool operator==(const WordList&, const WordList&) = default;
};

/// Parses a word list: one word per line, `#` comments. A `# name: <id>`
/// comment sets the list name, otherwise `fallback_name` is used.
WordList parse_wordlist(std::string_view text, std::string fallback_name);
WordList load_wordlist(const std::filesystem::path& path);

/// Case-insensitive substring test over the whole raw URL.
bool contains_word(std::string_view raw_url, std::string_view word);

struct WordPresence {
    std::string word;
    Ratio ratio;
};

std::vector<WordPresence> word_presence(std::span<const std::string> corpus, const WordList& list);

/// Lowercased maximal ASCII-alphanumeric runs of length >= min_len, sorted
/// and de-duplicated.
using TokenSet = std::vector<std::string>;
TokenSet extract_tokens(std::string_view raw_url, std::size_t min_len = 5);

struct LexiconEntry {
    std::string token;
    Ratio ratio;

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Mergeable per-token URL counts.
class TokenTally {
public:
    void add(const TokenSet& tokens);
    void merge(const TokenTally& other);

    /// Highest counts first, ties in ascending token order.
    std::vector<LexiconEntry> top(std::size_t n, std::uint64_t corpus_size) const;

    const std::unordered_map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }

    friend bool operator==(const TokenTally&, const TokenTally&) = default;

private:
    std::unordered_map<std::string, std::uint64_t> counts_;
};

std::vector<LexiconEntry> build_lexicon(std::span<const std::string> corpus, std::size_t top_n,
                                        std::size_t min_len = 5);

/// CSV with header `token,url_count,percentage`; percentages to 3 decimals.
void write_lexicon_csv(std::ostream& out, const std::vector<LexiconEntry>& entries);

}  // namespace phishscope
