#include "phishscope/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "phishscope/text.hpp"

namespace phishscope {

void WordList::validate() const {
    if (words.empty()) throw std::invalid_argument("word list '" + name + "' is empty");
    std::set<std::string_view> seen;
    for (const auto& w : words) {
        if (w.empty()) throw std::invalid_argument("word list '" + name + "' has an empty word");
        if (ascii_lower(w) != w) throw std::invalid_argument("word '" + w + "' is not lowercase");
        if (!seen.insert(w).second) throw std::invalid_argument("duplicate word '" + w + "' in '" + name + "'");
    }
}

WordList parse_wordlist(std::string_view text, std::string fallback_name) {
    WordList list{std::move(fallback_name), {}};
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto view = trim(line);
        if (view.starts_with("#")) {
            auto comment = trim(view.substr(1));
            if (comment.starts_with("name:")) list.name = std::string(trim(comment.substr(5)));
            continue;
        }
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = trim(view.substr(0, hash));
        if (!view.empty()) list.words.emplace_back(view);
    }
    list.validate();
    return list;
}

WordList load_wordlist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read word list " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_wordlist(buffer.str(), path.stem().string());
}

bool contains_word(std::string_view raw_url, std::string_view word) {
    if (word.empty() || word.size() > raw_url.size()) return word.empty();
    const auto it = std::search(raw_url.begin(), raw_url.end(), word.begin(), word.end(),
                                [](char a, char b) { return ascii_lower(a) == ascii_lower(b); });
    return it != raw_url.end();
}

std::vector<WordPresence> word_presence(std::span<const std::string> corpus, const WordList& list) {
    if (corpus.empty()) throw EmptyCorpus();
    std::vector<WordPresence> result;
    result.reserve(list.words.size());
    for (const auto& word : list.words) {
        WordPresence p{word, {0, corpus.size()}};
        for (const auto& url : corpus) {
            if (contains_word(url, word)) ++p.ratio.count;
        }
        result.push_back(std::move(p));
    }
    return result;
}

TokenSet extract_tokens(std::string_view raw_url, std::size_t min_len) {
    TokenSet tokens;
    std::size_t i = 0;
    while (i < raw_url.size()) {
        if (!is_ascii_alnum(raw_url[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw_url.size() && is_ascii_alnum(raw_url[j])) ++j;
        if (j - i >= min_len) tokens.push_back(ascii_lower(raw_url.substr(i, j - i)));
        i = j;
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

void TokenTally::add(const TokenSet& tokens) {
    for (const auto& t : tokens) ++counts_[t];
}

void TokenTally::merge(const TokenTally& other) {
    for (const auto& [token, count] : other.counts_) counts_[token] += count;
}

std::vector<LexiconEntry> TokenTally::top(std::size_t n, std::uint64_t corpus_size) const {
    std::vector<std::pair<std::string_view, std::uint64_t>> ranked(counts_.begin(), counts_.end());
    auto better = [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    };
    const std::size_t keep = std::min(n, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), better);
    std::vector<LexiconEntry> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        out.push_back(LexiconEntry{std::string(ranked[i].first), {ranked[i].second, corpus_size}});
    }
    return out;
}

std::vector<LexiconEntry> build_lexicon(std::span<const std::string> corpus, std::size_t top_n, std::size_t min_len) {
    if (corpus.empty()) throw EmptyCorpus();
    if (top_n < 1) throw std::invalid_argument("top_n must be at least 1");
    if (min_len < 1) throw std::invalid_argument("min_len must be at least 1");
    TokenTally tally;
    for (const auto& url : corpus) tally.add(extract_tokens(url, min_len));
    return tally.top(top_n, corpus.size());
}

void write_lexicon_csv(std::ostream& out, const std::vector<LexiconEntry>& entries) {
    out << "token,url_count,percentage\n";
    for (const auto& e : entries) {
        out << e.token << ',' << e.ratio.count << ',' << format_percent(e.ratio, 3) << '\n';
    }
}

}  // namespace phishscope
