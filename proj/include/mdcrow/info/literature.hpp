#pragma once

#include "mdcrow/llm/gateway.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::info {

namespace fs = std::filesystem;

inline constexpr std::size_t kChunkChars = 3000;
inline constexpr std::size_t kTopK = 8;

// Text of the content streams of a PDF (FlateDecode or uncompressed), from
// the Tj, TJ, ' and " operators. Throws ParseError when nothing is found.
std::string extract_pdf_text(std::string_view pdf_bytes);

struct Document {
    std::string doc_id;  // file stem
    std::string source_path;
    std::string text;
};

struct CorpusChunk {
    std::string doc_id;
    std::size_t chunk_index = 0;
    std::string text;
    std::string source_path;
};

struct Corpus {
    std::vector<Document> documents;
    std::vector<CorpusChunk> chunks;
    std::vector<std::string> warnings;  // skipped files
};

// Consecutive slices of at most `size` characters; concatenation == text.
std::vector<std::string> chunk_text(std::string_view text, std::size_t size = kChunkChars);

// Reads *.txt, *.md and *.pdf (sorted by name). Unreadable files are skipped
// with a warning.
Corpus load_corpus(const fs::path& dir, std::size_t chunk_size = kChunkChars);

// Lowercase alphanumeric tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Okapi BM25 over a fixed chunk list.
class Bm25Index {
public:
    explicit Bm25Index(const std::vector<CorpusChunk>& chunks, double k1 = 1.5, double b = 0.75);
    double score(const std::vector<std::string>& query_terms, std::size_t chunk) const;
    // Indices of the best `k` chunks with positive score, best first; ties by index.
    std::vector<std::size_t> top(std::string_view query, std::size_t k) const;
    double idf(const std::string& term) const;

private:
    double k1_, b_, avg_len_ = 0.0;
    std::vector<std::vector<std::pair<std::string, int>>> tf_;  // sorted term counts per chunk
    std::vector<std::size_t> len_;
    std::vector<std::pair<std::string, int>> df_;  // sorted
};

struct Citation {
    std::string doc_id;
    std::size_t chunk_index = 0;
    friend bool operator==(const Citation&, const Citation&) = default;
};

struct LiteratureAnswer {
    std::string answer;
    std::vector<Citation> citations;
    std::vector<std::size_t> retrieved;  // chunk indices in rank order
    std::vector<std::string> warnings;
    bool no_sources = false;
};

// "[doc_id#chunk]" label used in the synthesis prompt and in answers.
std::string citation_label(const Citation& c);

/// Retrieve top-k chunks and synthesize one answer with one model call. A
/// null model yields an extractive answer built from the retrieved chunks.
LiteratureAnswer literature_search(std::string_view question, const Corpus& corpus, llm::ChatModel* model,
                                   std::size_t top_k = kTopK);

std::string format_literature_answer(const LiteratureAnswer& a, const Corpus& corpus);

} // namespace mdcrow::info
