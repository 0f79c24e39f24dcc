#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace covidbot::corpus {

// One ingested article. combined_text is the abstract and body joined by a
// single newline, with empty parts skipped.
struct Document {
  std::string doc_id;
  std::string abstract_text;
  std::string body_text;
  std::string combined_text;

  static Document make(std::string doc_id, std::string abstract_text,
                       std::string body_text);

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;  // sorted by doc_id
  std::string source_dir;
  std::size_t rejected = 0;
  std::vector<std::string> rejected_files;

  bool empty() const noexcept { return documents.empty(); }
  std::size_t size() const noexcept { return documents.size(); }
};

// Parses one CORD-19 article record. `fallback_id` is used when the record has
// no paper_id (typically the file stem).
//
// Throws Error{kParse} naming the missing/ill-typed field, or
// Error{kRejectedDocument} when both abstract and body are empty.
Document load_article(std::string_view file_bytes,
                      std::string_view fallback_id = {});

// Loads every *.json file under `source_dir` (recursively). Files that fail to
// parse, and duplicate paper ids after the first, are tallied in `rejected`.
Corpus build_corpus(const std::filesystem::path& source_dir);

// Case-insensitive substring search over every combined_text.
bool term_present(const Corpus& corpus, std::string_view term);

// Cache format: one JSON object per line with doc_id, abstract_text and
// body_text. Output depends only on the documents.
std::string serialize_corpus(const Corpus& corpus);
void save_corpus_cache(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_cache(const std::filesystem::path& path);

// Directory -> build_corpus, regular file -> load_corpus_cache.
Corpus open_corpus(const std::filesystem::path& path);

}  // namespace covidbot::corpus
