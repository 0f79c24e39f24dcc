#include "covidbot/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "covidbot/error.hpp"
#include "covidbot/text_util.hpp"
#include "json.hpp"

namespace covidbot::corpus {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_paragraphs(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw Error(Errc::kParse, std::string("missing field '") + field + "'");
  }
  if (!it->is_array()) {
    throw Error(Errc::kParse, std::string("field '") + field + "' is not a list");
  }
  std::vector<std::string> texts;
  texts.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& entry = (*it)[i];
    const std::string where =
        std::string(field) + "[" + std::to_string(i) + "].text";
    if (!entry.is_object()) throw Error(Errc::kParse, "missing field '" + where + "'");
    auto text = entry.find("text");
    if (text == entry.end()) throw Error(Errc::kParse, "missing field '" + where + "'");
    if (!text->is_string()) throw Error(Errc::kParse, "field '" + where + "' is not a string");
    texts.push_back(text->get<std::string>());
  }
  return text::join(texts, "\n");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Document Document::make(std::string doc_id, std::string abstract_text,
                        std::string body_text) {
  Document d{std::move(doc_id), std::move(abstract_text), std::move(body_text), {}};
  if (!d.abstract_text.empty()) d.combined_text = d.abstract_text;
  if (!d.body_text.empty()) {
    if (!d.combined_text.empty()) d.combined_text += '\n';
    d.combined_text += d.body_text;
  }
  return d;
}

Document load_article(std::string_view file_bytes, std::string_view fallback_id) {
  json record = json::parse(file_bytes.begin(), file_bytes.end(), nullptr,
                            /*allow_exceptions=*/false);
  if (record.is_discarded()) throw Error(Errc::kParse, "record is not valid JSON");
  if (!record.is_object()) throw Error(Errc::kParse, "record is not a JSON object");

  std::string doc_id;
  if (auto it = record.find("paper_id"); it != record.end() && it->is_string()) {
    doc_id = it->get<std::string>();
  }
  if (doc_id.empty()) doc_id = std::string(fallback_id);
  if (doc_id.empty()) throw Error(Errc::kParse, "missing field 'paper_id'");

  std::string abstract_text = join_paragraphs(record, "abstract");
  std::string body_text = join_paragraphs(record, "body_text");
  if (text::is_blank(abstract_text) && text::is_blank(body_text)) {
    throw Error(Errc::kRejectedDocument,
                "document '" + doc_id + "' has empty abstract and body");
  }
  return Document::make(std::move(doc_id), std::move(abstract_text),
                        std::move(body_text));
}

Corpus build_corpus(const fs::path& source_dir) {
  std::error_code ec;
  if (!fs::is_directory(source_dir, ec)) {
    throw Error(Errc::kIo, "corpus directory not found: " + source_dir.string());
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(source_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  // Sorting the paths makes duplicate resolution independent of enumeration.
  std::sort(files.begin(), files.end());

  Corpus corpus;
  corpus.source_dir = source_dir.string();
  std::set<std::string> seen;
  for (const auto& path : files) {
    const std::string rel = fs::relative(path, source_dir).generic_string();
    try {
      Document doc = load_article(read_file(path), path.stem().string());
      if (!seen.insert(doc.doc_id).second) {
        throw Error(Errc::kParse, "duplicate paper_id '" + doc.doc_id + "'");
      }
      corpus.documents.push_back(std::move(doc));
    } catch (const Error& e) {
      if (e.code() == Errc::kIo) throw;
      ++corpus.rejected;
      corpus.rejected_files.push_back(rel);
      std::cerr << "[corpus] skipping " << rel << ": " << e.what() << "\n";
    }
  }
  if (corpus.documents.empty()) {
    throw Error(Errc::kEmptyCorpus,
                "no parseable articles in " + source_dir.string());
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return corpus;
}

bool term_present(const Corpus& corpus, std::string_view term) {
  if (term.empty()) throw Error(Errc::kInvalidArgument, "term must be non-empty");
  const std::string needle = text::lower(term);
  return std::any_of(corpus.documents.begin(), corpus.documents.end(),
                     [&](const Document& d) {
                       return text::lower(d.combined_text).find(needle) !=
                              std::string::npos;
                     });
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    json line = {{"doc_id", d.doc_id},
                 {"abstract_text", d.abstract_text},
                 {"body_text", d.body_text}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

void save_corpus_cache(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << serialize_corpus(corpus);
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

Corpus load_corpus_cache(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open corpus cache " + path.string());
  Corpus corpus;
  corpus.source_dir = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    json rec = json::parse(line, nullptr, false);
    auto is_str = [&](const char* k) { return rec.contains(k) && rec[k].is_string(); };
    if (rec.is_discarded() || !rec.is_object() || !is_str("doc_id") ||
        !is_str("abstract_text") || !is_str("body_text")) {
      throw Error(Errc::kParse, "corpus cache line " + std::to_string(lineno) +
                                    " is malformed");
    }
    corpus.documents.push_back(Document::make(rec["doc_id"].get<std::string>(),
                                              rec["abstract_text"].get<std::string>(),
                                              rec["body_text"].get<std::string>()));
  }
  if (corpus.documents.empty()) {
    throw Error(Errc::kEmptyCorpus, "corpus cache is empty: " + path.string());
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return corpus;
}

Corpus open_corpus(const fs::path& path) {
  if (fs::is_directory(path)) return build_corpus(path);
  return load_corpus_cache(path);
}

}  // namespace covidbot::corpus
