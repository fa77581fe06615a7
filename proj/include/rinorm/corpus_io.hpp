#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/document.hpp"
#include "rinorm/rules.hpp"

namespace rinorm {

// i2b2 temporal-challenge XML: <TEXT> plus <TAGS> holding TIMEX3, EVENT and
// SECTIME elements (TLINKs are skipped). Offsets may be 0- or 1-based; the
// convention is detected per document by checking the text attributes.
// Throws DataError naming the document and element on any violation.
Document read_i2b2_xml(std::string_view xml, const std::string& doc_id,
                       const RuleTables& rules = default_rules());

// Gold companion file: {"id": ..., "gold_anchors": {...}} with the same gold
// block layout as the canonical schema. Replaces doc.gold_anchors.
void attach_gold(Document& doc, std::string_view companion_json);

// Canonical schema: one UTF-8 JSON document per file with keys
// id, text, sections, timexes, events, gold_anchors.
Document read_canonical(std::string_view bytes);
std::string write_canonical(const Document& doc);

// Canonical corpus directory: every *.json file, read in file-name order.
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir);
std::vector<Document> read_corpus(const std::filesystem::path& dir);
// Writes <id>.json per document, creating the directory if needed.
void write_corpus(const std::vector<Document>& docs, const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rinorm
