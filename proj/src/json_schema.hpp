#pragma once

// JSON helpers shared by the canonical corpus, prediction and report writers.

#include <json.hpp>

#include <string>
#include <string_view>

#include "rinorm/document.hpp"
#include "rinorm/error.hpp"

namespace rinorm::json {

using Json = nlohmann::ordered_json;

// Walks a parsed document, reporting schema violations with the field path.
class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const Json& node() const noexcept { return node_; }
  const std::string& path() const noexcept { return path_; }

  Reader at(std::string_view key) const;
  Reader at(std::size_t index) const;
  bool has(std::string_view key) const;
  bool is_null() const noexcept { return node_.is_null(); }

  std::string string() const;
  std::size_t size_value() const;
  bool boolean() const;
  double number() const;
  std::size_t array_size() const;
  void expect_object() const;
  // Rejects keys outside `allowed`.
  void only_keys(std::initializer_list<std::string_view> allowed) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const Json& node_;
  std::string path_;
};

Json parse(std::string_view bytes, std::string_view what);

// Full values render as ISO 8601; anything else as the raw source string.
std::string value_string(const TimexValue& value, const std::string& raw);
// Inverse of value_string: full ISO values parse, anything else is kept raw.
void read_value(const std::string& text, TimexValue& value, std::string& raw);

Json to_json(const TimexMention& m, bool with_section);
TimexMention timex_from(const Reader& r, bool with_section);

Json to_json(const GoldAnchors& gold);
GoldAnchors gold_from(const Reader& r);

// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace rinorm::json
