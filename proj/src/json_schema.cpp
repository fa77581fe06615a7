#include "json_schema.hpp"

#include <algorithm>
#include <cmath>

namespace rinorm::json {

Reader Reader::at(std::string_view key) const {
  expect_object();
  const auto it = node_.find(std::string(key));
  if (it == node_.end()) fail("missing field \"" + std::string(key) + "\"");
  return Reader(*it, path_.empty() ? std::string(key) : path_ + "." + std::string(key));
}

Reader Reader::at(std::size_t index) const {
  if (!node_.is_array() || index >= node_.size()) fail("index " + std::to_string(index) + " out of range");
  return Reader(node_[index], path_ + "[" + std::to_string(index) + "]");
}

bool Reader::has(std::string_view key) const {
  return node_.is_object() && node_.contains(std::string(key));
}

std::string Reader::string() const {
  if (!node_.is_string()) fail("expected a string");
  return node_.get<std::string>();
}

std::size_t Reader::size_value() const {
  if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<long long>() >= 0)) {
    fail("expected a non-negative integer");
  }
  return node_.get<std::size_t>();
}

bool Reader::boolean() const {
  if (!node_.is_boolean()) fail("expected true or false");
  return node_.get<bool>();
}

double Reader::number() const {
  if (!node_.is_number()) fail("expected a number");
  const double v = node_.get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

std::size_t Reader::array_size() const {
  if (!node_.is_array()) fail("expected an array");
  return node_.size();
}

void Reader::expect_object() const {
  if (!node_.is_object()) fail("expected an object");
}

void Reader::only_keys(std::initializer_list<std::string_view> allowed) const {
  expect_object();
  for (const auto& [key, value] : node_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail("unknown field \"" + key + "\"");
  }
}

void Reader::fail(const std::string& message) const {
  throw DataError((path_.empty() ? std::string("<root>") : path_) + ": " + message);
}

Json parse(std::string_view bytes, std::string_view what) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    const std::string msg = e.what();
    const bool truncated =
        msg.find("unexpected end of input") != std::string::npos || e.byte >= bytes.size();
    throw ParseError("json", std::string(what) + ": " + (truncated ? "unexpected end of input" : "malformed JSON") +
                                 " (" + msg + ")");
  }
}

std::string value_string(const TimexValue& value, const std::string& raw) {
  return is_full(value) ? format_iso8601(value) : raw;
}

void read_value(const std::string& text, TimexValue& value, std::string& raw) {
  value = Unresolved{};
  raw.clear();
  if (text.empty()) return;
  try {
    TimexValue parsed = parse_iso8601(text);
    if (is_full(parsed)) {
      value = parsed;
      return;
    }
  } catch (const ParseError&) {
  }
  raw = text;
}

Json to_json(const TimexMention& m, bool with_section) {
  Json j;
  j["id"] = m.id;
  j["start"] = m.start;
  j["end"] = m.end;
  j["text"] = m.text;
  j["type"] = to_string(m.type);
  j["value"] = value_string(m.value, m.raw_value);
  if (with_section) {
    j["is_absolute"] = m.is_absolute;
    j["section"] = to_string(m.section);
  }
  return j;
}

TimexMention timex_from(const Reader& r, bool with_section) {
  if (with_section) {
    r.only_keys({"id", "start", "end", "text", "type", "value", "is_absolute", "section"});
  } else {
    r.only_keys({"id", "start", "end", "text", "type", "value"});
  }
  TimexMention m;
  m.id = r.at("id").string();
  m.start = r.at("start").size_value();
  m.end = r.at("end").size_value();
  m.text = r.at("text").string();
  try {
    m.type = parse_timex_type(r.at("type").string());
  } catch (const ParseError& e) {
    r.at("type").fail(e.what());
  }
  read_value(r.at("value").string(), m.value, m.raw_value);
  if (with_section) {
    m.is_absolute = r.at("is_absolute").boolean();
    try {
      m.section = parse_section_kind(r.at("section").string());
    } catch (const ParseError& e) {
      r.at("section").fail(e.what());
    }
  }
  return m;
}

Json to_json(const GoldAnchors& gold) {
  Json j = Json::object();
  for (const auto& [id, g] : gold) {
    Json entry;
    entry["anchor_points"] = Json::array();
    for (auto label : g.anchor_points) entry["anchor_points"].push_back(to_string(label));
    entry["relation"] = to_string(g.relation);
    entry["value"] = is_full(g.value) ? format_iso8601(g.value) : std::string();
    j[id] = std::move(entry);
  }
  return j;
}

GoldAnchors gold_from(const Reader& r) {
  r.expect_object();
  GoldAnchors gold;
  for (const auto& [id, unused] : r.node().items()) {
    const Reader entry = r.at(id);
    entry.only_keys({"anchor_points", "relation", "value"});
    GoldAnchor g;
    const Reader points = entry.at("anchor_points");
    for (std::size_t i = 0; i < points.array_size(); ++i) {
      try {
        g.anchor_points.push_back(parse_anchor_point(points.at(i).string()));
      } catch (const ParseError& e) {
        points.at(i).fail(e.what());
      }
    }
    std::sort(g.anchor_points.begin(), g.anchor_points.end());
    g.anchor_points.erase(std::unique(g.anchor_points.begin(), g.anchor_points.end()), g.anchor_points.end());
    try {
      g.relation = parse_anchor_relation(entry.at("relation").string());
    } catch (const ParseError& e) {
      entry.at("relation").fail(e.what());
    }
    const std::string value = entry.at("value").string();
    if (!value.empty()) {
      try {
        g.value = parse_iso8601(value);
      } catch (const ParseError& e) {
        entry.at("value").fail(e.what());
      }
      if (!is_full(g.value)) entry.at("value").fail("gold value must be a full date or date-time");
    }
    gold.emplace(id, std::move(g));
  }
  return gold;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rinorm::json
